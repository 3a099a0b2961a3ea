#pragma once

#include <array>
#include <vector>

#include "g2gauge/kform.hpp"
#include "g2gauge/linalg.hpp"

namespace g2gauge {

// The flat G2 structure: the associative 3-form, its dual, and the
// orientation under which phi0 wedging has eigenvalues (-2, +1) on 2-forms.
struct FundamentalForm {
    KForm phi0;
    KForm star_phi0;
    Orientation orientation;
};

FundamentalForm build_structure();

// T_{ij}^{kl}: the 4-index tensor pairing a 2-index slot against the 3-form.
class TTensor {
public:
    TTensor();
    // 1-based indices, antisymmetric in (i,j) and (k,l).
    Rational entry(int i, int j, int k, int l) const;
    void set(int i, int j, int k, int l, const Rational& v);

private:
    std::array<Rational, 7 * 7 * 7 * 7> a_;
};

TTensor t_tensor(const FundamentalForm& f);

// (T F)_{ij} = 1/2 sum_{k,l} T_{ij}^{kl} F_{kl}: equals the operator
// F -> star(phi0 wedge F) on 2-forms.
KForm t_contract(const TTensor& t, const KForm& f2);

// Antisymmetric coefficients of the torsion 2-forms, one 7x7 slab per
// frame direction s.
class SpinConnection {
public:
    SpinConnection();
    Rational get(int s, int i, int j) const;
    void set(int s, int i, int j, const Rational& v);

private:
    std::array<Rational, 7 * 7 * 7> a_;
};

struct AsdResiduals {
    // residuals[s-1][r]: the 7 linear relations for frame direction s
    std::array<std::array<Rational, 7>, 7> residuals;
    bool all_zero() const;
};

// The seven component relations equivalent to the 2-form slab lying in the
// 14-dimensional eigenspace, per frame direction.
AsdResiduals asd_relation_check(const SpinConnection& omega);

// Per-slab residuals for a single antisymmetric 7x7 block.
std::array<Rational, 7> asd_slab_residuals(const Matrix<Rational>& block);

std::pair<KForm, KForm> lambda2_split(const KForm& beta, const FundamentalForm& f);
std::array<KForm, 3> lambda3_split(const KForm& beta, const FundamentalForm& f);
std::array<KForm, 3> lambda4_split(const KForm& beta, const FundamentalForm& f);

// All index tuples of one degree, in map order; the coordinate system used
// by the rank computations.
std::vector<IndexTuple> tuples_of_degree(int degree);

// Matrix of a linear operator on forms of fixed degree in the basis above.
template <class Op>
Matrix<Rational> operator_matrix(int degree, Op&& op) {
    std::vector<IndexTuple> basis = tuples_of_degree(degree);
    Matrix<Rational> m(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        KForm image = op(KForm::monomial(Poly::constant(1), basis[j]));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            Poly c = image.coefficient(basis[i]);
            m.at(i, j) = c.constant_value();
        }
    }
    return m;
}

}  // namespace g2gauge
