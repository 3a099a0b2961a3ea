#include "g2gauge/g2.hpp"

#include "g2gauge/errors.hpp"

namespace g2gauge {

namespace {

KForm phi0_form() {
    KForm phi(3);
    phi += KForm::basis({1, 2, 3});
    phi += KForm::basis({1, 4, 5});
    phi += KForm::basis({2, 4, 6});
    phi += KForm::basis({3, 4, 7});
    phi -= KForm::basis({1, 6, 7});
    phi += KForm::basis({2, 5, 7});
    phi -= KForm::basis({3, 5, 6});
    return phi;
}

bool eigenvalues_match(const KForm& phi, Orientation orient) {
    // (L - I)(L + 2I) = 0 where L(b) = star(phi ^ b)
    auto L = operator_matrix(2, [&](const KForm& b) {
        return hodge(wedge(phi, b), orient);
    });
    auto I = Matrix<Rational>::identity(L.rows());
    return ((L - I) * (L + I + I)).is_zero();
}

}  // namespace

std::vector<IndexTuple> tuples_of_degree(int degree) {
    std::vector<IndexTuple> out;
    for (std::uint8_t m = 0; m < 0x80; ++m) {
        IndexTuple t{m};
        if (t.degree() == degree) out.push_back(t);
    }
    return out;
}

FundamentalForm build_structure() {
    KForm phi = phi0_form();
    Orientation orient(+1);
    if (!eigenvalues_match(phi, orient)) {
        orient = Orientation(-1);
        if (!eigenvalues_match(phi, orient))
            throw ConstructionFailure(
                "neither orientation yields eigenvalues (-2, +1) on 2-forms");
    }
    return FundamentalForm{phi, hodge(phi, orient), orient};
}

TTensor::TTensor() {
    a_.fill(Rational(0));
}

Rational TTensor::entry(int i, int j, int k, int l) const {
    return a_[((i - 1) * 7 + (j - 1)) * 49 + (k - 1) * 7 + (l - 1)];
}

void TTensor::set(int i, int j, int k, int l, const Rational& v) {
    a_[((i - 1) * 7 + (j - 1)) * 49 + (k - 1) * 7 + (l - 1)] = v;
    a_[((j - 1) * 7 + (i - 1)) * 49 + (k - 1) * 7 + (l - 1)] = -v;
    a_[((i - 1) * 7 + (j - 1)) * 49 + (l - 1) * 7 + (k - 1)] = -v;
    a_[((j - 1) * 7 + (i - 1)) * 49 + (l - 1) * 7 + (k - 1)] = v;
}

TTensor t_tensor(const FundamentalForm& f) {
    TTensor t;
    for (int i = 1; i <= 7; ++i)
        for (int j = i + 1; j <= 7; ++j)
            for (int k = 1; k <= 7; ++k)
                for (int l = k + 1; l <= 7; ++l) {
                    if (i == k || i == l || j == k || j == l) continue;
                    KForm e4 = wedge(KForm::basis({i, j}), KForm::basis({k, l}));
                    KForm vol = wedge(e4, f.phi0);
                    Rational v = vol.coefficient(IndexTuple::full()).constant_value();
                    if (!v.is_zero()) t.set(i, j, k, l, v);
                }
    return t;
}

KForm t_contract(const TTensor& t, const KForm& f2) {
    if (f2.degree() != 2) throw DegreeMismatch("t_contract expects a 2-form");
    KForm out(2, f2.ring());
    for (int i = 1; i <= 7; ++i)
        for (int j = i + 1; j <= 7; ++j) {
            Poly acc = Poly::zero(f2.ring());
            for (int k = 1; k <= 7; ++k)
                for (int l = k + 1; l <= 7; ++l) {
                    Rational tv = t.entry(i, j, k, l);
                    if (tv.is_zero()) continue;
                    acc += f2.coefficient(IndexTuple::of({k, l})) * tv;
                }
            if (!acc.is_zero()) out += KForm::monomial(acc, IndexTuple::of({i, j}));
        }
    return out;
}

SpinConnection::SpinConnection() {
    a_.fill(Rational(0));
}

Rational SpinConnection::get(int s, int i, int j) const {
    return a_[((s - 1) * 7 + (i - 1)) * 7 + (j - 1)];
}

void SpinConnection::set(int s, int i, int j, const Rational& v) {
    a_[((s - 1) * 7 + (i - 1)) * 7 + (j - 1)] = v;
    a_[((s - 1) * 7 + (j - 1)) * 7 + (i - 1)] = -v;
}

bool AsdResiduals::all_zero() const {
    for (const auto& slab : residuals)
        for (const auto& r : slab)
            if (!r.is_zero()) return false;
    return true;
}

std::array<Rational, 7> asd_slab_residuals(const Matrix<Rational>& block) {
    auto o = [&](int i, int j) { return block.at(i - 1, j - 1); };
    return {
        o(1, 2) - o(5, 6) + o(4, 7),
        o(1, 3) - o(5, 7) - o(4, 6),
        o(1, 4) + o(3, 6) - o(2, 7),
        o(1, 5) + o(3, 7) + o(2, 6),
        o(1, 6) - o(2, 5) - o(3, 4),
        o(1, 7) - o(3, 5) + o(2, 4),
        o(2, 3) - o(6, 7) + o(4, 5),
    };
}

AsdResiduals asd_relation_check(const SpinConnection& omega) {
    AsdResiduals out;
    for (int s = 1; s <= 7; ++s) {
        Matrix<Rational> block(7, 7);
        for (int i = 1; i <= 7; ++i)
            for (int j = 1; j <= 7; ++j) block.at(i - 1, j - 1) = omega.get(s, i, j);
        out.residuals[s - 1] = asd_slab_residuals(block);
    }
    return out;
}

std::pair<KForm, KForm> lambda2_split(const KForm& beta, const FundamentalForm& f) {
    if (beta.degree() != 2 && !beta.is_zero())
        throw DegreeMismatch("lambda2_split expects a 2-form");
    KForm L = hodge(wedge(f.phi0, beta), f.orientation);
    Rational third(1, 3);
    KForm b1 = (beta - L) * third;
    KForm b2 = (beta + beta + L) * third;
    return {b1, b2};
}

namespace {

std::array<KForm, 3> graded_split(const KForm& beta,
                                  const std::vector<KForm>& span) {
    Orientation plus(+1);
    std::size_t n = span.size();
    Matrix<Rational> gram(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            gram.at(a, b) = inner(span[a], span[b], plus).constant_value();
    auto inv = gram.inverse();
    if (!inv) throw ConstructionFailure("degenerate spanning set");

    std::vector<Poly> rhs(n);
    for (std::size_t a = 0; a < n; ++a) rhs[a] = inner(span[a], beta, plus);

    std::vector<Poly> coeff(n, Poly::zero(beta.ring()));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) coeff[a] += rhs[b] * inv->at(a, b);

    KForm first = span[0].scaled(coeff[0]);
    KForm second(beta.degree(), beta.ring());
    for (std::size_t a = 1; a < n; ++a) second += span[a].scaled(coeff[a]);
    KForm rest = beta - first - second;
    return {first, second, rest};
}

}  // namespace

std::array<KForm, 3> lambda3_split(const KForm& beta, const FundamentalForm& f) {
    if (beta.degree() != 3 && !beta.is_zero())
        throw DegreeMismatch("lambda3_split expects a 3-form");
    std::vector<KForm> span;
    span.push_back(f.phi0);
    for (int i = 1; i <= 7; ++i) span.push_back(contract(i, f.star_phi0));
    return graded_split(beta, span);
}

std::array<KForm, 3> lambda4_split(const KForm& beta, const FundamentalForm& f) {
    if (beta.degree() != 4 && !beta.is_zero())
        throw DegreeMismatch("lambda4_split expects a 4-form");
    std::vector<KForm> span;
    span.push_back(f.star_phi0);
    for (int i = 1; i <= 7; ++i) span.push_back(wedge(KForm::basis({i}), f.phi0));
    return graded_split(beta, span);
}

}  // namespace g2gauge
