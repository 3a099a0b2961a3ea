#pragma once

#include <array>
#include <map>
#include <vector>

#include "g2gauge/g2.hpp"
#include "g2gauge/kform.hpp"
#include "g2gauge/linalg.hpp"

namespace g2gauge {

using Mat8 = Matrix<GaussianRational>;

// The seven 8x8 generators of the rank-7 Clifford algebra, purely
// imaginary, guarded by the anticommutation and product identities.
struct SpinGenerators {
    std::array<Mat8, 7> gamma;
    const Mat8& g(int i) const { return gamma[std::size_t(i - 1)]; }
    Mat8 sigma(int i, int j) const;  // 1/4 [g_i, g_j]
    // Fully antisymmetrized triple product.
    Mat8 gamma3(int i, int j, int k) const;
};

SpinGenerators gamma_matrices();
// For negative-control runs: flips one entry before the guards.
SpinGenerators gamma_matrices_corrupted();

bool spin7_bracket_check(const SpinGenerators& g);

// The 14 rotation generators spanning the exceptional subalgebra.
struct G2Basis {
    std::array<Mat8, 7> V;
    std::array<Mat8, 7> W;
    // 0..6 = V1..V7, 7..13 = W1..W7
    const Mat8& generator(std::size_t idx) const {
        return idx < 7 ? V[idx] : W[idx - 7];
    }
    static std::string generator_name(std::size_t idx);
};

G2Basis g2_basis(const SpinGenerators& g);

struct BracketExpansion {
    std::array<Rational, 14> coeff{};
    bool is_zero() const;
    friend bool operator==(const BracketExpansion&, const BracketExpansion&) = default;
};

// Expansion of every [X_a, X_b], a < b, in the V/W span.
// Throws NotInSpan if closure fails.
std::map<std::pair<std::size_t, std::size_t>, BracketExpansion> commutator_table(
    const G2Basis& b);

// Dimension of the smallest bracket-closed span containing the seed.
std::size_t closure_dimension(const std::vector<Mat8>& seed);

struct Spinor {
    std::array<GaussianRational, 8> vec{};
    Rational norm_sq;
};

// Common nullspace of the 14 generators; WrongNullity unless 1-dimensional.
Spinor invariant_spinor(const G2Basis& b);

// psi_{ijk} for i<j<k, only the nonzero values.
std::map<IndexTuple, Rational> psi_table(const Spinor& eta, const SpinGenerators& g);
// The 3-form with all index orderings summed: coefficient 6 psi_{ijk}.
KForm psi_form(const Spinor& eta, const SpinGenerators& g);

// perm[i] = image of frame index i (1-based; perm[0] unused).
using FramePermutation = std::array<int, 8>;

KForm frame_relabel(const KForm& w, const FramePermutation& perm);

struct RelabelResolution {
    std::vector<FramePermutation> successes;
    bool resolved = false;
    FramePermutation canonical{};        // first success in lexicographic order
    FramePermutation stated{};           // the reassignment given with the table
    bool stated_forward_works = false;
    bool stated_inverse_works = false;
};

// Searches all 5040 frame permutations for those taking psi to 6*phi0.
RelabelResolution resolve_frame_relabel(const KForm& psi, const KForm& phi0);

struct G2RewriteRow {
    std::array<Rational, 7> c{};  // V coefficients
    std::array<Rational, 7> d{};  // W coefficients
};

// Rewrites each torsion slab 1/2 Omega^s_{jk} Sigma_{jk} in the V/W basis;
// NotInG2 when the component relations fail.
std::array<G2RewriteRow, 7> g2_rewrite(const SpinConnection& omega,
                                       const G2Basis& b,
                                       const SpinGenerators& g);

}  // namespace g2gauge
