#pragma once
// Circle-mode reduction of the cubic action and the formal calculus of
// zeta-regularized determinants used to assemble the semiclassical
// partition function.
//
// Mode actions are sums of wedge monomials in the reduced fields: the
// scalar A0, the one-form Fourier modes B_n (optionally split into a
// background and a fluctuation), and the fermionic ghost pair.  Each
// monomial integrates against either the associative three-form or the
// volume form.  Coefficients are Gaussian rationals times a power of pi;
// a power of lambda tracks the fluctuation grading.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g2gauge/errors.hpp"
#include "g2gauge/rational.hpp"

namespace g2gauge {

enum class FieldKind : std::uint8_t { A0, B, Bbg, Bfluc, GhostBar, Ghost };

// Integrate the monomial wedge the associative form, or against dVol.
enum class Measure : std::uint8_t { WedgePhi, Vol };

struct ModeFactor {
    FieldKind kind = FieldKind::B;
    int mode = 0;
    bool derivative = false;

    int form_degree() const;
    // Koszul parity: form degree plus ghost number.
    bool odd() const;
    std::string str() const;
    friend auto operator<=>(const ModeFactor&, const ModeFactor&) = default;
};

struct ActionTerm {
    GaussianRational coeff;
    int pi_pow = 0;
    int lambda_pow = 0;
    Measure measure = Measure::WedgePhi;
    std::vector<ModeFactor> factors;

    std::string str() const;
    friend bool operator==(const ActionTerm&, const ActionTerm&) = default;
};

// Sorts factors with graded signs, drops squares of odd factors, merges
// equal monomials and erases zeros; the result is deterministically ordered.
std::vector<ActionTerm> canonicalize(std::vector<ActionTerm> terms);

struct SymbolicAction {
    int truncation = 0;
    std::vector<ActionTerm> terms;

    std::string str() const;
    friend bool operator==(const SymbolicAction&, const SymbolicAction&) = default;
};

// Reduction over the circle with modes |n| <= truncation: the cubic term
// with coefficient 4*pi*i*(n+m), the scalar cross term 3 A0 dB_n dB_{-n},
// and the ghost term 2*pi*n cbar_n c_n.
SymbolicAction fourier_reduce(int truncation);

struct BackgroundSplit {
    SymbolicAction quadratic;    // lambda^2
    SymbolicAction interaction;  // lambda^3
    SymbolicAction ghost;        // lambda^0
};

// Substitutes B_n -> Bbg_n + lambda * Bfluc_n.  The constant sector is the
// classical value and is dropped; the linear sector has to cancel against
// integration by parts and the truncated critical-point equations, and any
// remainder (or an input term outside the expected grading) raises
// GradingMismatch naming the offending terms.
BackgroundSplit background_split(const SymbolicAction& action);

// Quadratic sector as displayed, with its overall factor 3.
SymbolicAction quadratic_reference(int truncation);

// Remainder of the given combination modulo integration by parts and the
// truncated background equations; empty means it vanishes on shell.
std::vector<ActionTerm> reduce_modulo_relations(std::vector<ActionTerm> terms, int truncation);

// lambda = 1 and background = 0; inverse of background_split.
SymbolicAction resubstitute(const BackgroundSplit& split);

// ---- zeta-regularized infinite products ----

// prod_{n>0} (c n^k)^m with c = r * (2 pi)^s.
struct ZetaProduct {
    Rational r{1};
    int two_pi_pow = 0;
    int n_pow = 0;
    int multiplicity = 1;
};

// Value of a regularized product: a rational part, a power of 2 pi, and
// leftover fractional powers of rational bases.
struct ZetaValue {
    Rational rational_part{1};
    Rational two_pi_exponent{0};
    std::map<Rational, Rational> root_powers;

    bool exact() const { return root_powers.empty() && two_pi_exponent.is_zero(); }
    std::string str() const;
    friend bool operator==(const ZetaValue&, const ZetaValue&) = default;
    friend ZetaValue operator*(const ZetaValue& a, const ZetaValue& b);
};

// zeta(0) = -1/2 and zeta'(0) = -log(2 pi)/2 give
// prod_{n>0} (c n^k)^m = c^{-m/2} (2 pi)^{k m / 2}.
ZetaValue zeta_product_eval(const ZetaProduct& product);
ZetaValue zeta_product_eval(const std::vector<ZetaProduct>& products);

// ---- formal determinant expressions ----

// D is the Laplacian; Dp its restriction transverse to closed forms; Dpp
// the complementary exact part.
enum class DetOp : std::uint8_t { D, Dp, Dpp };

struct DetAtom {
    Rational scale{1};
    DetOp op = DetOp::D;
    std::string space;

    std::string str() const;
    friend auto operator<=>(const DetAtom&, const DetAtom&) = default;
};

// Product of det' atoms and named volume factors at rational exponents,
// with a rational prefactor.
struct FormalDet {
    Rational prefactor{1};
    std::map<DetAtom, Rational> dets;
    std::map<std::string, Rational> vols;

    bool trivial() const { return prefactor == Rational(1) && dets.empty() && vols.empty(); }
    std::string str() const;
    friend bool operator==(const FormalDet&, const FormalDet&) = default;
};

FormalDet operator*(const FormalDet& a, const FormalDet& b);

// det'(c Delta|space)^e = c^{-betti * e} det'(Delta|space)^e, applied to
// every full-Laplacian atom on the named space.  betti * e has to stay
// integral so the prefactor remains rational.
FormalDet det_rescale(const FormalDet& expr, const Rational& c, const std::string& space,
                      int betti);

struct TraceStep {
    std::string rule;
    std::string expression;
};

struct ZscState {
    int b0 = 1;
    int b1 = 0;
    FormalDet value;
    // Set by the rescale rule, consumed by scalar_extraction.
    std::optional<Rational> branch_scale;
    std::vector<TraceStep> trace;
};

// Gaussian-integrated starting point of the assembly.
ZscState zsc_initial(int b0, int b1);

// Canonical rule chain, in application order.
const std::vector<std::string>& zsc_rule_names();

// Applies one named rewrite; throws RuleFailure when the rule does not
// match the current expression.
void zsc_apply_rule(ZscState& state, const std::string& rule);

struct ZscAssembly {
    FormalDet initial;
    FormalDet value;
    std::vector<TraceStep> trace;
};

// Runs the whole chain for the given Betti numbers of the base.
ZscAssembly assemble_Zsc(int b0, int b1);

}  // namespace g2gauge
