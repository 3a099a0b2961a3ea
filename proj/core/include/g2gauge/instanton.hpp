#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "g2gauge/g2.hpp"
#include "g2gauge/kform.hpp"
#include "g2gauge/linalg.hpp"

namespace g2gauge {

// Abelian connection 1-form with its cached curvature F = dB.
struct Connection1Form {
    KForm B;
    KForm F;
    explicit Connection1Form(KForm b);
};

// One classification condition: a boolean verdict when the input has no
// parameters, otherwise the canonical set of parameter polynomials whose
// simultaneous vanishing is equivalent to the condition.
struct Condition {
    bool parametric = false;
    bool holds = false;
    std::vector<Poly> vanishing;

    // true / false when the verdict is forced, nullopt when it depends
    // on the parameters.
    std::optional<bool> decided() const;
};

struct ClassificationReport {
    Condition flat;
    Condition sd_instanton;
    Condition asd_instanton;
    Condition higher_order;
    Condition higher_order_flat;
    Condition sd_higher_order;
    Condition asd_higher_order;
    Condition special;
    Condition trivial_special;

    std::vector<std::pair<std::string, const Condition*>> items() const;
};

ClassificationReport classify(const Connection1Form& conn, const FundamentalForm& f);

// Collapses the per-coefficient vanishing conditions of a residual form to
// polynomials in the parameters alone.
std::vector<Poly> parameter_conditions(const KForm& residual);

// The running example connection x2 e3 + a x4 e5 + b x6 e7 and the eight
// derived forms, each compared against independently transcribed references.
struct WorkedExampleRow {
    std::string name;
    KForm computed;
    KForm reference;
    bool matches;
};
struct WorkedExampleTable {
    Connection1Form connection;
    std::vector<WorkedExampleRow> rows;
    bool all_match;
};
// Report variants never throw; the plain variants throw MismatchWithReference
// when any row disagrees with its transcribed reference.
WorkedExampleTable worked_example_report();  // symbolic parameters a, b
WorkedExampleTable worked_example_report(const Rational& a, const Rational& b);
WorkedExampleTable worked_example();
WorkedExampleTable worked_example(const Rational& a, const Rational& b);

struct EnergyIdentity {
    Poly lhs;        // 2 <F, F>
    Poly rhs;        // <F ^ phi, F ^ phi>
    KForm residual;  // F ^ F ^ phi
};
EnergyIdentity energy_identity_check(const KForm& F, const FundamentalForm& f);

struct PointwiseVerdicts {
    bool type1_identity;  // projected part p1: p1^p1^phi = -2 <p1,p1> vol
    bool type2_identity;  // projected part p2: p2^p2^phi = + <p2,p2> vol
    bool forced_zero;     // pure type with vanishing residual implies F = 0
};
PointwiseVerdicts pointwise_corollary_check(const KForm& F, const FundamentalForm& f);

// Ratio ||F^F - P2(F^F)||^2 / ||F^F||^2 for constant 2-forms; the
// infeasibility statement predicts it stays away from zero.
Rational sd_ratio_exact(const KForm& F, const FundamentalForm& f);
double sd_ratio_float(const std::array<double, 21>& coeffs);

struct SdSearchResult {
    double min_ratio;
    long degenerate_count;
    std::array<double, 21> best;
};
SdSearchResult sd_infeasibility_search(int restarts, int steps, std::uint64_t seed);

// Linear system from the ratio variables u_pq = b_pq / (a_p a_q): one
// equation per triple inside the four-index support.
struct ObstructionCertificate {
    std::array<int, 4> support;
    Matrix<Rational> system;      // 4 x 6
    std::array<Rational, 4> rhs;
    int nonzero_rhs;
    std::size_t rank_system;
    std::size_t rank_augmented;
    bool inconsistent;
};
ObstructionCertificate factorization_obstruction(const KForm& target,
                                                 const std::array<int, 4>& support);

// The five fixed targets from the nonexistence proofs with their supports.
std::vector<std::pair<KForm, std::array<int, 4>>> obstruction_cases();

bool alpha_beta_infeasibility_check(int trials, std::uint64_t seed,
                                    const FundamentalForm& f);

// Abelian linearization residual 2 da ^ dB ^ phi.
KForm tangent_check(const Connection1Form& conn, const KForm& a,
                    const FundamentalForm& f);

// Integrand identity behind closedness of the canonical two-form on the
// space of higher-order instantons, abelian case.
bool presymplectic_integrand_check(const KForm& a1, const KForm& a2,
                                   const KForm& a3, const FundamentalForm& f);

}  // namespace g2gauge
