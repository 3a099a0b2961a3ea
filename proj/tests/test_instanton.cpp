#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "g2gauge/errors.hpp"
#include "g2gauge/g2.hpp"
#include "g2gauge/instanton.hpp"
#include "g2gauge/kform.hpp"

using namespace g2gauge;

namespace {

KForm cmono(const Rational& c, std::initializer_list<int> idx) {
    return KForm::monomial(Poly::constant(c), IndexTuple::of(idx));
}

const WorkedExampleRow& row(const WorkedExampleTable& t, const std::string& name) {
    for (const auto& r : t.rows)
        if (r.name == name) return r;
    throw Error("row not found: " + name);
}

std::map<std::string, bool> verdicts(const ClassificationReport& rep) {
    std::map<std::string, bool> out;
    for (const auto& [name, cond] : rep.items()) {
        REQUIRE_FALSE(cond->parametric);
        out[name] = cond->holds;
    }
    return out;
}

Poly random_coeff(const RingPtr& ring, std::mt19937_64& rng, int maxdeg) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> pick(0, 6);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    Poly p = Poly::zero(ring);
    for (int t = 0; t < 2; ++t) {
        Poly mono = Poly::constant(ring, Rational(coeff(rng)));
        int d = deg(rng);
        for (int k = 0; k < d; ++k) mono *= Poly::var(ring, std::size_t(pick(rng)));
        p += mono;
    }
    return p;
}

Connection1Form random_connection(const RingPtr& ring, std::mt19937_64& rng,
                                  int kind) {
    if (kind == 0) {
        // exact 1-form: the differential of a random function is flat
        return Connection1Form(ext_d(KForm::from_poly(random_coeff(ring, rng, 2))));
    }
    if (kind == 1) {
        // profile in a single variable: curvature is decomposable
        std::uniform_int_distribution<int> pick(0, 6);
        int i = pick(rng);
        int j = (i + 1) % 7;
        return Connection1Form(KForm::monomial(
            random_coeff(ring, rng, 0) * Poly::var(ring, std::size_t(i), 2),
            IndexTuple::of({j + 1})));
    }
    KForm B(1, ring);
    std::uniform_int_distribution<int> pick(0, 6);
    for (int t = 0; t < 3; ++t)
        B += KForm::monomial(random_coeff(ring, rng, 1),
                             IndexTuple::of({pick(rng) + 1}));
    return Connection1Form(B);
}

}  // namespace

TEST_CASE("connection curvature and degree guard") {
    auto t = worked_example_report();
    CHECK(t.connection.F == ext_d(t.connection.B));
    CHECK(t.connection.F.degree() == 2);
    CHECK_THROWS_AS(Connection1Form(KForm::basis({1, 2})), DegreeMismatch);

    RingPtr ring = t.connection.B.ring();
    KForm e23 = KForm::basis({2, 3}, ring);
    Poly a = Poly::var(ring, "a");
    Poly b = Poly::var(ring, "b");
    KForm expected = e23 + a * KForm::basis({4, 5}, ring) + b * KForm::basis({6, 7}, ring);
    CHECK(t.connection.F == expected);
}

TEST_CASE("worked example against transcribed references") {
    auto t = worked_example_report();
    REQUIRE(t.rows.size() == 8);
    const char* names[] = {"B^dB",     "dB^dB",      "dB^phi",        "dB^star_phi",
                           "B^dB^phi", "dB^dB^phi",  "B^dB^star_phi", "dB^dB^star_phi"};
    for (std::size_t i = 0; i < 8; ++i) CHECK(t.rows[i].name == names[i]);

    for (const auto& r : t.rows) {
        if (r.name == "dB^dB^phi")
            CHECK_FALSE(r.matches);
        else
            CHECK(r.matches);
    }
    CHECK_FALSE(t.all_match);

    // the reference table is inconsistent at the mismatching row: wedging its
    // own dB^dB entry with phi0 forces the computed value, twice the listed one
    FundamentalForm f = build_structure();
    const auto& square = row(t, "dB^dB");
    const auto& bad = row(t, "dB^dB^phi");
    CHECK(wedge(square.reference, f.phi0) == bad.computed);
    CHECK(bad.computed == bad.reference * Rational(2));

    RingPtr ring = t.connection.B.ring();
    Poly a = Poly::var(ring, "a");
    Poly b = Poly::var(ring, "b");
    Poly one = Poly::constant(ring, 1);
    CHECK(bad.computed ==
          KForm::monomial((b - a + a * b) * Rational(2), IndexTuple::full()));
    CHECK(row(t, "dB^star_phi").computed ==
          KForm::monomial(one + a - b, IndexTuple::of({2, 3, 4, 5, 6, 7})));
    CHECK(row(t, "B^dB^star_phi").computed.is_zero());
    CHECK(row(t, "dB^dB^star_phi").computed.is_zero());

    CHECK_THROWS_AS(worked_example(), MismatchWithReference);
    CHECK_THROWS_AS(worked_example(Rational(1), Rational(1)), MismatchWithReference);
    // on the locus -a + b + ab = 0 both sides of the bad row vanish
    CHECK(worked_example(Rational(0), Rational(0)).all_match);
    CHECK(worked_example(Rational(1), Rational(1, 2)).all_match);
}

TEST_CASE("classification of the parametric family") {
    auto t = worked_example_report();
    FundamentalForm f = build_structure();
    RingPtr ring = t.connection.B.ring();
    Poly a = Poly::var(ring, "a");
    Poly b = Poly::var(ring, "b");
    Poly one = Poly::constant(ring, 1);

    ClassificationReport rep = classify(t.connection, f);
    for (const auto& [name, cond] : rep.items()) CHECK(cond->parametric);

    CHECK(rep.flat.vanishing == std::vector<Poly>{one});
    CHECK(rep.flat.decided() == std::optional<bool>(false));
    CHECK(rep.sd_instanton.vanishing == std::vector<Poly>{a - one, b + one});
    CHECK(rep.asd_instanton.vanishing == std::vector<Poly>{b - a - one});
    CHECK(rep.higher_order.vanishing == std::vector<Poly>{a * b + b - a});
    CHECK(rep.asd_higher_order.vanishing == std::vector<Poly>{a * b + b - a});
    CHECK(rep.higher_order_flat.vanishing == std::vector<Poly>{a, b});
    CHECK(rep.sd_higher_order.vanishing == std::vector<Poly>{a, b});
    CHECK(rep.special.vanishing == std::vector<Poly>{a, b});
    CHECK(rep.trivial_special.vanishing == std::vector<Poly>{a, b});
    CHECK(rep.asd_instanton.decided() == std::nullopt);
    CHECK(rep.sd_higher_order.decided() == std::nullopt);
}

TEST_CASE("numeric verdicts at distinguished points") {
    FundamentalForm f = build_structure();
    auto at = [&](long long an, long long ad, long long bn, long long bd) {
        auto t = worked_example_report(Rational(an, ad), Rational(bn, bd));
        return verdicts(classify(t.connection, f));
    };

    auto v01 = at(0, 1, 1, 1);
    CHECK(v01["asd_instanton"]);
    CHECK_FALSE(v01["asd_higher_order"]);
    CHECK_FALSE(v01["higher_order"]);
    CHECK_FALSE(v01["sd_instanton"]);
    CHECK_FALSE(v01["flat"]);

    auto vhalf = at(1, 1, 1, 2);
    CHECK(vhalf["asd_higher_order"]);
    CHECK(vhalf["higher_order"]);
    CHECK_FALSE(vhalf["higher_order_flat"]);
    CHECK_FALSE(vhalf["sd_higher_order"]);
    CHECK_FALSE(vhalf["special"]);
    CHECK_FALSE(vhalf["asd_instanton"]);

    auto v00 = at(0, 1, 0, 1);
    CHECK(v00["special"]);
    CHECK(v00["trivial_special"]);
    CHECK(v00["higher_order_flat"]);
    CHECK(v00["sd_higher_order"]);
    CHECK(v00["higher_order"]);
    CHECK_FALSE(v00["flat"]);
    CHECK_FALSE(v00["asd_instanton"]);

    auto vsd = at(1, 1, -1, 1);
    CHECK(vsd["sd_instanton"]);
    CHECK_FALSE(vsd["asd_instanton"]);
    CHECK_FALSE(vsd["higher_order"]);

    // numeric verdicts agree with evaluating the symbolic vanishing sets
    auto sym = classify(worked_example_report().connection, f);
    auto eval_all = [&](const Condition& c, const Rational& av, const Rational& bv) {
        for (const Poly& p : c.vanishing)
            if (!p.eval({{"a", av}, {"b", bv}}).is_zero()) return false;
        return true;
    };
    const Rational pts[][2] = {{Rational(0), Rational(1)},
                               {Rational(1), Rational(1, 2)},
                               {Rational(0), Rational(0)},
                               {Rational(1), Rational(-1)},
                               {Rational(2), Rational(3)}};
    for (const auto& pt : pts) {
        auto t = worked_example_report(pt[0], pt[1]);
        auto num = classify(t.connection, f);
        auto numv = verdicts(num);
        for (const auto& [name, cond] : sym.items())
            CHECK(numv[name] == eval_all(*cond, pt[0], pt[1]));
    }
}

TEST_CASE("verdict implications over random polynomial connections") {
    FundamentalForm f = build_structure();
    RingPtr ring = PolyRing::create({});
    std::mt19937_64 rng(20260823);
    int flat_seen = 0, hoflat_seen = 0, ts_seen = 0, square_seen = 0;
    for (int t = 0; t < 36; ++t) {
        Connection1Form conn = random_connection(ring, rng, t % 3);
        auto v = verdicts(classify(conn, f));
        if (v["flat"]) ++flat_seen;
        if (v["higher_order_flat"]) ++hoflat_seen;
        if (v["trivial_special"]) ++ts_seen;
        if (!v["higher_order_flat"]) ++square_seen;

        CHECK((!v["trivial_special"] || v["special"]));
        CHECK((!v["special"] || v["asd_higher_order"]));
        CHECK((!v["flat"] || v["higher_order_flat"]));
        CHECK((!v["higher_order_flat"] || v["higher_order"]));
        CHECK((!v["higher_order_flat"] || v["asd_higher_order"]));
        // no nonzero curvature square sits in the 7-dimensional summand
        CHECK(v["sd_higher_order"] == v["higher_order_flat"]);
    }
    // the sweep must exercise the hypotheses, not just vacuous implications
    CHECK(flat_seen >= 3);
    CHECK(hoflat_seen > flat_seen);
    CHECK(ts_seen >= 3);
    CHECK(square_seen >= 3);
}

TEST_CASE("energy identity") {
    FundamentalForm f = build_structure();

    auto zero = energy_identity_check(KForm(2), f);
    CHECK(zero.lhs.is_zero());
    CHECK(zero.rhs.is_zero());
    CHECK(zero.residual.is_zero());

    // commuting decomposable pieces: residual vanishes and norms agree
    auto comm = energy_identity_check(KForm::basis({1, 2}) + KForm::basis({3, 4}), f);
    CHECK(comm.lhs == Poly::constant(Rational(4)));
    CHECK(comm.rhs == Poly::constant(Rational(4)));
    CHECK(comm.residual.is_zero());

    // decomposable curvature has vanishing square, so the identity holds
    auto decomp = energy_identity_check(KForm::basis({1, 2}), f);
    CHECK(decomp.lhs == Poly::constant(Rational(2)));
    CHECK(decomp.rhs == decomp.lhs);
    CHECK(decomp.residual.is_zero());

    // the 14-dimensional part of e^{12} alone breaks the identity
    auto p2only = energy_identity_check(lambda2_split(KForm::basis({1, 2}), f).second, f);
    CHECK(p2only.lhs == Poly::constant(Rational(4, 3)));
    CHECK(p2only.rhs == Poly::constant(Rational(2, 3)));
    CHECK_FALSE(p2only.residual.is_zero());

    std::mt19937_64 rng(7241);
    std::uniform_int_distribution<int> c(-3, 3);
    auto t2 = tuples_of_degree(2);
    int zero_res = 0, nonzero_res = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        KForm F(2);
        for (const auto& tup : t2) F += KForm::monomial(Poly::constant(Rational(c(rng))), tup);
        auto e = energy_identity_check(F, f);
        bool eq = e.lhs == e.rhs;
        bool rz = e.residual.is_zero();
        CHECK(eq == rz);
        (rz ? zero_res : nonzero_res)++;
    }
    CHECK(nonzero_res > 900);
    auto planted = energy_identity_check(KForm::basis({1, 3}) + KForm::basis({4, 2}), f);
    CHECK(planted.residual.is_zero());
    CHECK(planted.lhs == planted.rhs);
}

TEST_CASE("pointwise identities behind the flatness corollary") {
    FundamentalForm f = build_structure();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> c(-3, 3);
    auto t2 = tuples_of_degree(2);
    for (int trial = 0; trial < 1000; ++trial) {
        KForm F(2);
        for (const auto& tup : t2) F += KForm::monomial(Poly::constant(Rational(c(rng))), tup);
        auto v = pointwise_corollary_check(F, f);
        CHECK(v.type1_identity);
        CHECK(v.type2_identity);
        CHECK(v.forced_zero);
    }

    // pure-type pieces of e^{12} separately, with scaling
    auto [p1, p2] = lambda2_split(KForm::basis({1, 2}), f);
    CHECK(inner(p1, p1, f.orientation) == Poly::constant(Rational(1, 3)));
    CHECK(inner(p2, p2, f.orientation) == Poly::constant(Rational(2, 3)));
    for (const KForm& F : {p1 * Rational(5), p2 * Rational(-3, 2), KForm(2)}) {
        auto v = pointwise_corollary_check(F, f);
        CHECK(v.type1_identity);
        CHECK(v.type2_identity);
        CHECK(v.forced_zero);
    }

    RingPtr ring = PolyRing::create({});
    KForm varying = KForm::monomial(Poly::var(ring, "x1"), IndexTuple::of({1, 2}));
    CHECK_THROWS_AS(pointwise_corollary_check(varying, f), Error);
}

TEST_CASE("complement ratio exact float agreement") {
    FundamentalForm f = build_structure();
    KForm probe = KForm::basis({1, 2}) + KForm::basis({3, 4});
    CHECK(sd_ratio_exact(probe, f) == Rational(3, 4));

    auto t2 = tuples_of_degree(2);
    auto coeffs_of = [&](const KForm& F) {
        std::array<double, 21> out{};
        for (std::size_t i = 0; i < t2.size(); ++i)
            out[i] = F.coefficient(t2[i]).is_zero()
                         ? 0.0
                         : F.coefficient(t2[i]).constant_value().to_double();
        return out;
    };
    CHECK(std::abs(sd_ratio_float(coeffs_of(probe)) - 0.75) < 1e-12);

    CHECK_THROWS_AS(sd_ratio_exact(KForm::basis({1, 2}), f), DegenerateSample);
    CHECK_THROWS_AS(sd_ratio_float(coeffs_of(KForm::basis({1, 2}))), DegenerateSample);

    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> c(-2, 2);
    int compared = 0;
    while (compared < 40) {
        KForm F(2);
        for (const auto& tup : t2) F += KForm::monomial(Poly::constant(Rational(c(rng))), tup);
        try {
            Rational exact = sd_ratio_exact(F, f);
            double approx = sd_ratio_float(coeffs_of(F));
            CHECK(std::abs(approx - exact.to_double()) < 1e-9);
            CHECK(exact > Rational(0));
            ++compared;
        } catch (const DegenerateSample&) {
        }
    }
}

TEST_CASE("descent search stays clear of zero ratio") {
    auto res = sd_infeasibility_search(60, 80, 20260823);
    CHECK(res.min_ratio > 1e-2);
    CHECK(res.min_ratio < 1.0);
    CHECK(res.degenerate_count == 0);
    double nrm = 0;
    for (double x : res.best) nrm += x * x;
    CHECK(std::abs(nrm - 1.0) < 1e-9);

    auto res2 = sd_infeasibility_search(60, 80, 20260823);
    CHECK(res2.min_ratio == res.min_ratio);
    CHECK(res2.best == res.best);

    CHECK_THROWS_AS(sd_infeasibility_search(0, 10, 1), Error);
    CHECK_THROWS_AS(sd_infeasibility_search(10, 0, 1), Error);
}

TEST_CASE("factorization obstruction certificates") {
    FundamentalForm f = build_structure();
    auto cases = obstruction_cases();
    REQUIRE(cases.size() == 5);

    // fixed targets transcribed correctly: the first is e1 hooked into the
    // stated curvature square, the last is e1 hooked into star phi0
    KForm square = cmono(Rational(-1), {1, 2, 4, 6}) + cmono(Rational(-1), {1, 3, 4, 7}) +
                   cmono(Rational(1), {1, 2, 5, 7}) + cmono(Rational(-1), {1, 3, 5, 6});
    CHECK(cases[0].first == contract(1, square));
    CHECK(cases[4].first == contract(1, f.star_phi0));
    CHECK(cases[1].first == f.phi0 + cases[4].first);
    CHECK(cases[2].first == f.phi0 - cases[4].first);
    CHECK(cases[3].first == f.phi0);

    for (const auto& [target, support] : cases) {
        auto cert = factorization_obstruction(target, support);
        CHECK(cert.nonzero_rhs == 1);
        CHECK(cert.rank_system == 3);
        CHECK(cert.rank_augmented == 4);
        CHECK(cert.inconsistent);
        // coboundary composition: alternating row sum is identically zero
        for (std::size_t col = 0; col < 6; ++col)
            CHECK(-cert.system.at(0, col) + cert.system.at(1, col) -
                      cert.system.at(2, col) + cert.system.at(3, col) ==
                  Rational(0));
    }

    // theorem system pinned entry by entry: support {3,4,5,6}, single
    // inhomogeneous equation for the triple (3,5,6) with value -1
    auto th = factorization_obstruction(cases[0].first, cases[0].second);
    CHECK(th.rhs == std::array<Rational, 4>{Rational(0), Rational(0), Rational(-1),
                                            Rational(0)});

    // a genuine coboundary is consistent
    std::map<std::pair<int, int>, Rational> u{
        {{1, 2}, Rational(5)},  {{1, 3}, Rational(-2)}, {{1, 4}, Rational(7)},
        {{2, 3}, Rational(1, 3)}, {{2, 4}, Rational(0)}, {{3, 4}, Rational(-1)}};
    KForm consistent(3);
    const int s[] = {1, 2, 3, 4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k) {
                Rational v = u[{s[j], s[k]}] - u[{s[i], s[k]}] + u[{s[i], s[j]}];
                consistent += cmono(v, {s[i], s[j], s[k]});
            }
    auto ok = factorization_obstruction(consistent, {1, 2, 3, 4});
    CHECK(ok.rank_system == 3);
    CHECK(ok.rank_augmented == 3);
    CHECK_FALSE(ok.inconsistent);
    CHECK(ok.nonzero_rhs == 4);

    CHECK_THROWS_AS(factorization_obstruction(KForm::basis({1, 2}), {1, 2, 3, 4}),
                    DegreeMismatch);
    CHECK_THROWS_AS(factorization_obstruction(KForm(3), {1, 2, 2, 4}), Error);
    CHECK_THROWS_AS(factorization_obstruction(KForm(3), {0, 2, 3, 4}), Error);
}

TEST_CASE("wedge factorization infeasibility sweep") {
    FundamentalForm f = build_structure();
    CHECK(alpha_beta_infeasibility_check(200, 31337, f));
    CHECK(alpha_beta_infeasibility_check(50, 1, f));
    CHECK_THROWS_AS(alpha_beta_infeasibility_check(0, 1, f), Error);
}

TEST_CASE("linearization residual at the example family") {
    FundamentalForm f = build_structure();
    auto t = worked_example_report();
    RingPtr ring = t.connection.B.ring();
    Poly a = Poly::var(ring, "a");
    Poly one = Poly::constant(ring, 1);

    // closed directions are always tangent
    KForm closed = ext_d(KForm::from_poly(Poly::var(ring, "x1") * Poly::var(ring, "x2")));
    CHECK(tangent_check(t.connection, closed, f).is_zero());

    // this direction is tangent everywhere on the family: the only candidate
    // complement triples are absent from the fundamental form
    KForm a12 = KForm::monomial(Poly::var(ring, "x1"), IndexTuple::of({2}));
    CHECK(tangent_check(t.connection, a12, f).is_zero());

    KForm a67 = KForm::monomial(Poly::var(ring, "x6"), IndexTuple::of({7}));
    CHECK(tangent_check(t.connection, a67, f) ==
          KForm::monomial((one + a) * Rational(2), IndexTuple::full()));

    auto at11 = worked_example_report(Rational(1), Rational(1));
    RingPtr r0 = at11.connection.B.ring();
    KForm a67n = KForm::monomial(Poly::var(r0, "x6"), IndexTuple::of({7}));
    CHECK(tangent_check(at11.connection, a67n, f) ==
          KForm::monomial(Poly::constant(r0, Rational(4)), IndexTuple::full()));

    // the connection is tangent to itself exactly at higher-order points
    auto ho = worked_example_report(Rational(1), Rational(1, 2));
    CHECK(tangent_check(ho.connection, ho.connection.B, f).is_zero());
    CHECK(tangent_check(at11.connection, at11.connection.B, f) ==
          KForm::monomial(Poly::constant(r0, Rational(4)), IndexTuple::full()));
}

TEST_CASE("presymplectic integrand identity") {
    FundamentalForm f = build_structure();
    CHECK(presymplectic_integrand_check(KForm::basis({1}), KForm::basis({2}),
                                        KForm::basis({3}), f));

    RingPtr ring = PolyRing::create({});
    auto xi_e = [&](int i) {
        return KForm::monomial(Poly::var(ring, std::size_t(i - 1)),
                               IndexTuple::of({i + 1}));
    };
    CHECK(presymplectic_integrand_check(xi_e(1), xi_e(2), xi_e(3), f));

    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> pick(0, 6);
    for (int t = 0; t < 20; ++t) {
        KForm a1(1, ring), a2(1, ring), a3(1, ring);
        for (int s = 0; s < 2; ++s) {
            a1 += KForm::monomial(random_coeff(ring, rng, 2), IndexTuple::of({pick(rng) + 1}));
            a2 += KForm::monomial(random_coeff(ring, rng, 2), IndexTuple::of({pick(rng) + 1}));
            a3 += KForm::monomial(random_coeff(ring, rng, 2), IndexTuple::of({pick(rng) + 1}));
        }
        CHECK(presymplectic_integrand_check(a1, a2, a3, f));
    }
}

TEST_CASE("parameter extraction groups by coordinate monomial") {
    RingPtr ring = PolyRing::create({"a", "b"});
    Poly a = Poly::var(ring, "a");
    Poly b = Poly::var(ring, "b");
    Poly one = Poly::constant(ring, 1);
    Poly x1 = Poly::var(ring, "x1");

    KForm residual =
        KForm::monomial((a - one) * x1 + b * x1 * x1, IndexTuple::of({2, 3})) +
        KForm::monomial(Poly::constant(ring, Rational(3)), IndexTuple::of({4, 5}));
    auto polys = parameter_conditions(residual);
    REQUIRE(polys.size() == 3);
    CHECK(polys[0] == a - one);
    CHECK(polys[1] == b);
    CHECK(polys[2] == Poly::constant(ring, Rational(3)));

    CHECK(parameter_conditions(KForm(3, ring)).empty());
}

TEST_CASE("condition decision rules") {
    RingPtr ring = PolyRing::create({"a"});
    Condition numeric;
    numeric.parametric = false;
    numeric.holds = true;
    CHECK(numeric.decided() == std::optional<bool>(true));

    Condition empty;
    empty.parametric = true;
    CHECK(empty.decided() == std::optional<bool>(true));

    Condition unit;
    unit.parametric = true;
    unit.vanishing = {Poly::constant(ring, 1)};
    CHECK(unit.decided() == std::optional<bool>(false));

    Condition open;
    open.parametric = true;
    open.vanishing = {Poly::var(ring, "a")};
    CHECK(open.decided() == std::nullopt);
}
