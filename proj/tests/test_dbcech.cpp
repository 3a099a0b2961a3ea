#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>
#include <vector>

#include "g2gauge/complexes.hpp"
#include "g2gauge/dbcech.hpp"
#include "g2gauge/errors.hpp"

using namespace g2gauge;

namespace {

int torus_x(int v) { return v % 4; }
int torus_y(int v) { return (v / 4) % 4; }
int torus_z(int v) { return v / 16; }

struct Scene {
    CoveredComplex cc;
    PolyDecomp P;
};

Scene make_scene(CoveredComplex cc) {
    PolyDecomp P = polyhedral_decomposition(cc.complex, cc.cover);
    return {std::move(cc), std::move(P)};
}

struct Data {
    IntCochain theta;
    DBClass a;
    PhaseClass b;
};

// Deterministic when rng is null; otherwise a random valid draw.  The
// connection class is a global one-form plus per-chart exact shifts
// with integer transition constants; the phase class is a global
// zero-form plus per-chart integer constants.
Data make_data(const CoveredComplex& cc, std::mt19937* rng) {
    const SimplicialComplex& cx = cc.complex;
    const Cover& cover = cc.cover;
    int nch = (int)cover.size();
    bool det = rng == nullptr;
    auto rq = [&](int span) {
        return Rational((int)((*rng)() % (2 * span + 1)) - span, 1 + (int)((*rng)() % 3));
    };
    auto ri = [&](int span) { return Rational((int)((*rng)() % (2 * span + 1)) - span); };

    Data data;
    data.theta.degree = 1;
    std::vector<Rational> rho(nch);
    for (int c = 0; c < nch; ++c) rho[c] = det ? Rational((3 * c + 1) % 5) : ri(3);
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d)
            if (cover.in_nerve({c, d})) data.theta.set({c, d}, rho[d] - rho[c]);

    Cochain aglob = zero_cochain(cx, 1);
    if (det && cc.name == "torus4") {
        // Winding cochains along x and y plus a non-closed tail, so
        // every ladder term and the smearing correction are nonzero.
        for (std::size_t e = 0; e < cx.count(1); ++e) {
            const VertexList& ev = cx.vertices(1, (int)e);
            int dx = (torus_x(ev[1]) - torus_x(ev[0]) + 4) % 4;
            int dy = (torus_y(ev[1]) - torus_y(ev[0]) + 4) % 4;
            int dz = (torus_z(ev[1]) - torus_z(ev[0]) + 4) % 4;
            bool fwd = dx <= 1 && dy <= 1 && dz <= 1;
            int sx = fwd ? dx : -((4 - dx) % 4);
            int sy = fwd ? dy : -((4 - dy) % 4);
            aglob.values[e] = Rational(sx, 4) + Rational(sy, 3) + Rational(ev[0] % 5, 6) +
                              Rational(ev[1] % 3, 7);
        }
    } else if (det) {
        for (std::size_t e = 0; e < cx.count(1); ++e) {
            const VertexList& ev = cx.vertices(1, (int)e);
            aglob.values[e] = Rational(ev[0] + 2 * ev[1], 5);
        }
    } else {
        for (auto& v : aglob.values) v = rq(2);
    }

    std::vector<Cochain> h(nch, zero_cochain(cx, 0));
    for (int c = 0; c < nch; ++c)
        for (std::size_t v = 0; v < h[c].values.size(); ++v)
            h[c].values[v] = det ? Rational(c * ((int)v % 3), 6) : rq(2);

    IntCochain z;
    z.degree = 1;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) z.set({c, d}, det ? Rational(d == c + 1) : ri(2));

    data.a.conn = make_form_cochain(cx, 0, 1);
    for (int c = 0; c < nch; ++c) {
        Cochain val = aglob;
        val += coboundary(cx, h[c]);
        data.a.conn.set({c}, std::move(val));
    }
    data.a.trans = make_form_cochain(cx, 1, 0);
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) {
            Cochain val = h[d];
            val -= h[c];
            Rational zc = z.get({c, d});
            for (auto& x : val.values) x += zc;
            data.a.trans.set({c, d}, std::move(val));
        }
    data.a.wind.degree = 2;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d)
            for (int e = d + 1; e < nch; ++e)
                data.a.wind.set({c, d, e},
                                z.get({d, e}) - z.get({c, e}) + z.get({c, d}));

    Cochain bglob = zero_cochain(cx, 0);
    for (std::size_t v = 0; v < bglob.values.size(); ++v)
        bglob.values[v] = det ? (cc.name == "torus4"
                                     ? Rational(torus_y((int)v) + torus_z((int)v) * torus_z((int)v), 7)
                                     : Rational((int)v * (int)v, 8))
                              : rq(2);
    std::vector<Rational> jumps(nch);
    for (int c = 0; c < nch; ++c) jumps[c] = det ? Rational(c % 3) : ri(2);
    data.b.log = make_form_cochain(cx, 0, 0);
    for (int c = 0; c < nch; ++c) {
        Cochain val = bglob;
        for (auto& x : val.values) x += jumps[c];
        data.b.log.set({c}, std::move(val));
    }
    data.b.jump.degree = 1;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) data.b.jump.set({c, d}, jumps[d] - jumps[c]);
    return data;
}

// ---- independent brute-force pairing oracle on dense value vectors ----

using Dense = std::vector<Rational>;

Dense oracle_d(const SimplicialComplex& cx, int p, const Dense& c) {
    Dense out(cx.count(p + 1), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const VertexList& v = cx.vertices(p + 1, (int)i);
        for (int j = 0; j <= p + 1; ++j) {
            VertexList f = v;
            f.erase(f.begin() + j);
            Rational term = c[cx.find(p, f)];
            if (j % 2 == 0)
                out[i] += term;
            else
                out[i] -= term;
        }
    }
    return out;
}

Dense oracle_cup(const SimplicialComplex& cx, int p, const Dense& a, int q, const Dense& b) {
    Dense out(cx.count(p + q), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const VertexList& v = cx.vertices(p + q, (int)i);
        VertexList front(v.begin(), v.begin() + p + 1);
        VertexList back(v.begin() + p, v.end());
        out[i] = a[cx.find(p, front)] * b[cx.find(q, back)];
    }
    return out;
}

Rational oracle_pair(const Chain& ch, const Dense& c) {
    Rational out(0);
    for (const auto& [i, co] : ch) out += co * c[i];
    return out;
}

struct OracleAction {
    Rational i0, i1, i2, tau;
    Rational total() const { return i0 + i1 + i2 + tau; }
};

OracleAction oracle_action(const SimplicialComplex& cx, const PolyDecomp& P,
                           const IntCochain& theta, const DBClass& a, const PhaseClass& b,
                           const BackgroundCocycle& bg) {
    OracleAction S{Rational(0), Rational(0), Rational(0), Rational(0)};
    for (const auto& [t, ch] : P.levels[1]) {
        Rational th = theta.get({t[0], t[1]});
        if (th.is_zero()) continue;
        Dense conn = a.conn.get({t[0]}).values;
        Dense db = oracle_d(cx, 0, b.log.get({t[0]}).values);
        S.i0 += th * oracle_pair(ch, oracle_cup(cx, 1, conn, 1, db));
    }
    for (const auto& [t, ch] : P.levels[2]) {
        Rational th = theta.get({t[1], t[2]});
        if (th.is_zero()) continue;
        Dense trans = a.trans.get({t[0], t[1]}).values;
        Dense db = oracle_d(cx, 0, b.log.get({t[0]}).values);
        S.i1 -= th * oracle_pair(ch, oracle_cup(cx, 0, trans, 1, db));
    }
    for (const auto& [t, ch] : P.levels[3]) {
        Rational th = theta.get({t[2], t[3]});
        if (th.is_zero()) continue;
        Rational w = a.wind.get({t[0], t[1], t[2]});
        if (w.is_zero()) continue;
        S.i2 += th * w * oracle_pair(ch, b.log.get({t[0]}).values);
    }
    for (const auto& [t, ch] : P.levels[0]) {
        Dense da = oracle_d(cx, 1, a.conn.get({t[0]}).values);
        Dense db = oracle_d(cx, 0, b.log.get({t[0]}).values);
        Dense tau = bg.tau.get({t[0]}).values;
        S.tau += oracle_pair(ch, oracle_cup(cx, 2, oracle_cup(cx, 0, tau, 2, da), 1, db));
    }
    return S;
}

void check_engine_matches_oracle(const Scene& sc, const Data& data) {
    BackgroundCocycle bg = background_from_theta(sc.cc.complex, sc.cc.cover, data.theta);
    ActionBreakdown S = action_total(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b, bg);
    OracleAction O = oracle_action(sc.cc.complex, sc.P, data.theta, data.a, data.b, bg);
    REQUIRE(S.ladder.size() == 3);
    CHECK(S.ladder[0] == O.i0);
    CHECK(S.ladder[1] == O.i1);
    CHECK(S.ladder[2] == O.i2);
    CHECK(S.tau_term == O.tau);
    CHECK(S.chi_term == Rational(0));
    CHECK(S.total() == O.total());
}

}  // namespace

TEST_CASE("cech coboundary: pair formula, squared zero, antisymmetry") {
    Scene sc = make_scene(cross_polytope_sphere());
    const Cover& cover = sc.cc.cover;
    std::mt19937 rng(411);

    IntCochain f;
    f.degree = 0;
    for (int c = 0; c < (int)cover.size(); ++c)
        f.set({c}, Rational((int)(rng() % 19) - 9, 1 + (int)(rng() % 4)));
    IntCochain df = cech_delta(cover, f);
    CHECK(df.degree == 1);
    CHECK(df.get({0, 1}) == f.get({1}) - f.get({0}));
    CHECK(df.get({2, 5}) == f.get({5}) - f.get({2}));
    CHECK(cech_delta(cover, df).entries.empty());

    for (int trial = 0; trial < 10; ++trial) {
        IntCochain c1;
        c1.degree = 1;
        for (int a = 0; a < (int)cover.size(); ++a)
            for (int b = a + 1; b < (int)cover.size(); ++b)
                c1.set({a, b}, Rational((int)(rng() % 9) - 4, 1 + (int)(rng() % 3)));
        CHECK(cech_delta(cover, cech_delta(cover, c1)).entries.empty());
    }

    FormCochain forms = make_form_cochain(sc.cc.complex, 0, 1);
    for (int c = 0; c < (int)cover.size(); ++c) {
        Cochain val = zero_cochain(sc.cc.complex, 1);
        for (auto& v : val.values) v = Rational((int)(rng() % 13) - 6, 1 + (int)(rng() % 3));
        forms.set({c}, std::move(val));
    }
    CHECK(cech_delta(cover, cech_delta(cover, forms)).entries.empty());

    IntCochain anti;
    anti.degree = 1;
    anti.set({3, 1}, Rational(5));
    CHECK(anti.get({1, 3}) == Rational(-5));
    CHECK(anti.get({3, 1}) == Rational(5));
    CHECK(anti.get({1, 1}) == Rational(0));

    Data data = make_data(sc.cc, nullptr);
    CHECK(cech_delta(cover, data.a.wind).entries.empty());
    CHECK(cech_delta(cover, data.theta).entries.empty());
}

TEST_CASE("simplicial layer: Stokes pairing and cup Leibniz rule") {
    Scene sc = make_scene(cross_polytope_sphere());
    const SimplicialComplex& cx = sc.cc.complex;
    std::mt19937 rng(412);
    auto rnd = [&] { return Rational((int)(rng() % 15) - 7, 1 + (int)(rng() % 3)); };

    Cochain w1 = zero_cochain(cx, 1);
    for (auto& v : w1.values) v = rnd();
    Cochain w0 = zero_cochain(cx, 0);
    for (auto& v : w0.values) v = rnd();

    Chain c;
    for (int i = 0; i < (int)cx.count(2); i += 3) c[i] = rnd();
    CHECK(pairing(c, coboundary(cx, w1)) == pairing(boundary(cx, 2, c), w1));

    Cochain lhs = coboundary(cx, cup(cx, w0, w1));
    Cochain rhs = cup(cx, coboundary(cx, w0), w1);
    rhs += cup(cx, w0, coboundary(cx, w1));
    CHECK(lhs == rhs);

    Cochain m1 = zero_cochain(cx, 1);
    for (auto& v : m1.values) v = rnd();
    Cochain lhs2 = coboundary(cx, cup(cx, w1, m1));
    Cochain rhs2 = cup(cx, coboundary(cx, w1), m1);
    rhs2 -= cup(cx, w1, coboundary(cx, m1));
    CHECK(lhs2 == rhs2);
}

TEST_CASE("polyhedral decomposition: identities on both test complexes") {
    Scene sphere = make_scene(cross_polytope_sphere());
    REQUIRE(sphere.P.levels.size() == 4);
    CHECK(sphere.P.levels[0].size() == 2);
    CHECK(sphere.P.levels[1].size() == 4);
    CHECK(sphere.P.levels[2].size() == 8);
    CHECK(sphere.P.levels[3].size() == 16);
    DecompReport rs = decomposition_check(sphere.cc.complex, sphere.cc.cover, sphere.P);
    CHECK(rs.boundary_squared_zero);
    CHECK(rs.insertion_identity);
    CHECK(rs.chart_support);
    CHECK(rs.top_sum_is_fundamental);

    Scene torus = make_scene(kuhn_torus());
    CHECK(torus.cc.complex.count(0) == 64);
    CHECK(torus.cc.complex.count(1) == 448);
    CHECK(torus.cc.complex.count(2) == 768);
    CHECK(torus.cc.complex.count(3) == 384);
    CHECK(torus.P.levels[0].size() == 7);
    CHECK(torus.P.levels[1].size() == 47);
    CHECK(torus.P.levels[2].size() == 218);
    CHECK(torus.P.levels[3].size() == 531);
    DecompReport rt = decomposition_check(torus.cc.complex, torus.cc.cover, torus.P);
    CHECK(rt.pass());
}

TEST_CASE("cocycle verification: valid classes, perturbations localize") {
    Scene sc = make_scene(cross_polytope_sphere());
    const SimplicialComplex& cx = sc.cc.complex;
    const Cover& cover = sc.cc.cover;
    std::mt19937 rng(413);
    Data data = make_data(sc.cc, &rng);

    CHECK(db_cocycle_check(cx, cover, data.a).pass());
    CHECK(phase_cocycle_check(cx, cover, data.b).pass());

    // Fractional bump of one transition log at a vertex inside the
    // overlap: every reported tuple involves the perturbed pair.
    DBClass bumped = data.a;
    Cochain t01 = bumped.trans.get({0, 1});
    t01.values[2] += Rational(1, 3);
    bumped.trans.set({0, 1}, std::move(t01));
    CocycleReport rep = db_cocycle_check(cx, cover, bumped);
    CHECK(!rep.pass());
    CHECK(!rep.pass_lattice());
    CHECK(!rep.connection.empty());
    CHECK(!rep.transition.empty());
    CHECK(!rep.lattice.empty());
    CHECK(rep.integrality.empty());
    CHECK(rep.cocycle.empty());
    auto touches_pair = [](const std::vector<ResidualEntry>& list) {
        for (const auto& e : list) {
            bool has0 = false, has1 = false;
            for (int c : e.tuple) {
                if (c == 0) has0 = true;
                if (c == 1) has1 = true;
            }
            if (!has0 || !has1) return false;
        }
        return true;
    };
    CHECK(touches_pair(rep.connection));
    CHECK(touches_pair(rep.transition));
    CHECK(touches_pair(rep.lattice));

    // Integer shift of a transition log without the matching winding
    // update: the exact condition fails but the exponentiated
    // transition functions still satisfy their cocycle law.
    DBClass shifted = data.a;
    Cochain s01 = shifted.trans.get({0, 1});
    for (auto& v : s01.values) v += Rational(1);
    shifted.trans.set({0, 1}, std::move(s01));
    CocycleReport rep2 = db_cocycle_check(cx, cover, shifted);
    CHECK(!rep2.pass());
    CHECK(rep2.pass_lattice());
    CHECK(rep2.connection.empty());
    CHECK(!rep2.transition.empty());
    CHECK(rep2.lattice.empty());

    PhaseClass doctored = data.b;
    doctored.jump.add({0, 1}, Rational(1, 2));
    CocycleReport rep3 = phase_cocycle_check(cx, cover, doctored);
    CHECK(!rep3.pass());
    CHECK(!rep3.connection.empty());
    CHECK(!rep3.integrality.empty());
}

TEST_CASE("background cocycle: derived smearing data and its checks") {
    Scene sc = make_scene(kuhn_torus());
    const SimplicialComplex& cx = sc.cc.complex;
    const Cover& cover = sc.cc.cover;
    Data data = make_data(sc.cc, nullptr);

    BackgroundCocycle bg = background_from_theta(cx, cover, data.theta);
    CHECK(bg.tau.degree == 0);
    CHECK(bg.chi.degree == -1);
    CHECK(background_check(cx, cover, bg).pass());

    Cochain sum = zero_cochain(cx, 0);
    for (const auto& xi : bg.xi) sum += xi;
    for (const auto& v : sum.values) CHECK(v == Rational(1));

    BackgroundCocycle doctored = bg;
    Cochain tau0 = doctored.tau.get({0});
    tau0.values[0] += Rational(1);
    doctored.tau.set({0}, std::move(tau0));
    BackgroundReport bad = background_check(cx, cover, doctored);
    CHECK(!bad.pass());
    CHECK(!bad.smearing.empty());

    IntCochain fractional = data.theta;
    fractional.set({0, 2}, Rational(1, 2));
    BackgroundCocycle bg2 = background_from_theta(cx, cover, fractional);
    CHECK(!background_check(cx, cover, bg2).integrality.empty());

    IntCochain open = data.theta;
    open.add({0, 2}, Rational(1));
    BackgroundCocycle bg3 = background_from_theta(cx, cover, open);
    CHECK(!background_check(cx, cover, bg3).cocycle.empty());

    // Degree-two background on the sphere cover exercises the chi
    // descent layer even though no ladder uses it here.
    Scene sp = make_scene(cross_polytope_sphere());
    std::mt19937 rng(414);
    IntCochain rho1;
    rho1.degree = 1;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b) rho1.set({a, b}, Rational((int)(rng() % 5) - 2));
    IntCochain theta2 = cech_delta(sp.cc.cover, rho1);
    REQUIRE(theta2.degree == 2);
    BackgroundCocycle bg4 = background_from_theta(sp.cc.complex, sp.cc.cover, theta2);
    CHECK(bg4.chi.degree == 0);
    CHECK(background_check(sp.cc.complex, sp.cc.cover, bg4).pass());
}

TEST_CASE("ladder term tables for both patterns") {
    std::vector<LadderTerm> t3 = ladder_terms(three_dim_pattern());
    REQUIRE(t3.size() == 3);
    CHECK(t3[0].level == 1);
    CHECK(t3[1].level == 2);
    CHECK(t3[2].level == 3);
    CHECK(t3[0].sign == 1);
    CHECK(t3[1].sign == -1);
    CHECK(t3[2].sign == 1);
    CHECK(t3[1].theta_begin == 1);
    CHECK(t3[1].theta_end == 2);
    REQUIRE(t3[0].factors.size() == 2);
    CHECK(t3[0].factors[0].layer == 0);
    CHECK(!t3[0].factors[0].differential);
    CHECK(t3[0].factors[1].differential);
    CHECK(t3[1].factors[0].layer == 1);
    CHECK(t3[1].factors[0].slice_begin == 0);
    CHECK(t3[1].factors[0].slice_end == 1);
    CHECK(t3[1].factors[1].differential);
    CHECK(t3[2].factors[0].layer == 2);
    CHECK(t3[2].factors[0].slice_end == 2);
    CHECK(!t3[2].factors[1].differential);

    std::vector<LadderTerm> t8 = ladder_terms(eight_dim_pattern());
    REQUIRE(t8.size() == 6);
    for (int k = 0; k < 6; ++k) {
        CHECK(t8[k].level == k + 3);
        CHECK(t8[k].sign == (k % 2 == 0 ? 1 : -1));
        CHECK(t8[k].theta_begin == k);
        CHECK(t8[k].theta_end == k + 3);
    }
    const LadderTerm& i3 = t8[3];
    REQUIRE(i3.factors.size() == 3);
    CHECK(i3.factors[0].layer == 2);
    CHECK(i3.factors[0].slice_begin == 1);
    CHECK(i3.factors[0].slice_end == 3);
    CHECK(i3.factors[1].layer == 1);
    CHECK(i3.factors[1].slice_begin == 0);
    CHECK(i3.factors[1].slice_end == 1);
    CHECK(i3.factors[2].layer == 0);
    CHECK(i3.factors[2].differential);
    const LadderTerm& i5 = t8[5];
    CHECK(i5.factors[0].slice_begin == 3);
    CHECK(i5.factors[0].slice_end == 5);
    CHECK(i5.factors[1].slice_begin == 1);
    CHECK(i5.factors[1].slice_end == 3);
    CHECK(i5.factors[2].layer == 1);
    CHECK(!i5.factors[2].differential);

    CHECK_THROWS_AS(ladder_terms({3, 1, {1, 1}}), UnsupportedPattern);
    CHECK_THROWS_AS(ladder_terms({3, 0, {1, 0}}), UnsupportedPattern);
}

TEST_CASE("action engine: frozen regression values on the sphere") {
    Scene sc = make_scene(cross_polytope_sphere());
    Data data = make_data(sc.cc, nullptr);
    BackgroundCocycle bg = background_from_theta(sc.cc.complex, sc.cc.cover, data.theta);
    ActionBreakdown S = action_total(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b, bg);
    REQUIRE(S.ladder.size() == 3);
    CHECK(S.ladder[0] == Rational(7, 8));
    CHECK(S.ladder[1] == Rational(-21, 8));
    CHECK(S.ladder[2] == Rational(15, 4));
    CHECK(S.tau_term == Rational(0));
    CHECK(S.total() == Rational(2));
    CHECK(S.total_mod() == Rational(0));
    check_engine_matches_oracle(sc, data);
}

TEST_CASE("action engine: frozen regression values on the torus") {
    Scene sc = make_scene(kuhn_torus());
    Data data = make_data(sc.cc, nullptr);
    BackgroundCocycle bg = background_from_theta(sc.cc.complex, sc.cc.cover, data.theta);
    ActionBreakdown S = action_total(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b, bg);
    CHECK(S.ladder[0] == Rational(-713, 98));
    CHECK(S.ladder[1] == Rational(809, 42));
    CHECK(S.ladder[2] == Rational(-99, 7));
    CHECK(S.tau_term == Rational(446, 147));
    CHECK(S.total() == Rational(43, 49));
    CHECK(S.total_mod() == Rational(43, 49));
    check_engine_matches_oracle(sc, data);
}

TEST_CASE("action engine matches the brute-force oracle on random draws") {
    for (Scene sc : {make_scene(cross_polytope_sphere()), make_scene(kuhn_torus())}) {
        for (unsigned seed = 1; seed <= 3; ++seed) {
            std::mt19937 rng(900 + seed);
            Data data = make_data(sc.cc, &rng);
            check_engine_matches_oracle(sc, data);
        }

        // Unit background: the coboundary of a chart indicator.
        std::mt19937 rng(950);
        Data data = make_data(sc.cc, &rng);
        IntCochain unit;
        unit.degree = 1;
        for (int d = 1; d < (int)sc.cc.cover.size(); ++d)
            if (sc.cc.cover.in_nerve({0, d})) unit.set({0, d}, Rational(-1));
        data.theta = unit;
        CHECK(cech_delta(sc.cc.cover, data.theta).entries.empty());
        check_engine_matches_oracle(sc, data);

        // Zero classes and zero background give a zero action.
        Data zero;
        zero.theta.degree = 1;
        zero.a.conn = make_form_cochain(sc.cc.complex, 0, 1);
        zero.a.trans = make_form_cochain(sc.cc.complex, 1, 0);
        zero.a.wind.degree = 2;
        zero.b.log = make_form_cochain(sc.cc.complex, 0, 0);
        zero.b.jump.degree = 1;
        BackgroundCocycle bg0 =
            background_from_theta(sc.cc.complex, sc.cc.cover, zero.theta);
        ActionBreakdown s0 =
            action_total(sc.cc.complex, sc.cc.cover, sc.P, zero.a, zero.b, bg0);
        CHECK(s0.total() == Rational(0));

        Data data2 = make_data(sc.cc, &rng);
        IntCochain none;
        none.degree = 1;
        BackgroundCocycle bgn = background_from_theta(sc.cc.complex, sc.cc.cover, none);
        ActionBreakdown sn =
            action_total(sc.cc.complex, sc.cc.cover, sc.P, data2.a, data2.b, bgn);
        CHECK(sn.total() == Rational(0));
    }
}

TEST_CASE("local gauge variation vanishes exactly over one hundred draws") {
    Scene sphere = make_scene(cross_polytope_sphere());
    Scene torus = make_scene(kuhn_torus());
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Scene& sc = trial % 2 == 0 ? sphere : torus;
        std::mt19937 rng(3000 + trial);
        Data data = make_data(sc.cc, &rng);
        BackgroundCocycle bg = background_from_theta(sc.cc.complex, sc.cc.cover, data.theta);
        GaugeData gauge;
        gauge.local.assign(sc.cc.cover.size(), zero_cochain(sc.cc.complex, 0));
        for (auto& c : gauge.local)
            for (auto& v : c.values)
                v = Rational((int)(rng() % 9) - 4, 1 + (int)(rng() % 3));
        Rational diff = gauge_variation(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b,
                                        bg, gauge, {});
        CHECK(diff == Rational(0));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("large gauge variation is always an exact lattice element") {
    int nonzero = 0;
    for (Scene sc : {make_scene(cross_polytope_sphere()), make_scene(kuhn_torus())}) {
        int nch = (int)sc.cc.cover.size();
        for (int trial = 0; trial < 8; ++trial) {
            std::mt19937 rng(5000 + trial);
            Data data = make_data(sc.cc, &rng);
            BackgroundCocycle bg =
                background_from_theta(sc.cc.complex, sc.cc.cover, data.theta);

            GaugeData gauge;
            gauge.large.degree = 1;
            for (int a = 0; a < nch; ++a)
                for (int b = a + 1; b < nch; ++b)
                    gauge.large.set({a, b}, Rational((int)(rng() % 5) - 2));
            Rational diff = gauge_variation(sc.cc.complex, sc.cc.cover, sc.P, data.a,
                                            data.b, bg, gauge, {});
            CHECK(diff.is_integer());
            if (!diff.is_zero()) ++nonzero;

            std::vector<Rational> shifts(nch);
            for (auto& s : shifts) s = Rational((int)(rng() % 5) - 2);
            Rational diff2 = gauge_variation(sc.cc.complex, sc.cc.cover, sc.P, data.a,
                                             data.b, bg, {}, shifts);
            CHECK(diff2.is_integer());
            if (!diff2.is_zero()) ++nonzero;
        }
    }
    CHECK(nonzero > 0);
}

TEST_CASE("gauge data validation") {
    Scene sc = make_scene(cross_polytope_sphere());
    std::mt19937 rng(600);
    Data data = make_data(sc.cc, &rng);

    GaugeData fractional;
    fractional.large.degree = 1;
    fractional.large.set({0, 1}, Rational(1, 2));
    CHECK_THROWS_AS(apply_gauge(sc.cc.complex, sc.cc.cover, data.a, fractional),
                    InvalidGaugeData);

    CHECK_THROWS_AS(apply_shift(sc.cc.complex, data.b, {Rational(1, 3)}), InvalidGaugeData);

    GaugeData short_local;
    short_local.local.assign(3, zero_cochain(sc.cc.complex, 0));
    CHECK_THROWS_AS(apply_gauge(sc.cc.complex, sc.cc.cover, data.a, short_local),
                    InvalidGaugeData);
}

TEST_CASE("pattern, dimension, and degree mismatches are rejected") {
    Scene sc = make_scene(kuhn_torus());
    std::mt19937 rng(700);
    Data data = make_data(sc.cc, &rng);

    std::vector<ClassLayers> three = {layers(data.a), layers(data.a), layers(data.a)};
    IntCochain theta3;
    theta3.degree = 3;
    CHECK_THROWS_AS(action_terms(sc.cc.complex, sc.cc.cover, sc.P, eight_dim_pattern(),
                                 three, theta3),
                    DimensionMismatch);

    IntCochain theta2;
    theta2.degree = 2;
    CHECK_THROWS_AS(action_terms(sc.cc.complex, sc.cc.cover, sc.P, three_dim_pattern(),
                                 {layers(data.a), layers(data.b)}, theta2),
                    DegreeMismatch);

    DBClass bad = data.a;
    bad.conn = make_form_cochain(sc.cc.complex, 0, 0);
    CHECK_THROWS_AS(action_terms(sc.cc.complex, sc.cc.cover, sc.P, three_dim_pattern(),
                                 {layers(bad), layers(data.b)}, data.theta),
                    DegreeMismatch);

    CHECK_THROWS_AS(action_terms(sc.cc.complex, sc.cc.cover, sc.P, three_dim_pattern(),
                                 {layers(data.a)}, data.theta),
                    DimensionMismatch);
}

TEST_CASE("cup product degree dispatch") {
    CupDegree ab = cup_degree(2, 1, 2, 1);
    CHECK(ab.case_id == 1);
    CHECK(ab.degree == 4);
    CHECK(ab.weight == 3);

    CupDegree abc = cup_degree(4, 3, 2, 1);
    CHECK(abc.case_id == 1);
    CHECK(abc.degree == 6);
    CHECK(abc.weight == 5);

    CupDegree top = cup_degree(3, 1, 6, 5);
    CHECK(top.case_id == 2);
    CHECK(top.degree == 8);
    CHECK(top.weight == 7);
    CHECK(!top.zero);

    CupDegree torsion = cup_degree(3, 1, 4, 2);
    CHECK(torsion.case_id == 3);
    CHECK(torsion.degree == 7);
    CHECK(torsion.weight == 4);
    CHECK(torsion.integral);

    CupDegree vanish = cup_degree(1, 1, 1, 1);
    CHECK(vanish.case_id == 0);
    CHECK(vanish.zero);

    CupDegree flat_boundary = cup_degree(2, 1, 4, 2);
    CHECK(flat_boundary.case_id == 2);
    CHECK(flat_boundary.degree == 5);
    CHECK(flat_boundary.weight == 4);
}

TEST_CASE("complex, cocycle, and gauge files round-trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "g2gauge_dbcech_test";
    fs::create_directories(dir);

    Scene sc = make_scene(kuhn_torus());
    std::string cpath = (dir / "complex.json").string();
    write_complex(sc.cc, cpath);
    CoveredComplex back = read_complex(cpath);
    CHECK(back.name == sc.cc.name);
    for (int d = 0; d <= 3; ++d) CHECK(back.complex.count(d) == sc.cc.complex.count(d));
    CHECK(back.cover.charts == sc.cc.cover.charts);
    CHECK(back.cover.owner == sc.cc.cover.owner);
    for (std::size_t i = 0; i < back.complex.count(3); ++i)
        CHECK(back.complex.orientation((int)i) == sc.cc.complex.orientation((int)i));

    std::mt19937 rng(800);
    Data data = make_data(sc.cc, &rng);
    std::string ypath = (dir / "cocycles.json").string();
    write_cocycles({data.theta, data.a, data.b}, ypath);
    CocycleSet set = read_cocycles(back.complex, ypath);

    PolyDecomp P2 = polyhedral_decomposition(back.complex, back.cover);
    BackgroundCocycle bg = background_from_theta(back.complex, back.cover, set.theta);
    ActionBreakdown s1 = action_total(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b,
                                      background_from_theta(sc.cc.complex, sc.cc.cover,
                                                            data.theta));
    ActionBreakdown s2 = action_total(back.complex, back.cover, P2, set.a, set.b, bg);
    CHECK(s1.total() == s2.total());

    GaugeFile gauge;
    gauge.a.local.assign(sc.cc.cover.size(), zero_cochain(sc.cc.complex, 0));
    for (auto& c : gauge.a.local)
        for (auto& v : c.values) v = Rational((int)(rng() % 9) - 4, 1 + (int)(rng() % 3));
    gauge.a.large.degree = 1;
    gauge.a.large.set({0, 1}, Rational(2));
    gauge.b_shifts.assign(sc.cc.cover.size(), Rational(1));
    std::string gpath = (dir / "gauge.json").string();
    write_gauge(gauge, gpath);
    GaugeFile gback = read_gauge(back.complex, gpath);

    Rational v1 = gauge_variation(sc.cc.complex, sc.cc.cover, sc.P, data.a, data.b,
                                  background_from_theta(sc.cc.complex, sc.cc.cover,
                                                        data.theta),
                                  gauge.a, gauge.b_shifts);
    Rational v2 = gauge_variation(back.complex, back.cover, P2, set.a, set.b, bg,
                                  gback.a, gback.b_shifts);
    CHECK(v1 == v2);
    CHECK(v1.is_integer());

    CHECK_THROWS_AS(read_complex((dir / "missing.json").string()), ParseError);
    fs::remove_all(dir);
}
