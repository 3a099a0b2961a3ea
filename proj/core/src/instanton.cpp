#include "g2gauge/instanton.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "g2gauge/errors.hpp"

namespace g2gauge {

namespace {

KForm vol_form(const Poly& coeff) {
    return KForm::monomial(coeff, IndexTuple::full());
}

bool all_zero(const std::vector<KForm>& residuals) {
    return std::all_of(residuals.begin(), residuals.end(),
                       [](const KForm& r) { return r.is_zero(); });
}

Condition make_condition(const std::vector<KForm>& residuals, bool parametric) {
    Condition c;
    c.parametric = parametric;
    if (!parametric) {
        c.holds = all_zero(residuals);
        return c;
    }
    std::vector<Poly> polys;
    for (const KForm& r : residuals) {
        auto part = parameter_conditions(r);
        polys.insert(polys.end(), part.begin(), part.end());
    }
    c.vanishing = groebner_basis(std::move(polys));
    c.holds = c.vanishing.empty();
    return c;
}

}  // namespace

Connection1Form::Connection1Form(KForm b) : B(std::move(b)), F() {
    if (B.degree() != 1 && !B.is_zero())
        throw DegreeMismatch("connection form must have degree 1");
    F = ext_d(B);
}

std::optional<bool> Condition::decided() const {
    if (!parametric) return holds;
    if (vanishing.empty()) return true;
    if (vanishing.size() == 1 && vanishing.front().is_constant()) return false;
    return std::nullopt;
}

std::vector<std::pair<std::string, const Condition*>> ClassificationReport::items()
    const {
    return {{"flat", &flat},
            {"sd_instanton", &sd_instanton},
            {"asd_instanton", &asd_instanton},
            {"higher_order", &higher_order},
            {"higher_order_flat", &higher_order_flat},
            {"sd_higher_order", &sd_higher_order},
            {"asd_higher_order", &asd_higher_order},
            {"special", &special},
            {"trivial_special", &trivial_special}};
}

std::vector<Poly> parameter_conditions(const KForm& residual) {
    std::map<std::pair<IndexTuple, Exponents>, Poly> groups;
    const RingPtr& ring = residual.ring();
    for (const auto& [tuple, poly] : residual.terms()) {
        for (const auto& [e, c] : poly.terms()) {
            Exponents coord = e, par = e;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (i < PolyRing::kCoordinates)
                    par[i] = 0;
                else
                    coord[i] = 0;
            }
            groups[{tuple, coord}] += Poly::monomial(ring, par, c);
        }
    }
    std::vector<Poly> out;
    for (auto& [key, p] : groups)
        if (!p.is_zero()) out.push_back(std::move(p));
    return out;
}

ClassificationReport classify(const Connection1Form& conn, const FundamentalForm& f) {
    const KForm& F = conn.F;
    bool parametric = conn.B.ring() && conn.B.ring()->parameter_count() > 0;
    KForm F2 = wedge(F, F);
    KForm BdB = wedge(conn.B, F);
    KForm star_F = hodge(F, f.orientation);
    KForm star_F2 = hodge(F2, f.orientation);
    auto split4 = lambda4_split(F2, f);

    ClassificationReport rep;
    rep.flat = make_condition({F}, parametric);
    rep.sd_instanton =
        make_condition({star_F * Rational(2) + wedge(F, f.phi0)}, parametric);
    rep.asd_instanton = make_condition({star_F - wedge(F, f.phi0)}, parametric);
    rep.higher_order = make_condition({wedge(F2, f.phi0)}, parametric);
    rep.higher_order_flat = make_condition({F2}, parametric);
    rep.sd_higher_order = make_condition({F2 - split4[1]}, parametric);
    rep.asd_higher_order =
        make_condition({wedge(F2, f.phi0), wedge(star_F2, f.phi0)}, parametric);
    rep.special =
        make_condition({wedge(BdB, f.phi0), wedge(BdB, f.star_phi0)}, parametric);
    rep.trivial_special = make_condition({BdB}, parametric);
    return rep;
}

namespace {

KForm family_connection(const Poly& a, const Poly& b, const RingPtr& ring) {
    KForm B(1, ring);
    B += KForm::monomial(Poly::var(ring, "x2"), IndexTuple::of({3}));
    B += KForm::monomial(a * Poly::var(ring, "x4"), IndexTuple::of({5}));
    B += KForm::monomial(b * Poly::var(ring, "x6"), IndexTuple::of({7}));
    return B;
}

std::vector<std::pair<std::string, KForm>> family_references(const Poly& a,
                                                             const Poly& b,
                                                             const RingPtr& ring) {
    Poly one = Poly::constant(ring, Rational(1));
    Poly x2 = Poly::var(ring, "x2");
    Poly x4 = Poly::var(ring, "x4");
    Poly x6 = Poly::var(ring, "x6");
    auto mono = [](const Poly& c, std::initializer_list<int> idx) {
        return KForm::monomial(c, IndexTuple::of(idx));
    };
    std::vector<std::pair<std::string, KForm>> ref;
    ref.emplace_back("B^dB", mono(a * x2, {3, 4, 5}) + mono(a * x4, {2, 3, 5}) +
                                 mono(b * x6, {2, 3, 7}) + mono(b * x2, {3, 6, 7}) +
                                 mono(a * b * x4, {5, 6, 7}) +
                                 mono(a * b * x6, {4, 5, 7}));
    ref.emplace_back("dB^dB",
                     mono(a * Rational(2), {2, 3, 4, 5}) +
                         mono(b * Rational(2), {2, 3, 6, 7}) +
                         mono(a * b * Rational(2), {4, 5, 6, 7}));
    ref.emplace_back("dB^phi", mono(one + a, {1, 2, 3, 4, 5}) +
                                   mono(b - one, {1, 2, 3, 6, 7}) +
                                   mono(b - a, {1, 4, 5, 6, 7}));
    ref.emplace_back("dB^star_phi", mono(one + a - b, {2, 3, 4, 5, 6, 7}));
    ref.emplace_back("B^dB^phi", mono(-(b - a) * x2, {1, 3, 4, 5, 6, 7}) +
                                     mono(-a * (b - one) * x4, {1, 2, 3, 5, 6, 7}) +
                                     mono(-b * (one + a) * x6, {1, 2, 3, 4, 5, 7}));
    ref.emplace_back("dB^dB^phi", mono(-a + b + a * b, {1, 2, 3, 4, 5, 6, 7}));
    ref.emplace_back("B^dB^star_phi", KForm(7, ring));
    ref.emplace_back("dB^dB^star_phi", KForm(7, ring));
    return ref;
}

WorkedExampleTable build_worked_example(const Poly& a, const Poly& b,
                                        const RingPtr& ring) {
    Connection1Form conn(family_connection(a, b, ring));
    FundamentalForm f = build_structure();
    KForm BdB = wedge(conn.B, conn.F);
    KForm F2 = wedge(conn.F, conn.F);
    std::vector<std::pair<std::string, KForm>> computed;
    computed.emplace_back("B^dB", BdB);
    computed.emplace_back("dB^dB", F2);
    computed.emplace_back("dB^phi", wedge(conn.F, f.phi0));
    computed.emplace_back("dB^star_phi", wedge(conn.F, f.star_phi0));
    computed.emplace_back("B^dB^phi", wedge(BdB, f.phi0));
    computed.emplace_back("dB^dB^phi", wedge(F2, f.phi0));
    computed.emplace_back("B^dB^star_phi", wedge(BdB, f.star_phi0));
    computed.emplace_back("dB^dB^star_phi", wedge(F2, f.star_phi0));
    auto refs = family_references(a, b, ring);
    WorkedExampleTable table{std::move(conn), {}, true};
    for (std::size_t i = 0; i < computed.size(); ++i) {
        WorkedExampleRow row{std::move(computed[i].first),
                             std::move(computed[i].second),
                             std::move(refs[i].second), false};
        row.matches = row.computed == row.reference;
        table.all_match = table.all_match && row.matches;
        table.rows.push_back(std::move(row));
    }
    return table;
}

WorkedExampleTable checked(WorkedExampleTable table) {
    if (table.all_match) return table;
    std::ostringstream mismatch;
    for (const auto& row : table.rows) {
        if (row.matches) continue;
        mismatch << (mismatch.tellp() > 0 ? "; " : "") << row.name
                 << ": computed " << row.computed.str() << ", reference "
                 << row.reference.str();
    }
    throw MismatchWithReference(mismatch.str());
}

}  // namespace

WorkedExampleTable worked_example_report() {
    RingPtr ring = PolyRing::create({"a", "b"});
    return build_worked_example(Poly::var(ring, "a"), Poly::var(ring, "b"), ring);
}

WorkedExampleTable worked_example_report(const Rational& a, const Rational& b) {
    RingPtr ring = PolyRing::create({});
    return build_worked_example(Poly::constant(ring, a), Poly::constant(ring, b),
                                ring);
}

WorkedExampleTable worked_example() { return checked(worked_example_report()); }

WorkedExampleTable worked_example(const Rational& a, const Rational& b) {
    return checked(worked_example_report(a, b));
}

EnergyIdentity energy_identity_check(const KForm& F, const FundamentalForm& f) {
    EnergyIdentity e;
    e.lhs = inner(F, F, f.orientation) * Rational(2);
    KForm Fphi = wedge(F, f.phi0);
    e.rhs = inner(Fphi, Fphi, f.orientation);
    e.residual = wedge(wedge(F, F), f.phi0);
    return e;
}

PointwiseVerdicts pointwise_corollary_check(const KForm& F,
                                            const FundamentalForm& f) {
    for (const auto& [tuple, coeff] : F.terms())
        if (!coeff.is_constant())
            throw Error("pointwise check requires constant coefficients");
    auto [p1, p2] = lambda2_split(F, f);
    PointwiseVerdicts v;
    v.type1_identity = wedge(wedge(p1, p1), f.phi0) ==
                       vol_form(inner(p1, p1, f.orientation) * Rational(-2));
    v.type2_identity =
        wedge(wedge(p2, p2), f.phi0) == vol_form(inner(p2, p2, f.orientation));
    bool pure = p1.is_zero() || p2.is_zero();
    bool residual_zero = wedge(wedge(F, F), f.phi0).is_zero();
    v.forced_zero = !(pure && residual_zero) || F.is_zero();
    return v;
}

namespace {

struct FloatTables {
    struct WedgeEntry {
        int c, a, b;
        double sign;
    };
    std::vector<WedgeEntry> entries;
    std::array<std::array<double, 35>, 7> ubasis{};

    FloatTables() {
        auto t2 = tuples_of_degree(2);
        auto t4 = tuples_of_degree(4);
        auto index4 = [&](IndexTuple t) {
            return int(std::find(t4.begin(), t4.end(), t) - t4.begin());
        };
        for (std::size_t a = 0; a < t2.size(); ++a) {
            for (std::size_t b = 0; b < t2.size(); ++b) {
                if (a == b) continue;
                int s = wedge_sign(t2[a], t2[b]);
                if (s == 0) continue;
                entries.push_back(
                    {index4(wedge_union(t2[a], t2[b])), int(a), int(b), double(s)});
            }
        }
        FundamentalForm f = build_structure();
        std::array<std::array<double, 35>, 7> raw{};
        for (int i = 1; i <= 7; ++i) {
            KForm w = wedge(KForm::basis({i}), f.phi0);
            for (const auto& [tuple, coeff] : w.terms())
                raw[std::size_t(i - 1)][std::size_t(index4(tuple))] =
                    coeff.constant_value().to_double();
        }
        // Gram-Schmidt; the monomial basis is orthonormal for the pairing.
        for (std::size_t k = 0; k < 7; ++k) {
            auto v = raw[k];
            for (std::size_t p = 0; p < k; ++p) {
                double dot = 0;
                for (std::size_t c = 0; c < 35; ++c) dot += ubasis[p][c] * v[c];
                for (std::size_t c = 0; c < 35; ++c) v[c] -= dot * ubasis[p][c];
            }
            double nrm = 0;
            for (double x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
            for (std::size_t c = 0; c < 35; ++c) ubasis[k][c] = v[c] / nrm;
        }
    }
};

const FloatTables& float_tables() {
    static FloatTables t;
    return t;
}

struct RatioState {
    std::array<double, 35> w{};
    std::array<double, 7> s{};
    double den = 0, num = 0;
};

RatioState ratio_state(const std::array<double, 21>& F) {
    const FloatTables& t = float_tables();
    RatioState st;
    for (const auto& e : t.entries)
        st.w[std::size_t(e.c)] += e.sign * F[std::size_t(e.a)] * F[std::size_t(e.b)];
    for (std::size_t c = 0; c < 35; ++c) st.den += st.w[c] * st.w[c];
    double proj = 0;
    for (std::size_t k = 0; k < 7; ++k) {
        double dot = 0;
        for (std::size_t c = 0; c < 35; ++c) dot += t.ubasis[k][c] * st.w[c];
        st.s[k] = dot;
        proj += dot * dot;
    }
    st.num = st.den - proj;
    return st;
}

}  // namespace

double sd_ratio_float(const std::array<double, 21>& coeffs) {
    RatioState st = ratio_state(coeffs);
    if (st.den < 1e-10)
        throw DegenerateSample("curvature square vanishes at the sample");
    return st.num / st.den;
}

Rational sd_ratio_exact(const KForm& F, const FundamentalForm& f) {
    KForm w = wedge(F, F);
    if (w.is_zero())
        throw DegenerateSample("curvature square vanishes at the sample");
    auto split = lambda4_split(w, f);
    KForm residual = w - split[1];
    Poly num = inner(residual, residual, f.orientation);
    Poly den = inner(w, w, f.orientation);
    return num.constant_value() / den.constant_value();
}

SdSearchResult sd_infeasibility_search(int restarts, int steps, std::uint64_t seed) {
    if (restarts < 1 || steps < 1)
        throw Error("search needs at least one restart and one step");
    const FloatTables& t = float_tables();
    SdSearchResult result;
    result.min_ratio = 2.0;
    result.degenerate_count = 0;
    result.best.fill(0.0);
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed + std::uint64_t(r));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::array<double, 21> F{};
        RatioState st;
        for (;;) {
            for (double& x : F) x = uni(rng);
            double nrm = 0;
            for (double x : F) nrm += x * x;
            nrm = std::sqrt(nrm);
            for (double& x : F) x /= nrm;
            st = ratio_state(F);
            if (st.den >= 1e-10) break;
            ++result.degenerate_count;
        }
        double lr = 0.1;
        double ratio = st.num / st.den;
        if (ratio < result.min_ratio) {
            result.min_ratio = ratio;
            result.best = F;
        }
        for (int step = 0; step < steps; ++step) {
            std::array<double, 35> y{};
            for (std::size_t c = 0; c < 35; ++c)
                for (std::size_t k = 0; k < 7; ++k)
                    y[c] += t.ubasis[k][c] * st.s[k];
            std::array<double, 21> gnum{}, gden{};
            for (const auto& e : t.entries) {
                double dw = e.sign * F[std::size_t(e.b)];
                std::size_t c = std::size_t(e.c), a = std::size_t(e.a);
                gnum[a] += 2.0 * (st.w[c] - y[c]) * dw;
                gden[a] += 2.0 * st.w[c] * dw;
            }
            std::array<double, 21> grad{};
            double d2 = st.den * st.den;
            for (std::size_t a = 0; a < 21; ++a)
                grad[a] = (gnum[a] * st.den - st.num * gden[a]) / d2;
            std::array<double, 21> cand{};
            for (std::size_t a = 0; a < 21; ++a) cand[a] = F[a] - lr * grad[a];
            double nrm = 0;
            for (double x : cand) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) break;
            for (double& x : cand) x /= nrm;
            RatioState cst = ratio_state(cand);
            if (cst.den < 1e-12) break;
            double cratio = cst.num / cst.den;
            if (cratio <= ratio) {
                F = cand;
                st = cst;
                ratio = cratio;
                lr *= 1.1;
                if (ratio < result.min_ratio) {
                    result.min_ratio = ratio;
                    result.best = F;
                }
            } else {
                lr *= 0.5;
                if (lr < 1e-14) break;
            }
        }
    }
    return result;
}

ObstructionCertificate factorization_obstruction(const KForm& target,
                                                 const std::array<int, 4>& support) {
    if (target.degree() != 3 && !target.is_zero())
        throw DegreeMismatch("obstruction target must be a 3-form");
    std::array<int, 4> s = support;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < 4; ++i) {
        if (s[i] < 1 || s[i] > 7 || (i > 0 && s[i] == s[i - 1]))
            throw Error("support must be four distinct indices in 1..7");
    }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = p + 1; q < 4; ++q) pairs.push_back({s[p], s[q]});
    auto col = [&](int a, int b) {
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (pairs[k] == std::make_pair(a, b)) return k;
        throw Error("pair not in support");
    };
    ObstructionCertificate cert;
    cert.support = s;
    cert.system = Matrix<Rational>(4, 6);
    cert.nonzero_rhs = 0;
    std::size_t row = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k) {
                cert.system.at(row, col(s[j], s[k])) = Rational(1);
                cert.system.at(row, col(s[i], s[k])) = Rational(-1);
                cert.system.at(row, col(s[i], s[j])) = Rational(1);
                Poly c = target.coefficient(IndexTuple::of({s[i], s[j], s[k]}));
                if (!c.is_constant())
                    throw Error("obstruction target must have constant coefficients");
                cert.rhs[row] = c.constant_value();
                if (!cert.rhs[row].is_zero()) ++cert.nonzero_rhs;
                ++row;
            }
    cert.rank_system = cert.system.rank();
    Matrix<Rational> aug(4, 7);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 6; ++c) aug.at(r, c) = cert.system.at(r, c);
        aug.at(r, 6) = cert.rhs[r];
    }
    cert.rank_augmented = aug.rank();
    cert.inconsistent = cert.rank_augmented > cert.rank_system;
    return cert;
}

std::vector<std::pair<KForm, std::array<int, 4>>> obstruction_cases() {
    auto mono = [](int i, int j, int k, int c) {
        return KForm::monomial(Poly::constant(Rational(c)), IndexTuple::of({i, j, k}));
    };
    KForm contracted = mono(2, 4, 6, -1) + mono(3, 4, 7, -1) + mono(2, 5, 7, 1) +
                       mono(3, 5, 6, -1);
    KForm pattern = build_structure().phi0;
    KForm corr = mono(3, 5, 7, 1) + mono(2, 5, 6, 1) + mono(3, 4, 6, 1) +
                 mono(2, 4, 7, -1);
    std::vector<std::pair<KForm, std::array<int, 4>>> cases;
    cases.emplace_back(contracted, std::array<int, 4>{3, 4, 5, 6});
    cases.emplace_back(pattern + corr, std::array<int, 4>{1, 2, 3, 4});
    cases.emplace_back(pattern - corr, std::array<int, 4>{1, 2, 3, 4});
    cases.emplace_back(pattern, std::array<int, 4>{1, 2, 3, 4});
    cases.emplace_back(corr, std::array<int, 4>{2, 4, 5, 6});
    return cases;
}

bool alpha_beta_infeasibility_check(int trials, std::uint64_t seed,
                                    const FundamentalForm& f) {
    if (trials < 1) throw Error("need at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int t = 0; t < trials; ++t) {
        KForm alpha(1);
        for (int i = 1; i <= 7; ++i)
            alpha += KForm::basis({i}) * Rational(coef(rng));
        KForm beta(2);
        for (int i = 1; i <= 7; ++i)
            for (int j = i + 1; j <= 7; ++j)
                beta += KForm::basis({i, j}) * Rational(coef(rng));
        KForm gamma = wedge(alpha, beta);
        if (gamma.is_zero()) continue;
        auto split = lambda3_split(gamma, f);
        if (split[2].is_zero()) return false;
    }
    for (const auto& [target, support] : obstruction_cases()) {
        ObstructionCertificate cert = factorization_obstruction(target, support);
        if (!cert.inconsistent || cert.nonzero_rhs != 1) return false;
    }
    return true;
}

KForm tangent_check(const Connection1Form& conn, const KForm& a,
                    const FundamentalForm& f) {
    return wedge(wedge(ext_d(a), conn.F), f.phi0) * Rational(2);
}

bool presymplectic_integrand_check(const KForm& a1, const KForm& a2,
                                   const KForm& a3, const FundamentalForm& f) {
    KForm alternating = wedge(wedge(ext_d(a1), a2), a3) -
                        wedge(wedge(a1, ext_d(a2)), a3) +
                        wedge(wedge(a1, a2), ext_d(a3));
    KForm lhs = wedge(alternating * Rational(2), f.phi0);
    KForm rhs = wedge(ext_d(wedge(wedge(a1, a2), a3) * Rational(2)), f.phi0);
    return lhs == rhs;
}

}  // namespace g2gauge
