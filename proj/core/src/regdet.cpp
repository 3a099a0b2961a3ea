#include "g2gauge/regdet.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>
#include <tuple>
#include <utility>

#include "g2gauge/linalg.hpp"

namespace g2gauge {

namespace {

std::string coeff_str(const GaussianRational& c) {
    if (c.im.is_zero()) return c.re.str();
    if (c.re.is_zero()) {
        if (c.im == Rational(1)) return "i";
        if (c.im == Rational(-1)) return "-i";
        return c.im.str() + "*i";
    }
    std::string im = c.im.str();
    if (im[0] != '-') im = "+" + im;
    return "(" + c.re.str() + im + "*i)";
}

long long to_ll(const Rational& r) { return r.numerator().convert_to<long long>(); }

Rational frac(long long p, long long q) { return Rational(p) / Rational(q); }

bool has_ghost(const std::vector<ModeFactor>& fs) {
    for (const ModeFactor& f : fs)
        if (f.kind == FieldKind::Ghost || f.kind == FieldKind::GhostBar) return true;
    return false;
}

int mode_sum_of(const std::vector<ModeFactor>& fs) {
    int s = 0;
    for (const ModeFactor& f : fs) s += f.mode;
    return s;
}

int degree_of(const std::vector<ModeFactor>& fs) {
    int d = 0;
    for (const ModeFactor& f : fs) d += f.form_degree();
    return d;
}

struct Content {
    int a0 = 0, b = 0, bbg = 0, bfl = 0;
};

Content content_of(const std::vector<ModeFactor>& fs) {
    Content c;
    for (const ModeFactor& f : fs) switch (f.kind) {
            case FieldKind::A0: ++c.a0; break;
            case FieldKind::B: ++c.b; break;
            case FieldKind::Bbg: ++c.bbg; break;
            case FieldKind::Bfluc: ++c.bfl; break;
            default: break;
        }
    return c;
}

// Multisets of field factors with the given per-kind counts; modes run over
// the truncation window and every factor may carry a derivative.
void field_combos(int trunc, const Content& want, std::vector<std::vector<ModeFactor>>& out) {
    auto pool_for = [trunc](FieldKind k) {
        std::vector<ModeFactor> p;
        if (k == FieldKind::A0) {
            p.push_back({k, 0, false});
            p.push_back({k, 0, true});
            return p;
        }
        for (int m = -trunc; m <= trunc; ++m) {
            p.push_back({k, m, false});
            p.push_back({k, m, true});
        }
        return p;
    };
    std::array<std::pair<std::vector<ModeFactor>, int>, 4> slots = {
        std::pair{pool_for(FieldKind::A0), want.a0},
        std::pair{pool_for(FieldKind::B), want.b},
        std::pair{pool_for(FieldKind::Bbg), want.bbg},
        std::pair{pool_for(FieldKind::Bfluc), want.bfl},
    };
    std::vector<ModeFactor> cur;
    std::function<void(std::size_t, int, std::size_t)> rec = [&](std::size_t slot, int picked,
                                                                 std::size_t start) {
        if (slot == slots.size()) {
            out.push_back(cur);
            return;
        }
        const auto& [pool, count] = slots[slot];
        if (picked == count) {
            rec(slot + 1, 0, 0);
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            cur.push_back(pool[i]);
            rec(slot, picked + 1, i);
            cur.pop_back();
        }
    };
    rec(0, 0, 0);
}

// Relation vectors spanning what vanishes on shell in the given field
// content at fixed total mode: integration by parts against the closed
// associative form, and the truncated background (critical-point) equations
// wedged up to top degree.
std::vector<std::vector<ActionTerm>> relations_for(const Content& want, int mode_sum, int trunc) {
    std::vector<std::vector<ActionTerm>> rels;
    auto push_rel = [&rels](std::vector<ActionTerm> rel) {
        rel = canonicalize(std::move(rel));
        if (!rel.empty()) rels.push_back(std::move(rel));
    };

    std::vector<std::vector<ModeFactor>> combos;
    field_combos(trunc, want, combos);
    for (const std::vector<ModeFactor>& X : combos) {
        if (degree_of(X) != 3 || mode_sum_of(X) != mode_sum) continue;
        std::vector<ActionTerm> rel;
        for (std::size_t j = 0; j < X.size(); ++j) {
            if (X[j].derivative) continue;
            int sign = 1;
            for (std::size_t i = 0; i < j; ++i)
                if (X[i].form_degree() % 2) sign = -sign;
            ActionTerm t;
            t.coeff = GaussianRational(Rational(sign));
            t.measure = Measure::WedgePhi;
            t.factors = X;
            t.factors[j].derivative = true;
            rel.push_back(std::move(t));
        }
        push_rel(std::move(rel));
    }

    auto compose = [&push_rel](const std::vector<std::pair<Rational, std::vector<ModeFactor>>>& base,
                               const std::vector<ModeFactor>& partner) {
        std::vector<ActionTerm> rel;
        for (const auto& [co, bf] : base) {
            ActionTerm t;
            t.coeff = GaussianRational(co);
            t.measure = Measure::WedgePhi;
            t.factors = bf;
            t.factors.insert(t.factors.end(), partner.begin(), partner.end());
            rel.push_back(std::move(t));
        }
        push_rel(std::move(rel));
    };

    auto one_form_partners = [&](const Content& rem, int partner_mode) {
        std::vector<std::vector<ModeFactor>> ps;
        int total = rem.a0 + rem.b + rem.bbg + rem.bfl;
        if (rem.a0 < 0 || rem.b < 0 || rem.bbg < 0 || rem.bfl < 0 || total != 1) return ps;
        if (rem.a0 == 1 && partner_mode == 0) ps.push_back({{FieldKind::A0, 0, true}});
        if (std::abs(partner_mode) <= trunc) {
            if (rem.b == 1) ps.push_back({{FieldKind::B, partner_mode, false}});
            if (rem.bbg == 1) ps.push_back({{FieldKind::Bbg, partner_mode, false}});
            if (rem.bfl == 1) ps.push_back({{FieldKind::Bfluc, partner_mode, false}});
        }
        return ps;
    };

    // sum_{m+n=k} dB_m dB_n phi = 0, already top degree; 0-form partners only.
    if (want.bbg == 2 && want.b == 0 && want.bfl == 0 && want.a0 <= 1) {
        std::vector<std::pair<Rational, std::vector<ModeFactor>>> base;
        for (int m = -trunc; m <= trunc; ++m) {
            int n = mode_sum - m;
            if (n < -trunc || n > trunc) continue;
            base.push_back({Rational(1), {{FieldKind::Bbg, m, true}, {FieldKind::Bbg, n, true}}});
        }
        if (!base.empty()) {
            std::vector<ModeFactor> partner;
            if (want.a0 == 1) partner.push_back({FieldKind::A0, 0, false});
            compose(base, partner);
        }
    }

    // sum_{m+n=k} n dB_m B_n phi = 0, wedged with one more one-form.
    for (int k = -2 * trunc; k <= 2 * trunc; ++k) {
        std::vector<std::pair<Rational, std::vector<ModeFactor>>> base;
        for (int m = -trunc; m <= trunc; ++m) {
            int n = k - m;
            if (n < -trunc || n > trunc) continue;
            base.push_back({Rational(n), {{FieldKind::Bbg, m, true}, {FieldKind::Bbg, n, false}}});
        }
        if (base.empty()) continue;
        Content rem{want.a0, want.b, want.bbg - 2, want.bfl};
        for (const auto& p : one_form_partners(rem, mode_sum - k)) compose(base, p);
    }

    // dA0 dB_m phi = 0, wedged with one more one-form.
    if (want.a0 >= 1) {
        for (int m = -trunc; m <= trunc; ++m) {
            std::vector<std::pair<Rational, std::vector<ModeFactor>>> base = {
                {Rational(1), {{FieldKind::A0, 0, true}, {FieldKind::Bbg, m, true}}}};
            Content rem{want.a0 - 1, want.b, want.bbg - 1, want.bfl};
            for (const auto& p : one_form_partners(rem, mode_sum - m)) compose(base, p);
        }
    }

    return rels;
}

}  // namespace

int ModeFactor::form_degree() const {
    int base = 1;
    if (kind == FieldKind::A0 || kind == FieldKind::Ghost || kind == FieldKind::GhostBar) base = 0;
    return base + (derivative ? 1 : 0);
}

bool ModeFactor::odd() const {
    int ghost = (kind == FieldKind::Ghost || kind == FieldKind::GhostBar) ? 1 : 0;
    return (form_degree() + ghost) % 2 == 1;
}

std::string ModeFactor::str() const {
    std::string base;
    switch (kind) {
        case FieldKind::A0: base = "A0"; break;
        case FieldKind::B: base = "B[" + std::to_string(mode) + "]"; break;
        case FieldKind::Bbg: base = "Bb[" + std::to_string(mode) + "]"; break;
        case FieldKind::Bfluc: base = "Bf[" + std::to_string(mode) + "]"; break;
        case FieldKind::GhostBar: base = "cb[" + std::to_string(mode) + "]"; break;
        case FieldKind::Ghost: base = "c[" + std::to_string(mode) + "]"; break;
    }
    return derivative ? "d" + base : base;
}

std::string ActionTerm::str() const {
    std::ostringstream os;
    os << coeff_str(coeff);
    if (pi_pow != 0) {
        os << "*pi";
        if (pi_pow != 1) os << "^" << pi_pow;
    }
    if (lambda_pow != 0) {
        os << "*lambda";
        if (lambda_pow != 1) os << "^" << lambda_pow;
    }
    for (const ModeFactor& f : factors) os << "*" << f.str();
    os << (measure == Measure::WedgePhi ? "*phi" : "*dVol");
    return os.str();
}

std::vector<ActionTerm> canonicalize(std::vector<ActionTerm> terms) {
    std::map<std::tuple<Measure, int, int, std::vector<ModeFactor>>, GaussianRational> acc;
    for (ActionTerm& t : terms) {
        if (t.coeff.is_zero()) continue;
        std::vector<ModeFactor>& f = t.factors;
        int sign = 1;
        for (std::size_t i = 1; i < f.size(); ++i)
            for (std::size_t j = i; j > 0 && f[j] < f[j - 1]; --j) {
                if (f[j].odd() && f[j - 1].odd()) sign = -sign;
                std::swap(f[j], f[j - 1]);
            }
        bool vanishes = false;
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            if (f[i] == f[i + 1] && f[i].odd()) {
                vanishes = true;
                break;
            }
        if (vanishes) continue;
        acc[{t.measure, t.pi_pow, t.lambda_pow, f}] += sign < 0 ? -t.coeff : t.coeff;
    }
    std::vector<ActionTerm> out;
    for (auto& [key, c] : acc) {
        if (c.is_zero()) continue;
        out.push_back({c, std::get<1>(key), std::get<2>(key), std::get<0>(key), std::get<3>(key)});
    }
    return out;
}

std::string SymbolicAction::str() const {
    std::string out;
    for (const ActionTerm& t : terms) {
        if (!out.empty()) out += "\n";
        out += t.str();
    }
    return out;
}

SymbolicAction fourier_reduce(int truncation) {
    if (truncation < 0) throw Error("mode truncation must be nonnegative");
    const int N = truncation;
    std::vector<ActionTerm> raw;
    for (int n = -N; n <= N; ++n)
        for (int m = -N; m <= N; ++m) {
            int l = -n - m;
            if (l < -N || l > N) continue;
            raw.push_back({GaussianRational(Rational(0), Rational(4 * (n + m))),
                           1,
                           0,
                           Measure::WedgePhi,
                           {{FieldKind::B, n, false}, {FieldKind::B, m, true}, {FieldKind::B, l, false}}});
        }
    for (int n = -N; n <= N; ++n)
        raw.push_back({GaussianRational(3),
                       0,
                       0,
                       Measure::WedgePhi,
                       {{FieldKind::A0, 0, false}, {FieldKind::B, n, true}, {FieldKind::B, -n, true}}});
    for (int n = -N; n <= N; ++n)
        raw.push_back({GaussianRational(Rational(2 * n)),
                       1,
                       0,
                       Measure::Vol,
                       {{FieldKind::GhostBar, n, false}, {FieldKind::Ghost, n, false}}});
    return {truncation, canonicalize(std::move(raw))};
}

SymbolicAction quadratic_reference(int truncation) {
    if (truncation < 0) throw Error("mode truncation must be nonnegative");
    const int N = truncation;
    std::vector<ActionTerm> raw;
    for (int n = -N; n <= N; ++n)
        for (int m = -N; m <= N; ++m) {
            int l = -m - n;
            if (l < -N || l > N) continue;
            raw.push_back({GaussianRational(Rational(0), Rational(12 * (n + m))),
                           1,
                           2,
                           Measure::WedgePhi,
                           {{FieldKind::Bbg, m, false},
                            {FieldKind::Bfluc, n, true},
                            {FieldKind::Bfluc, l, false}}});
        }
    for (int n = -N; n <= N; ++n)
        raw.push_back({GaussianRational(3),
                       0,
                       2,
                       Measure::WedgePhi,
                       {{FieldKind::A0, 0, false},
                        {FieldKind::Bfluc, n, true},
                        {FieldKind::Bfluc, -n, true}}});
    return {truncation, canonicalize(std::move(raw))};
}

BackgroundSplit background_split(const SymbolicAction& action) {
    std::vector<ActionTerm> expanded;
    for (const ActionTerm& t : action.terms) {
        if (t.lambda_pow != 0) throw GradingMismatch("input already graded: " + t.str());
        for (const ModeFactor& f : t.factors)
            if (f.kind == FieldKind::Bbg || f.kind == FieldKind::Bfluc)
                throw GradingMismatch("input already split: " + t.str());
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < t.factors.size(); ++i)
            if (t.factors[i].kind == FieldKind::B) slots.push_back(i);
        const std::size_t branches = std::size_t(1) << slots.size();
        for (std::size_t mask = 0; mask < branches; ++mask) {
            ActionTerm b = t;
            int fluc = 0;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                bool is_fluc = (mask >> s) & 1;
                b.factors[slots[s]].kind = is_fluc ? FieldKind::Bfluc : FieldKind::Bbg;
                fluc += is_fluc ? 1 : 0;
            }
            b.lambda_pow = fluc;
            expanded.push_back(std::move(b));
        }
    }
    expanded = canonicalize(std::move(expanded));

    BackgroundSplit split;
    split.quadratic.truncation = action.truncation;
    split.interaction.truncation = action.truncation;
    split.ghost.truncation = action.truncation;
    std::vector<ActionTerm> linear;
    for (ActionTerm& t : expanded) {
        if (has_ghost(t.factors)) {
            if (t.lambda_pow != 0) throw GradingMismatch("graded ghost term: " + t.str());
            split.ghost.terms.push_back(std::move(t));
        } else if (t.lambda_pow == 0) {
            // classical value at the background; absorbed into the normalization
        } else if (t.lambda_pow == 1) {
            linear.push_back(std::move(t));
        } else if (t.lambda_pow == 2) {
            split.quadratic.terms.push_back(std::move(t));
        } else if (t.lambda_pow == 3) {
            split.interaction.terms.push_back(std::move(t));
        } else {
            throw GradingMismatch("unexpected grading: " + t.str());
        }
    }
    std::vector<ActionTerm> residual = reduce_modulo_relations(std::move(linear), action.truncation);
    if (!residual.empty()) {
        std::string what = "linear sector does not cancel on shell:";
        for (const ActionTerm& t : residual) what += " " + t.str();
        throw GradingMismatch(what);
    }
    return split;
}

std::vector<ActionTerm> reduce_modulo_relations(std::vector<ActionTerm> terms, int truncation) {
    if (truncation < 0) throw Error("mode truncation must be nonnegative");
    terms = canonicalize(std::move(terms));
    std::vector<ActionTerm> residual;

    using GroupKey = std::tuple<int, int, int, int, int, int, int>;
    std::map<GroupKey, std::vector<ActionTerm>> groups;
    for (ActionTerm& t : terms) {
        if (t.measure != Measure::WedgePhi || has_ghost(t.factors)) {
            residual.push_back(std::move(t));
            continue;
        }
        Content c = content_of(t.factors);
        groups[{t.pi_pow, t.lambda_pow, c.a0, c.b, c.bbg, c.bfl, mode_sum_of(t.factors)}].push_back(
            std::move(t));
    }
    for (auto& [key, group] : groups) {
        Content c{std::get<2>(key), std::get<3>(key), std::get<4>(key), std::get<5>(key)};
        const int msum = std::get<6>(key);
        std::vector<std::vector<ActionTerm>> rels = relations_for(c, msum, truncation);

        std::map<std::vector<ModeFactor>, std::size_t> index;
        auto idx = [&index](const std::vector<ModeFactor>& m) {
            auto [it, inserted] = index.emplace(m, index.size());
            return it->second;
        };
        for (const auto& rel : rels)
            for (const ActionTerm& t : rel) idx(t.factors);
        for (const ActionTerm& t : group) idx(t.factors);

        Matrix<Rational> A(index.size(), rels.size());
        for (std::size_t col = 0; col < rels.size(); ++col)
            for (const ActionTerm& t : rels[col]) A.at(idx(t.factors), col) += t.coeff.re;
        std::vector<Rational> re(index.size()), im(index.size());
        for (const ActionTerm& t : group) {
            re[idx(t.factors)] = t.coeff.re;
            im[idx(t.factors)] = t.coeff.im;
        }
        if (!A.solve(re).has_value() || !A.solve(im).has_value())
            for (ActionTerm& t : group) residual.push_back(std::move(t));
    }
    return canonicalize(std::move(residual));
}

SymbolicAction resubstitute(const BackgroundSplit& split) {
    std::vector<ActionTerm> out;
    auto take = [&out](const SymbolicAction& s) {
        for (ActionTerm t : s.terms) {
            bool background = false;
            for (ModeFactor& f : t.factors) {
                if (f.kind == FieldKind::Bbg) background = true;
                if (f.kind == FieldKind::Bfluc) f.kind = FieldKind::B;
            }
            if (background) continue;
            t.lambda_pow = 0;
            out.push_back(std::move(t));
        }
    };
    take(split.quadratic);
    take(split.interaction);
    take(split.ghost);
    return {split.quadratic.truncation, canonicalize(std::move(out))};
}

// ---- zeta-regularized infinite products ----

namespace {

void fold_power(ZetaValue& v, const Rational& base, const Rational& exponent) {
    if (base == Rational(1) || exponent.is_zero()) return;
    if (exponent.is_integer()) {
        v.rational_part *= rational_pow(base, to_ll(exponent));
        return;
    }
    if (base.sign() <= 0) throw UnsupportedPattern("fractional power of a nonpositive base");
    Rational& acc = v.root_powers[base];
    acc += exponent;
    if (acc.is_zero()) {
        v.root_powers.erase(base);
    } else if (acc.is_integer()) {
        Rational whole = acc;
        v.root_powers.erase(base);
        v.rational_part *= rational_pow(base, to_ll(whole));
    }
}

}  // namespace

std::string ZetaValue::str() const {
    std::vector<std::string> parts;
    if (rational_part != Rational(1) || (root_powers.empty() && two_pi_exponent.is_zero()))
        parts.push_back(rational_part.str());
    for (const auto& [base, e] : root_powers) parts.push_back(base.str() + "^(" + e.str() + ")");
    if (!two_pi_exponent.is_zero()) {
        if (two_pi_exponent == Rational(1))
            parts.push_back("(2*pi)");
        else
            parts.push_back("(2*pi)^(" + two_pi_exponent.str() + ")");
    }
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += "*";
        out += p;
    }
    return out;
}

ZetaValue operator*(const ZetaValue& a, const ZetaValue& b) {
    ZetaValue v = a;
    v.rational_part *= b.rational_part;
    v.two_pi_exponent += b.two_pi_exponent;
    for (const auto& [base, e] : b.root_powers) fold_power(v, base, e);
    return v;
}

ZetaValue zeta_product_eval(const ZetaProduct& product) {
    if (product.r.is_zero()) throw UnsupportedPattern("zero scale in regularized product");
    ZetaValue v;
    if (product.multiplicity == 0) return v;
    // zeta(0) = -1/2 turns c^{sum 1} into c^{-1/2}; zeta'(0) = -log(2 pi)/2
    // turns prod n into (2 pi)^{1/2}.
    Rational base_exp = frac(-product.multiplicity, 2);
    v.two_pi_exponent = frac(static_cast<long long>(product.n_pow - product.two_pi_pow) *
                                 product.multiplicity,
                             2);
    fold_power(v, product.r, base_exp);
    return v;
}

ZetaValue zeta_product_eval(const std::vector<ZetaProduct>& products) {
    ZetaValue v;
    for (const ZetaProduct& p : products) v = v * zeta_product_eval(p);
    return v;
}

// ---- formal determinant expressions ----

namespace {

std::string op_str(DetOp op) {
    switch (op) {
        case DetOp::D: return "D";
        case DetOp::Dp: return "Dp";
        case DetOp::Dpp: return "Dpp";
    }
    return "?";
}

void bump(std::map<DetAtom, Rational>& m, const DetAtom& a, const Rational& delta) {
    Rational& e = m[a];
    e += delta;
    if (e.is_zero()) m.erase(a);
}

void bump(std::map<std::string, Rational>& m, const std::string& k, const Rational& delta) {
    Rational& e = m[k];
    e += delta;
    if (e.is_zero()) m.erase(k);
}

}  // namespace

std::string DetAtom::str() const {
    std::string s = "det'(";
    if (scale != Rational(1)) s += scale.str() + "*";
    s += op_str(op);
    s += "|";
    s += space;
    s += ")";
    return s;
}

std::string FormalDet::str() const {
    std::vector<std::string> parts;
    if (prefactor != Rational(1) || (dets.empty() && vols.empty())) parts.push_back(prefactor.str());
    auto pw = [](const Rational& e) {
        return e == Rational(1) ? std::string() : "^(" + e.str() + ")";
    };
    for (const auto& [atom, e] : dets) parts.push_back(atom.str() + pw(e));
    for (const auto& [name, e] : vols) parts.push_back(name + pw(e));
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += " * ";
        out += p;
    }
    return out;
}

FormalDet operator*(const FormalDet& a, const FormalDet& b) {
    FormalDet out = a;
    out.prefactor *= b.prefactor;
    for (const auto& [atom, e] : b.dets) bump(out.dets, atom, e);
    for (const auto& [name, e] : b.vols) bump(out.vols, name, e);
    return out;
}

FormalDet det_rescale(const FormalDet& expr, const Rational& c, const std::string& space,
                      int betti) {
    if (c.is_zero()) throw Error("determinant rescaling by zero");
    if (c == Rational(1)) return expr;
    FormalDet out;
    out.prefactor = expr.prefactor;
    out.vols = expr.vols;
    for (const auto& [atom, e] : expr.dets) {
        if (atom.op == DetOp::D && atom.space == space) {
            Rational be = e * Rational(betti);
            if (!be.is_integer()) throw Error("rescaling exponent must stay integral");
            out.prefactor *= rational_pow(c, -to_ll(be));
            DetAtom na = atom;
            na.scale = atom.scale / c;
            bump(out.dets, na, e);
        } else {
            bump(out.dets, atom, e);
        }
    }
    return out;
}

// ---- assembly of the semiclassical partition function ----

namespace {

const char* const kVolG = "Vol(G)";
const char* const kVolE2A0 = "Vol(E_L2tA0)";
const char* const kVolE2phi = "Vol(E_L2phi)";
const char* const kVolL1A0 = "Vol(L1A0)";
const char* const kVolL1phi = "Vol(L1phi)";
const char* const kVolL0 = "Vol(L0)";
const char* const kVolH0 = "Vol(H0)";
const char* const kVolH1 = "Vol(H1)";
const char* const kGhostFactor = "Ghost(S1)";

DetAtom atom(long long scale, DetOp op, const char* space) {
    return DetAtom{Rational(scale), op, space};
}

void need_vol(const FormalDet& v, const char* key, const Rational& expected, const char* rule) {
    auto it = v.vols.find(key);
    if (it == v.vols.end() || it->second != expected)
        throw RuleFailure(std::string(rule) + ": expected " + key + "^(" + expected.str() + ")");
}

Rational take_det(FormalDet& v, const DetAtom& a, const char* rule) {
    auto it = v.dets.find(a);
    if (it == v.dets.end()) throw RuleFailure(std::string(rule) + ": expected " + a.str());
    Rational e = it->second;
    v.dets.erase(it);
    return e;
}

void rule_ghost_zeta(ZscState& st) {
    need_vol(st.value, kGhostFactor, Rational(1), "ghost_zeta");
    ZetaValue z = zeta_product_eval(ZetaProduct{Rational(1), 1, 1, 2});
    if (!z.exact()) throw RuleFailure("ghost_zeta: ghost product is not an exact rational");
    st.value.prefactor *= z.rational_part;
    st.value.vols.erase(kGhostFactor);
}

void rule_vol_exact_sequence(ZscState& st) {
    need_vol(st.value, kVolE2A0, frac(1, 2), "vol_exact_sequence");
    need_vol(st.value, kVolE2phi, frac(1, 2), "vol_exact_sequence");
    st.value.vols.erase(kVolE2A0);
    st.value.vols.erase(kVolE2phi);
    bump(st.value.vols, kVolL1A0, frac(1, 2));
    bump(st.value.vols, kVolL1phi, frac(1, 2));
    bump(st.value.vols, kVolL0, Rational(-1));
    bump(st.value.vols, kVolH0, Rational(1));
    bump(st.value.vols, kVolH1, Rational(-1));
    bump(st.value.dets, atom(1, DetOp::Dp, "L1tA0"), frac(1, 4));
    bump(st.value.dets, atom(1, DetOp::Dp, "L1phi"), frac(1, 4));
    bump(st.value.dets, atom(1, DetOp::D, "L0"), frac(-1, 2));
}

void rule_renormalize_vol_gauge(ZscState& st) {
    need_vol(st.value, kVolG, Rational(-1), "renormalize_vol_gauge");
    need_vol(st.value, kVolL1A0, frac(1, 2), "renormalize_vol_gauge");
    need_vol(st.value, kVolL1phi, frac(1, 2), "renormalize_vol_gauge");
    need_vol(st.value, kVolL0, Rational(-1), "renormalize_vol_gauge");
    st.value.vols.erase(kVolG);
    st.value.vols.erase(kVolL1A0);
    st.value.vols.erase(kVolL1phi);
    st.value.vols.erase(kVolL0);
}

void rule_renormalize_vol_cohomology(ZscState& st) {
    need_vol(st.value, kVolH0, Rational(1), "renormalize_vol_cohomology");
    need_vol(st.value, kVolH1, Rational(-1), "renormalize_vol_cohomology");
    st.value.vols.erase(kVolH0);
    st.value.vols.erase(kVolH1);
}

void rule_lambda42_transfer(ZscState& st) {
    Rational e = take_det(st.value, atom(9, DetOp::Dp, "L42"), "lambda42_transfer");
    bump(st.value.dets, atom(9, DetOp::Dp, "L1"), e);
}

void rule_hodge_split(ZscState& st) {
    Rational e = take_det(st.value, atom(9, DetOp::Dp, "L1"), "hodge_split");
    bump(st.value.dets, atom(9, DetOp::D, "L1"), e);
    bump(st.value.dets, atom(9, DetOp::Dpp, "L1"), -e);
}

void rule_codifferential_transfer(ZscState& st) {
    Rational e = take_det(st.value, atom(9, DetOp::Dpp, "L1"), "codifferential_transfer");
    bump(st.value.dets, atom(9, DetOp::D, "L0"), e);
}

void rule_rescale(ZscState& st) {
    if (st.branch_scale) throw RuleFailure("rescale: branch scale already extracted");
    auto it1 = st.value.dets.find(atom(9, DetOp::D, "L1"));
    auto it0 = st.value.dets.find(atom(9, DetOp::D, "L0"));
    if (it1 == st.value.dets.end() || it0 == st.value.dets.end())
        throw RuleFailure("rescale: expected det'(9*D|L1) and det'(9*D|L0)");
    if (it0->second != -it1->second)
        throw RuleFailure("rescale: branch exponents are not opposite");
    Rational e1 = it1->second;
    Rational e0 = it0->second;
    st.value.dets.erase(atom(9, DetOp::D, "L1"));
    st.value.dets.erase(atom(9, DetOp::D, "L0"));
    bump(st.value.dets, atom(1, DetOp::D, "L1"), e1);
    bump(st.value.dets, atom(1, DetOp::D, "L0"), e0);
    st.branch_scale = rational_pow(Rational(9), st.b0 - st.b1);
}

void rule_scalar_extraction(ZscState& st) {
    if (!st.branch_scale) throw RuleFailure("scalar_extraction: no branch scale pending");
    st.value.prefactor *= Rational(1) / *st.branch_scale;
    st.branch_scale.reset();
}

using RuleFn = void (*)(ZscState&);

const std::vector<std::pair<std::string, RuleFn>>& rule_table() {
    static const std::vector<std::pair<std::string, RuleFn>> table = {
        {"ghost_zeta", rule_ghost_zeta},
        {"vol_exact_sequence", rule_vol_exact_sequence},
        {"renormalize_vol_gauge", rule_renormalize_vol_gauge},
        {"renormalize_vol_cohomology", rule_renormalize_vol_cohomology},
        {"lambda42_transfer", rule_lambda42_transfer},
        {"hodge_split", rule_hodge_split},
        {"codifferential_transfer", rule_codifferential_transfer},
        {"rescale", rule_rescale},
        {"scalar_extraction", rule_scalar_extraction},
    };
    return table;
}

}  // namespace

ZscState zsc_initial(int b0, int b1) {
    ZscState st;
    st.b0 = b0;
    st.b1 = b1;
    FormalDet& v = st.value;
    v.vols[kVolG] = Rational(-1);
    v.vols[kVolE2A0] = frac(1, 2);
    v.vols[kVolE2phi] = frac(1, 2);
    v.vols[kGhostFactor] = Rational(1);
    v.dets[atom(9, DetOp::Dp, "L2tA0")] = frac(-1, 8);
    v.dets[atom(9, DetOp::Dp, "L42")] = frac(-1, 8);
    return st;
}

const std::vector<std::string>& zsc_rule_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : rule_table()) n.push_back(name);
        return n;
    }();
    return names;
}

void zsc_apply_rule(ZscState& state, const std::string& rule) {
    for (const auto& [name, fn] : rule_table()) {
        if (name != rule) continue;
        fn(state);
        std::string expr = state.value.str();
        if (state.branch_scale)
            expr += " [branch scale " + state.branch_scale->str() + " pending]";
        state.trace.push_back({rule, std::move(expr)});
        return;
    }
    throw RuleFailure("unknown rule: " + rule);
}

ZscAssembly assemble_Zsc(int b0, int b1) {
    ZscState st = zsc_initial(b0, b1);
    ZscAssembly out;
    out.initial = st.value;
    for (const std::string& rule : zsc_rule_names()) zsc_apply_rule(st, rule);
    out.value = std::move(st.value);
    out.trace = std::move(st.trace);
    return out;
}

}  // namespace g2gauge
