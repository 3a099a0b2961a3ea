#include "g2gauge/dbcech.hpp"

#include <algorithm>
#include <iterator>
#include <tuple>
#include <utility>

namespace g2gauge {

// ---------------------------------------------------------------- complex

SimplicialComplex::SimplicialComplex(int dim) : dim_(dim) {
    if (dim < 0) throw DimensionMismatch("negative complex dimension");
    simplices_.resize(dim + 1);
    index_.resize(dim + 1);
}

void SimplicialComplex::add_closed(const VertexList& verts) {
    VertexList v = verts;
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw ConstructionFailure("degenerate simplex with repeated vertex");
    int d = (int)v.size() - 1;
    if (d < 0 || d > dim_) throw DimensionMismatch("simplex dimension outside complex range");
    if (index_[d].count(v)) return;
    index_[d][v] = (int)simplices_[d].size();
    simplices_[d].push_back(v);
    if (d == dim_) orientation_.resize(simplices_[d].size(), Rational(0));
    if (d > 0)
        for (int i = 0; i <= d; ++i) {
            VertexList f = v;
            f.erase(f.begin() + i);
            add_closed(f);
        }
}

int SimplicialComplex::find(int d, const VertexList& verts) const {
    if (d < 0 || d > dim_) return -1;
    auto it = index_[d].find(verts);
    return it == index_[d].end() ? -1 : it->second;
}

void SimplicialComplex::set_orientation(const VertexList& top, const Rational& coeff) {
    int i = find(dim_, top);
    if (i < 0) throw ConstructionFailure("orientation assigned to an absent top simplex");
    orientation_[i] = coeff;
}

Chain SimplicialComplex::fundamental_chain() const {
    Chain z;
    for (std::size_t i = 0; i < orientation_.size(); ++i)
        if (!orientation_[i].is_zero()) z[(int)i] = orientation_[i];
    return z;
}

// ---------------------------------------------------------------- cochains

bool Cochain::is_zero() const {
    for (const auto& v : values)
        if (!v.is_zero()) return false;
    return true;
}

Cochain Cochain::operator-() const {
    Cochain out = *this;
    for (auto& v : out.values) v = -v;
    return out;
}

Cochain& Cochain::operator+=(const Cochain& o) {
    if (degree != o.degree || values.size() != o.values.size())
        throw DegreeMismatch("cochain sum across different degrees");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
    if (degree != o.degree || values.size() != o.values.size())
        throw DegreeMismatch("cochain difference across different degrees");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

Cochain& Cochain::operator*=(const Rational& s) {
    for (auto& v : values) v *= s;
    return *this;
}

Cochain zero_cochain(const SimplicialComplex& cx, int degree) {
    if (degree < 0 || degree > cx.dim())
        throw DegreeMismatch("cochain degree outside complex range");
    Cochain c;
    c.degree = degree;
    c.values.assign(cx.count(degree), Rational(0));
    return c;
}

Chain boundary(const SimplicialComplex& cx, int d, const Chain& c) {
    if (d < 1 || d > cx.dim()) throw DegreeMismatch("boundary degree outside complex range");
    Chain out;
    for (const auto& [si, co] : c) {
        const VertexList& v = cx.vertices(d, si);
        for (int i = 0; i <= d; ++i) {
            VertexList f = v;
            f.erase(f.begin() + i);
            int fi = cx.find(d - 1, f);
            Rational s = (i % 2 == 0) ? co : -co;
            auto it = out.emplace(fi, Rational(0)).first;
            it->second += s;
            if (it->second.is_zero()) out.erase(it);
        }
    }
    return out;
}

Cochain coboundary(const SimplicialComplex& cx, const Cochain& c) {
    if (c.degree >= cx.dim()) throw DegreeMismatch("coboundary exceeds complex dimension");
    Cochain out = zero_cochain(cx, c.degree + 1);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const VertexList& v = cx.vertices(c.degree + 1, (int)i);
        for (int j = 0; j <= c.degree + 1; ++j) {
            VertexList f = v;
            f.erase(f.begin() + j);
            Rational term = c.values[cx.find(c.degree, f)];
            if (j % 2 == 0)
                out.values[i] += term;
            else
                out.values[i] -= term;
        }
    }
    return out;
}

Cochain cup(const SimplicialComplex& cx, const Cochain& a, const Cochain& b) {
    int p = a.degree, q = b.degree;
    if (p + q > cx.dim()) throw DegreeMismatch("cup product exceeds complex dimension");
    Cochain out = zero_cochain(cx, p + q);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const VertexList& v = cx.vertices(p + q, (int)i);
        VertexList front(v.begin(), v.begin() + p + 1);
        VertexList back(v.begin() + p, v.end());
        out.values[i] = a.values[cx.find(p, front)] * b.values[cx.find(q, back)];
    }
    return out;
}

Rational pairing(const Chain& chain, const Cochain& c) {
    Rational out(0);
    for (const auto& [i, co] : chain) {
        if (i < 0 || (std::size_t)i >= c.values.size())
            throw DegreeMismatch("chain paired against a cochain of another degree");
        out += co * c.values[i];
    }
    return out;
}

// ---------------------------------------------------------------- cover

bool Cover::chart_contains(int chart, int v) const {
    const auto& c = charts[chart];
    return std::binary_search(c.begin(), c.end(), v);
}

bool Cover::in_nerve(const VertexList& tuple) const {
    if (tuple.empty()) return false;
    for (int a : tuple)
        if (a < 0 || (std::size_t)a >= charts.size()) return false;
    std::vector<int> meet = charts[tuple[0]];
    for (std::size_t k = 1; k < tuple.size() && !meet.empty(); ++k) {
        std::vector<int> next;
        std::set_intersection(meet.begin(), meet.end(), charts[tuple[k]].begin(),
                              charts[tuple[k]].end(), std::back_inserter(next));
        meet.swap(next);
    }
    return !meet.empty();
}

void validate_cover(const SimplicialComplex& cx, const Cover& cover) {
    int nv = cx.vertex_count();
    if ((int)cover.owner.size() != nv)
        throw ConstructionFailure("ownership map does not cover the vertex set");
    std::vector<char> covered(nv, 0);
    for (const auto& chart : cover.charts)
        for (int v : chart) {
            if (v < 0 || v >= nv) throw ConstructionFailure("chart lists an unknown vertex");
            covered[v] = 1;
        }
    for (int v = 0; v < nv; ++v)
        if (!covered[v]) throw ConstructionFailure("a vertex lies in no chart");
    for (int v = 0; v < nv; ++v) {
        int o = cover.owner[v];
        if (o < 0 || (std::size_t)o >= cover.size())
            throw ConstructionFailure("owner index out of range");
        if (!cover.chart_contains(o, v))
            throw ConstructionFailure("owner chart misses its own vertex");
    }
    // Star condition: every top simplex through v lies in owner(v)'s chart.
    for (std::size_t i = 0; i < cx.count(cx.dim()); ++i) {
        const VertexList& verts = cx.vertices(cx.dim(), (int)i);
        for (int v : verts)
            for (int w : verts)
                if (!cover.chart_contains(cover.owner[v], w))
                    throw ConstructionFailure(
                        "ownership is not subordinate: a star leaves the owner chart");
    }
}

void for_each_tuple(int n, int length, const std::function<void(const VertexList&)>& fn) {
    if (length <= 0 || length > n) return;
    VertexList t(length);
    for (int i = 0; i < length; ++i) t[i] = i;
    while (true) {
        fn(t);
        int i = length - 1;
        while (i >= 0 && t[i] == n - length + i) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j < length; ++j) t[j] = t[j - 1] + 1;
    }
}

FormCochain make_form_cochain(const SimplicialComplex& cx, int cech_degree, int form_degree) {
    FormCochain out;
    out.degree = cech_degree;
    out.zero = zero_cochain(cx, form_degree);
    return out;
}

// ---------------------------------------------------------------- cocycle checks

bool CocycleReport::pass() const {
    return connection.empty() && transition.empty() && integrality.empty() && cocycle.empty() &&
           lattice.empty();
}

bool CocycleReport::pass_lattice() const {
    return connection.empty() && integrality.empty() && cocycle.empty() && lattice.empty();
}

namespace {

// Sum of |residual| over the simplices of the given degree whose
// vertices all lie in each chart of the tuple.
Rational overlap_magnitude(const SimplicialComplex& cx, const Cover& cover,
                           const VertexList& tuple, const Cochain& residual) {
    Rational mag(0);
    for (std::size_t i = 0; i < residual.values.size(); ++i) {
        if (residual.values[i].is_zero()) continue;
        const VertexList& verts = cx.vertices(residual.degree, (int)i);
        bool inside = true;
        for (int a : tuple)
            for (int v : verts)
                if (!cover.chart_contains(a, v)) inside = false;
        if (inside) mag += abs(residual.values[i]);
    }
    return mag;
}

// Fractional parts of the residual on the overlap, for the lattice view.
Rational overlap_fractional(const SimplicialComplex& cx, const Cover& cover,
                            const VertexList& tuple, const Cochain& residual) {
    Cochain frac = residual;
    for (auto& v : frac.values) v = fractional_part(v);
    return overlap_magnitude(cx, cover, tuple, frac);
}

void append(std::vector<ResidualEntry>& list, VertexList tuple, const char* condition,
            Rational magnitude) {
    if (magnitude.is_zero()) return;
    list.push_back({std::move(tuple), condition, std::move(magnitude)});
}

void check_integer_layer(const Cover& cover, const IntCochain& top, const char* name,
                         CocycleReport& report) {
    for (const auto& [tuple, value] : top.entries)
        if (!value.is_integer())
            append(report.integrality, tuple, name, fractional_part(abs(value)));
    IntCochain d = cech_delta(cover, top);
    for (const auto& [tuple, value] : d.entries)
        append(report.cocycle, tuple, name, abs(value));
}

}  // namespace

CocycleReport db_cocycle_check(const SimplicialComplex& cx, const Cover& cover,
                               const DBClass& cls) {
    CocycleReport report;
    int n = (int)cover.size();
    for_each_tuple(n, 2, [&](const VertexList& t) {
        if (!cover.in_nerve(t)) return;
        Cochain r = cls.conn.get({t[1]});
        r -= cls.conn.get({t[0]});
        r -= coboundary(cx, cls.trans.get(t));
        append(report.connection, t, "connection", overlap_magnitude(cx, cover, t, r));
    });
    for_each_tuple(n, 3, [&](const VertexList& t) {
        if (!cover.in_nerve(t)) return;
        Cochain s = cls.trans.get({t[1], t[2]});
        s -= cls.trans.get({t[0], t[2]});
        s += cls.trans.get({t[0], t[1]});
        Cochain exact = s;
        Rational w = cls.wind.get(t);
        for (auto& v : exact.values) v -= w;
        append(report.transition, t, "transition", overlap_magnitude(cx, cover, t, exact));
        append(report.lattice, t, "transition mod 1", overlap_fractional(cx, cover, t, s));
    });
    check_integer_layer(cover, cls.wind, "winding", report);
    return report;
}

CocycleReport phase_cocycle_check(const SimplicialComplex& cx, const Cover& cover,
                                  const PhaseClass& cls) {
    CocycleReport report;
    for_each_tuple((int)cover.size(), 2, [&](const VertexList& t) {
        if (!cover.in_nerve(t)) return;
        Cochain s = cls.log.get({t[1]});
        s -= cls.log.get({t[0]});
        Cochain exact = s;
        Rational j = cls.jump.get(t);
        for (auto& v : exact.values) v -= j;
        append(report.connection, t, "jump", overlap_magnitude(cx, cover, t, exact));
        append(report.lattice, t, "jump mod 1", overlap_fractional(cx, cover, t, s));
    });
    check_integer_layer(cover, cls.jump, "jump", report);
    return report;
}

// ---------------------------------------------------------------- background

BackgroundCocycle background_from_theta(const SimplicialComplex& cx, const Cover& cover,
                                        const IntCochain& theta) {
    validate_cover(cx, cover);
    int t = theta.degree;
    if (t < 1) throw DegreeMismatch("background cochain must have positive Cech degree");
    BackgroundCocycle bg;
    bg.theta = theta;
    bg.xi.assign(cover.size(), zero_cochain(cx, 0));
    for (int v = 0; v < cx.vertex_count(); ++v) bg.xi[cover.owner[v]].values[v] = Rational(1);
    bg.tau = make_form_cochain(cx, t - 1, 0);
    int n = (int)cover.size();
    for_each_tuple(n, t, [&](const VertexList& tup) {
        if (!cover.in_nerve(tup)) return;
        Cochain val = zero_cochain(cx, 0);
        for (int v = 0; v < cx.vertex_count(); ++v) {
            VertexList full = tup;
            full.push_back(cover.owner[v]);
            val.values[v] = theta.get(full);
        }
        if (!val.is_zero()) bg.tau.entries[tup] = std::move(val);
    });
    bg.chi = make_form_cochain(cx, t - 2 >= 0 ? t - 2 : 0, 1);
    bg.chi.degree = t - 2;
    if (t >= 2) {
        for_each_tuple(n, t - 1, [&](const VertexList& tup) {
            if (!cover.in_nerve(tup)) return;
            Cochain val = zero_cochain(cx, 1);
            for (int c = 0; c < n; ++c) {
                VertexList full = tup;
                full.push_back(c);
                Cochain dt = coboundary(cx, bg.tau.get(full));
                val -= cup(cx, bg.xi[c], dt);
            }
            if (!val.is_zero()) bg.chi.entries[tup] = std::move(val);
        });
    }
    return bg;
}

bool BackgroundReport::pass() const {
    return integrality.empty() && cocycle.empty() && partition.empty() && smearing.empty() &&
           descent.empty();
}

BackgroundReport background_check(const SimplicialComplex& cx, const Cover& cover,
                                  const BackgroundCocycle& bg) {
    BackgroundReport report;
    int n = (int)cover.size();
    int t = bg.theta.degree;
    for (const auto& [tuple, value] : bg.theta.entries)
        if (!value.is_integer())
            append(report.integrality, tuple, "theta", fractional_part(abs(value)));
    IntCochain d = cech_delta(cover, bg.theta);
    for (const auto& [tuple, value] : d.entries)
        append(report.cocycle, tuple, "theta", abs(value));

    if ((int)bg.xi.size() != n) {
        append(report.partition, {}, "partition size", Rational(1));
    } else {
        Cochain sum = zero_cochain(cx, 0);
        for (int a = 0; a < n; ++a) {
            sum += bg.xi[a];
            Rational outside(0);
            for (int v = 0; v < cx.vertex_count(); ++v)
                if (!bg.xi[a].values[v].is_zero() && !cover.chart_contains(a, v))
                    outside += abs(bg.xi[a].values[v]);
            append(report.partition, {a}, "subordination", outside);
        }
        Rational off(0);
        for (auto& v : sum.values) off += abs(v - Rational(1));
        append(report.partition, {}, "partition of unity", off);
    }

    if (bg.tau.degree != t - 1) {
        append(report.smearing, {}, "tau degree", Rational(1));
    } else {
        for_each_tuple(n, t, [&](const VertexList& tup) {
            if (!cover.in_nerve(tup)) return;
            Cochain r = bg.tau.get(tup);
            for (int e = 0; e < n && (int)bg.xi.size() == n; ++e) {
                VertexList full = tup;
                full.push_back(e);
                Rational th = bg.theta.get(full);
                if (th.is_zero()) continue;
                Cochain w = bg.xi[e];
                w *= th;
                r -= w;
            }
            append(report.smearing, tup, "tau", overlap_magnitude(cx, cover, tup, r));
        });
    }

    if (t >= 2) {
        for_each_tuple(n, t - 1, [&](const VertexList& tup) {
            if (!cover.in_nerve(tup)) return;
            Cochain r = bg.chi.get(tup);
            for (int c = 0; c < n && (int)bg.xi.size() == n; ++c) {
                VertexList full = tup;
                full.push_back(c);
                Cochain dt = coboundary(cx, bg.tau.get(full));
                r += cup(cx, bg.xi[c], dt);
            }
            append(report.descent, tup, "chi", overlap_magnitude(cx, cover, tup, r));
        });
    }
    return report;
}

// ---------------------------------------------------------------- decomposition

Chain PolyDecomp::chain(int level, const VertexList& tuple) const {
    if (level < 0 || level >= (int)levels.size()) return {};
    auto it = levels[level].find(tuple);
    return it == levels[level].end() ? Chain{} : it->second;
}

PolyDecomp polyhedral_decomposition(const SimplicialComplex& cx, const Cover& cover) {
    validate_cover(cx, cover);
    int n = cx.dim();
    PolyDecomp P;
    P.dim = n;
    P.levels.resize(n + 1);
    for (std::size_t ti = 0; ti < cx.count(n); ++ti) {
        const Rational& eps = cx.orientation((int)ti);
        if (eps.is_zero()) continue;
        const VertexList& v = cx.vertices(n, (int)ti);
        for (int k = 0; k <= n; ++k) {
            // Front face kept as the chain piece; the back face is
            // evaluated against the partition indicators, which for
            // 0/1 weights branches over owner transitions.
            VertexList front(v.begin(), v.begin() + (n - k + 1));
            int fi = cx.find(n - k, front);
            int level_sign = (k * (k + 1) / 2) % 2 == 0 ? 1 : -1;
            struct State {
                VertexList tuple;
                int weight;
            };
            std::vector<State> states = {{{cover.owner[v[n - k]]}, 1}};
            for (int j = 1; j <= k; ++j) {
                int wa = cover.owner[v[n - k + j - 1]];
                int wb = cover.owner[v[n - k + j]];
                std::vector<State> next;
                if (wa != wb)
                    for (const auto& st : states) {
                        next.push_back({st.tuple, st.weight});
                        next.back().tuple.push_back(wb);
                        next.push_back({st.tuple, -st.weight});
                        next.back().tuple.push_back(wa);
                    }
                states.swap(next);
            }
            for (const auto& st : states) {
                Rational c = eps * Rational(st.weight * level_sign);
                Chain& ch = P.levels[k][st.tuple];
                auto it = ch.emplace(fi, Rational(0)).first;
                it->second += c;
                if (it->second.is_zero()) ch.erase(it);
            }
        }
    }
    for (auto& lv : P.levels)
        for (auto it = lv.begin(); it != lv.end();)
            it = it->second.empty() ? lv.erase(it) : std::next(it);
    return P;
}

DecompReport decomposition_check(const SimplicialComplex& cx, const Cover& cover,
                                 const PolyDecomp& P) {
    DecompReport report;
    int n = P.dim;
    if (n != cx.dim() || (int)P.levels.size() != n + 1)
        throw DimensionMismatch("decomposition does not match the complex");
    report.boundary_squared_zero = true;
    report.insertion_identity = true;
    report.chart_support = true;

    Chain top_sum;
    for (const auto& [tuple, ch] : P.levels[0])
        for (const auto& [i, c] : ch) {
            auto it = top_sum.emplace(i, Rational(0)).first;
            it->second += c;
            if (it->second.is_zero()) top_sum.erase(it);
        }
    report.top_sum_is_fundamental = top_sum == cx.fundamental_chain();

    int nch = (int)cover.size();
    for (int k = 0; k <= n; ++k) {
        // Candidate tuples: stored ones plus single-index deletions of
        // the stored tuples one level down, so vanishing chains with
        // nonvanishing insertions would be caught.
        std::vector<VertexList> candidates;
        for (const auto& [tuple, ch] : P.levels[k]) candidates.push_back(tuple);
        if (k + 1 <= n)
            for (const auto& [tuple, ch] : P.levels[k + 1])
                for (std::size_t j = 0; j < tuple.size(); ++j) {
                    VertexList t = tuple;
                    t.erase(t.begin() + j);
                    candidates.push_back(t);
                }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (const auto& tuple : candidates) {
            Chain ch = P.chain(k, tuple);
            int d = n - k;
            Chain bd = d >= 1 ? boundary(cx, d, ch) : Chain{};
            if (d >= 2 && !boundary(cx, d - 1, bd).empty()) report.boundary_squared_zero = false;
            if (k < n && d >= 1) {
                Chain rhs;
                for (std::size_t j = 0; j <= tuple.size(); ++j)
                    for (int b = 0; b < nch; ++b) {
                        VertexList t = tuple;
                        t.insert(t.begin() + j, b);
                        Chain ins = P.chain(k + 1, t);
                        for (const auto& [i, c] : ins) {
                            auto it = rhs.emplace(i, Rational(0)).first;
                            it->second += (j % 2 == 0) ? c : -c;
                            if (it->second.is_zero()) rhs.erase(it);
                        }
                    }
                if (bd != rhs) report.insertion_identity = false;
            }
            for (int a : tuple)
                for (const auto& [i, c] : ch)
                    for (int v : cx.vertices(n - k, i))
                        if (!cover.chart_contains(a, v)) report.chart_support = false;
        }
    }
    return report;
}

// ---------------------------------------------------------------- ladder

LadderPattern three_dim_pattern() { return {3, 1, {1, 0}}; }
LadderPattern eight_dim_pattern() { return {8, 3, {1, 1, 1}}; }

std::vector<LadderTerm> ladder_terms(const LadderPattern& pattern) {
    int t = pattern.background_degree;
    int n = pattern.ambient;
    if (t < 1) throw UnsupportedPattern("background degree must be at least 1");
    if (pattern.class_tops.empty()) throw UnsupportedPattern("ladder needs at least one class");
    int span = t - 1;
    for (int p : pattern.class_tops) {
        if (p < 0) throw UnsupportedPattern("negative top form degree");
        span += p + 1;
    }
    if (span != n)
        throw UnsupportedPattern("class degrees and background degree do not fill the ambient");

    int classes = (int)pattern.class_tops.size();
    std::vector<int> layer(classes, 0);
    std::vector<bool> diff(classes, true);
    diff[0] = false;
    int active = 0;

    std::vector<LadderTerm> out;
    for (int k = 0; k <= n - t; ++k) {
        if (k > 0) {
            if (active >= classes) throw UnsupportedPattern("ladder walk left the class list");
            layer[active] += 1;
            if (layer[active] == pattern.class_tops[active] + 1) {
                if (active + 1 < classes) diff[active + 1] = false;
                active += 1;
            }
        }
        LadderTerm term;
        term.level = k + t;
        term.sign = (k % 2 == 0) ? 1 : -1;
        term.theta_begin = k;
        term.theta_end = k + t;
        int start = 0;
        for (int c = classes - 1; c >= 0; --c) {
            LadderFactor f;
            f.cls = c;
            f.layer = layer[c];
            f.differential = layer[c] == 0 && diff[c];
            f.slice_begin = start;
            f.slice_end = start + layer[c];
            start = f.slice_end;
            term.factors.push_back(f);
        }
        std::reverse(term.factors.begin(), term.factors.end());
        if (start != k) throw UnsupportedPattern("factor slices do not tile the tuple");
        out.push_back(std::move(term));
    }
    return out;
}

ClassLayers layers(const DBClass& cls) {
    ClassLayers out;
    out.forms = {cls.conn, cls.trans};
    out.top = cls.wind;
    return out;
}

ClassLayers layers(const PhaseClass& cls) {
    ClassLayers out;
    out.forms = {cls.log};
    out.top = cls.jump;
    return out;
}

Rational ActionBreakdown::ladder_sum() const {
    Rational s(0);
    for (const auto& v : ladder) s += v;
    return s;
}

Rational ActionBreakdown::total() const { return ladder_sum() + tau_term + chi_term; }

Rational ActionBreakdown::total_mod() const { return fractional_part(total()); }

namespace {

void validate_classes(const SimplicialComplex& cx, const LadderPattern& pattern,
                      const std::vector<ClassLayers>& classes) {
    if (pattern.ambient != cx.dim())
        throw DimensionMismatch("ladder pattern does not match the complex dimension");
    if (classes.size() != pattern.class_tops.size())
        throw DimensionMismatch("class count does not match the ladder pattern");
    for (std::size_t c = 0; c < classes.size(); ++c) {
        int top = pattern.class_tops[c];
        if (classes[c].top_degree() != top)
            throw DegreeMismatch("class layer count does not match its top degree");
        for (int s = 0; s <= top; ++s) {
            const FormCochain& f = classes[c].forms[s];
            if (f.degree != s || f.zero.degree != top - s)
                throw DegreeMismatch("class layer carries the wrong degrees");
            if ((int)f.zero.values.size() != (int)cx.count(top - s))
                throw DimensionMismatch("class data sized for another complex");
        }
        if (classes[c].top.degree != top + 1)
            throw DegreeMismatch("integer layer has the wrong Cech degree");
    }
}

VertexList slice(const VertexList& tuple, int begin, int end) {
    return VertexList(tuple.begin() + begin, tuple.begin() + end + 1);
}

}  // namespace

ActionBreakdown action_terms(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const LadderPattern& pattern,
                             const std::vector<ClassLayers>& classes,
                             const IntCochain& theta) {
    (void)cover;
    validate_classes(cx, pattern, classes);
    if (P.dim != cx.dim()) throw DimensionMismatch("decomposition built for another complex");
    if (theta.degree != pattern.background_degree)
        throw DegreeMismatch("background cochain degree does not match the pattern");

    std::vector<LadderTerm> terms = ladder_terms(pattern);
    ActionBreakdown out;
    out.ladder.assign(terms.size(), Rational(0));
    // Form factors repeat across tuples (for example the differential
    // of a class's local form per chart), so they are memoized.
    std::map<std::tuple<int, int, bool, VertexList>, Cochain> memo;
    auto factor_form = [&](const LadderFactor& f, const VertexList& sub) -> const Cochain& {
        auto key = std::make_tuple(f.cls, f.layer, f.differential, sub);
        auto it = memo.find(key);
        if (it == memo.end()) {
            Cochain v = classes[f.cls].forms[f.layer].get(sub);
            if (f.differential) v = coboundary(cx, v);
            it = memo.emplace(std::move(key), std::move(v)).first;
        }
        return it->second;
    };
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
        const LadderTerm& term = terms[ti];
        for (const auto& [tuple, ch] : P.levels[term.level]) {
            Rational th = theta.get(slice(tuple, term.theta_begin, term.theta_end));
            if (th.is_zero()) continue;
            Rational scalar = th * Rational(term.sign);
            Cochain integrand;
            bool have_form = false;
            bool zero = false;
            for (const auto& f : term.factors) {
                const ClassLayers& cl = classes[f.cls];
                VertexList sub = slice(tuple, f.slice_begin, f.slice_end);
                if (f.layer == cl.top_degree() + 1) {
                    Rational v = cl.top.get(sub);
                    if (v.is_zero()) {
                        zero = true;
                        break;
                    }
                    scalar *= v;
                } else {
                    const Cochain& v = factor_form(f, sub);
                    integrand = have_form ? cup(cx, integrand, v) : v;
                    have_form = true;
                }
            }
            if (zero) continue;
            if (!have_form)
                throw UnsupportedPattern("ladder term without a form factor");
            if (integrand.degree != P.dim - term.level)
                throw DegreeMismatch("ladder integrand degree does not match its chain");
            out.ladder[ti] += scalar * pairing(ch, integrand);
        }
    }
    return out;
}

ActionBreakdown action_total(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const LadderPattern& pattern,
                             const std::vector<ClassLayers>& classes,
                             const BackgroundCocycle& bg) {
    ActionBreakdown out = action_terms(cx, cover, P, pattern, classes, bg.theta);
    int t = pattern.background_degree;

    // Differentials of every class's local top forms, cupped in class
    // order; shared by the tau and chi corrections.
    auto curvature_product = [&](int chart) {
        Cochain prod;
        bool have = false;
        for (const auto& cl : classes) {
            Cochain d = coboundary(cx, cl.forms[0].get({chart}));
            prod = have ? cup(cx, prod, d) : std::move(d);
            have = true;
        }
        return prod;
    };

    if (t >= 1)
        for (const auto& [tuple, ch] : P.levels[t - 1]) {
            Cochain integrand = cup(cx, bg.tau.get(tuple), curvature_product(tuple[0]));
            if (integrand.degree != P.dim - (t - 1))
                throw DegreeMismatch("tau correction degree does not match its chain");
            out.tau_term += pairing(ch, integrand);
        }
    if (t >= 2)
        for (const auto& [tuple, ch] : P.levels[t - 2]) {
            Cochain integrand = cup(cx, bg.chi.get(tuple), curvature_product(tuple[0]));
            if (integrand.degree != P.dim - (t - 2))
                throw DegreeMismatch("chi correction degree does not match its chain");
            out.chi_term -= pairing(ch, integrand);
        }
    return out;
}

ActionBreakdown action_terms(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                             const IntCochain& theta) {
    return action_terms(cx, cover, P, three_dim_pattern(), {layers(a), layers(b)}, theta);
}

ActionBreakdown action_total(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                             const BackgroundCocycle& bg) {
    return action_total(cx, cover, P, three_dim_pattern(), {layers(a), layers(b)}, bg);
}

// ---------------------------------------------------------------- gauge

DBClass apply_gauge(const SimplicialComplex& cx, const Cover& cover, const DBClass& cls,
                    const GaugeData& gauge) {
    DBClass out = cls;
    int n = (int)cover.size();
    if (!gauge.local.empty()) {
        if ((int)gauge.local.size() != n)
            throw InvalidGaugeData("local gauge data must cover every chart");
        for (int a = 0; a < n; ++a) {
            if (gauge.local[a].degree != 0 ||
                gauge.local[a].values.size() != cx.count(0))
                throw InvalidGaugeData("local gauge entries must be zero-forms");
            Cochain c = out.conn.get({a});
            c += coboundary(cx, gauge.local[a]);
            out.conn.set({a}, std::move(c));
        }
        for_each_tuple(n, 2, [&](const VertexList& t) {
            if (!cover.in_nerve(t)) return;
            Cochain c = out.trans.get(t);
            c += gauge.local[t[1]];
            c -= gauge.local[t[0]];
            out.trans.set(t, std::move(c));
        });
    }
    if (!gauge.large.entries.empty()) {
        if (gauge.large.degree != 1)
            throw InvalidGaugeData("large gauge data must be a Cech one-cochain");
        for (const auto& [tuple, value] : gauge.large.entries)
            if (!value.is_integer())
                throw InvalidGaugeData("large gauge shift is not integral");
        for (const auto& [tuple, value] : gauge.large.entries) {
            Cochain c = out.trans.get(tuple);
            for (auto& v : c.values) v += value;
            out.trans.set(tuple, std::move(c));
        }
        IntCochain dz = cech_delta(cover, gauge.large);
        for (const auto& [tuple, value] : dz.entries) out.wind.add(tuple, value);
    }
    return out;
}

PhaseClass apply_shift(const SimplicialComplex& cx, const PhaseClass& cls,
                       const std::vector<Rational>& shifts) {
    PhaseClass out = cls;
    if (shifts.empty()) return out;
    for (const auto& s : shifts)
        if (!s.is_integer()) throw InvalidGaugeData("phase shift is not integral");
    for (std::size_t a = 0; a < shifts.size(); ++a) {
        Cochain c = out.log.get({(int)a});
        for (auto& v : c.values) v += shifts[a];
        out.log.set({(int)a}, std::move(c));
        (void)cx;
    }
    for (std::size_t a = 0; a < shifts.size(); ++a)
        for (std::size_t b = a + 1; b < shifts.size(); ++b) {
            Rational d = shifts[b] - shifts[a];
            if (!d.is_zero()) out.jump.add({(int)a, (int)b}, d);
        }
    return out;
}

Rational gauge_variation(const SimplicialComplex& cx, const Cover& cover,
                         const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                         const BackgroundCocycle& bg, const GaugeData& gauge_a,
                         const std::vector<Rational>& shifts_b) {
    ActionBreakdown before = action_total(cx, cover, P, a, b, bg);
    DBClass a2 = apply_gauge(cx, cover, a, gauge_a);
    PhaseClass b2 = apply_shift(cx, b, shifts_b);
    ActionBreakdown after = action_total(cx, cover, P, a2, b2, bg);
    return after.total() - before.total();
}

// ---------------------------------------------------------------- cup degrees

CupDegree cup_degree(int q, int l, int t, int j) {
    CupDegree out;
    out.weight = l + j + 1;
    if ((q == l + 1 && t <= j + 1) || (t == j + 1 && q <= l + 1)) {
        out.case_id = 1;
        out.degree = q + t;
    } else if ((q >= l + 2 && t <= j + 1) || (t >= j + 2 && q <= l + 1)) {
        out.case_id = 2;
        out.degree = q + t - 1;
    } else if (q >= l + 2 && t >= j + 2) {
        out.case_id = 3;
        out.degree = q + t;
        out.integral = true;
    } else {
        out.case_id = 0;
        out.degree = 0;
        out.weight = 0;
        out.zero = true;
    }
    return out;
}

Rational fractional_part(const Rational& r) {
    BigInt num = r.numerator();
    BigInt den = r.denominator();
    BigInt q = num / den;
    BigInt rem = num - q * den;
    if (rem < 0) rem += den;
    return Rational(rem, den);
}

}  // namespace g2gauge
