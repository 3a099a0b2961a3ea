#include "g2gauge/poly.hpp"

#include <algorithm>

#include "g2gauge/errors.hpp"

namespace g2gauge {

std::shared_ptr<const PolyRing> PolyRing::create(
    const std::vector<std::string>& parameters) {
    std::vector<std::string> names;
    names.reserve(kCoordinates + parameters.size());
    for (int i = 1; i <= static_cast<int>(kCoordinates); ++i)
        names.push_back("x" + std::to_string(i));
    for (const auto& p : parameters) {
        if (p.empty()) throw Error("empty parameter name");
        if (std::find(names.begin(), names.end(), p) != names.end())
            throw Error("duplicate symbol '" + p + "'");
        if (p == "e") throw Error("'e' is reserved for frame covectors");
        names.push_back(p);
    }
    return std::shared_ptr<const PolyRing>(new PolyRing(std::move(names)));
}

int PolyRing::find(std::string_view name) const {
    for (std::size_t k = 0; k < names_.size(); ++k)
        if (names_[k] == name) return static_cast<int>(k);
    return -1;
}

int monomial_total_degree(const Exponents& e) {
    int d = 0;
    for (int k : e) d += k;
    return d;
}

int monomial_cmp(const Exponents& a, const Exponents& b) {
    int da = monomial_total_degree(a), db = monomial_total_degree(b);
    if (da != db) return da < db ? -1 : 1;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = n; k-- > 0;) {
        int av = k < a.size() ? a[k] : 0;
        int bv = k < b.size() ? b[k] : 0;
        if (av != bv) return av < bv ? -1 : 1;
    }
    return 0;
}

Poly Poly::zero(RingPtr ring) {
    Poly p;
    p.ring_ = std::move(ring);
    return p;
}

Poly Poly::constant(RingPtr ring, Rational c) {
    Poly p;
    p.ring_ = std::move(ring);
    if (!c.is_zero())
        p.terms_.emplace(Exponents(p.ring_ ? p.ring_->var_count() : 0, 0), std::move(c));
    return p;
}

Poly Poly::var(RingPtr ring, std::size_t idx, int power) {
    if (!ring || idx >= ring->var_count()) throw Error("variable index out of range");
    if (power < 0) throw Error("negative exponent");
    if (power == 0) return constant(std::move(ring), 1);
    Poly p;
    p.ring_ = std::move(ring);
    Exponents e(p.ring_->var_count(), 0);
    e[idx] = power;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

Poly Poly::var(RingPtr ring, std::string_view name, int power) {
    if (!ring) throw Error("variable requires a ring");
    int idx = ring->find(name);
    if (idx < 0) throw UnknownSymbol("unknown symbol '" + std::string(name) + "'");
    return var(std::move(ring), static_cast<std::size_t>(idx), power);
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && monomial_total_degree(terms_.begin()->first) == 0;
}

Rational Poly::constant_value() const {
    for (const auto& [e, c] : terms_)
        if (monomial_total_degree(e) == 0) return c;
    return Rational(0);
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    return monomial_total_degree(terms_.begin()->first);
}

bool Poly::uses_var(std::size_t idx) const {
    for (const auto& [e, c] : terms_)
        if (idx < e.size() && e[idx] > 0) return true;
    return false;
}

Exponents Poly::resized(const Exponents& e, std::size_t n) {
    Exponents out(n, 0);
    for (std::size_t k = 0; k < e.size() && k < n; ++k) out[k] = e[k];
    return out;
}

void Poly::merge_ring(const RingPtr& other) {
    if (!other) return;
    if (!ring_) {
        ring_ = other;
        if (!terms_.empty()) {
            TermMap widened;
            for (const auto& [e, c] : terms_)
                widened.emplace(resized(e, ring_->var_count()), c);
            terms_ = std::move(widened);
        }
        return;
    }
    if (ring_ != other) throw Error("mixed polynomial rings");
}

void Poly::add_term(Exponents e, Rational c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(std::move(e), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    merge_ring(o.ring_);
    std::size_t n = ring_ ? ring_->var_count() : 0;
    for (const auto& [e, c] : o.terms_) add_term(resized(e, n), c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    merge_ring(o.ring_);
    std::size_t n = ring_ ? ring_->var_count() : 0;
    for (const auto& [e, c] : o.terms_) add_term(resized(e, n), -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    out.ring_ = a.ring_ ? a.ring_ : b.ring_;
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_) throw Error("mixed polynomial rings");
    std::size_t n = out.ring_ ? out.ring_->var_count() : 0;
    for (const auto& [ea, ca] : a.terms_) {
        Exponents wa = Poly::resized(ea, n);
        for (const auto& [eb, cb] : b.terms_) {
            Exponents e = wa;
            for (std::size_t k = 0; k < eb.size(); ++k) e[k] += eb[k];
            out.add_term(std::move(e), ca * cb);
        }
    }
    return out;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Rational Poly::eval(const std::map<std::string, Rational>& assignment) const {
    Rational total(0);
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            auto it = assignment.find(ring_->name(k));
            if (it == assignment.end())
                throw MissingAssignment("no value for '" + ring_->name(k) + "'");
            Rational pow(1);
            for (int r = 0; r < e[k]; ++r) pow *= it->second;
            term *= pow;
        }
        total += term;
    }
    return total;
}

Poly Poly::substitute(const std::map<std::string, Rational>& assignment) const {
    Poly out = Poly::zero(ring_);
    for (const auto& [e, c] : terms_) {
        Rational scale = c;
        Exponents rest(e.size(), 0);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            auto it = assignment.find(ring_->name(k));
            if (it == assignment.end()) {
                rest[k] = e[k];
                continue;
            }
            for (int r = 0; r < e[k]; ++r) scale *= it->second;
        }
        out.add_term(std::move(rest), std::move(scale));
    }
    return out;
}

Poly Poly::partial(std::size_t var_idx) const {
    if (ring_ && !ring_->is_coordinate(var_idx))
        throw NotACoordinate("cannot differentiate by parameter '" +
                             ring_->name(var_idx) + "'");
    Poly out = Poly::zero(ring_);
    for (const auto& [e, c] : terms_) {
        if (var_idx >= e.size() || e[var_idx] == 0) continue;
        Exponents d = e;
        d[var_idx] -= 1;
        out.add_term(std::move(d), c * Rational(e[var_idx]));
    }
    return out;
}

Poly Poly::partial(std::string_view var_name) const {
    if (!ring_) return Poly();
    int idx = ring_->find(var_name);
    if (idx < 0) throw UnknownSymbol("unknown symbol '" + std::string(var_name) + "'");
    return partial(static_cast<std::size_t>(idx));
}

const Rational& Poly::leading_coefficient() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.begin()->second;
}

const Exponents& Poly::leading_monomial() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.begin()->first;
}

Poly Poly::normalized() const {
    if (terms_.empty()) return *this;
    Poly out = *this;
    Rational lead = leading_coefficient();
    for (auto& [e, c] : out.terms_) c /= lead;
    return out;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    // Parameters first, then coordinates; reads like the usual closed forms.
    std::vector<std::size_t> display;
    if (ring_) {
        for (std::size_t k = PolyRing::kCoordinates; k < ring_->var_count(); ++k)
            display.push_back(k);
        for (std::size_t k = 0; k < PolyRing::kCoordinates; ++k) display.push_back(k);
    }
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = abs(c);
        if (first) {
            if (c.sign() < 0) out += "-";
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        std::string factors;
        for (std::size_t k : display) {
            int p = k < e.size() ? e[k] : 0;
            if (p == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += ring_->name(k);
            if (p > 1) factors += "^" + std::to_string(p);
        }
        if (factors.empty()) {
            out += mag.str();
        } else if (mag == Rational(1)) {
            out += factors;
        } else {
            out += mag.str() + "*" + factors;
        }
    }
    return out;
}

Poly Poly::monomial(RingPtr ring, Exponents e, Rational c) {
    Poly out = Poly::zero(std::move(ring));
    std::size_t n = out.ring_ ? out.ring_->var_count() : e.size();
    if (e.size() > n) throw Error("monomial exponents exceed ring variables");
    out.add_term(resized(e, n), std::move(c));
    return out;
}

bool monomial_divides(const Exponents& a, const Exponents& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int bi = i < b.size() ? b[i] : 0;
        if (a[i] > bi) return false;
    }
    return true;
}

namespace {

Exponents exp_sub(const Exponents& b, const Exponents& a) {
    Exponents out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i];
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= a[i];
    return out;
}

Exponents exp_lcm(const Exponents& a, const Exponents& b) {
    Exponents out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int ai = i < a.size() ? a[i] : 0;
        int bi = i < b.size() ? b[i] : 0;
        out[i] = std::max(ai, bi);
    }
    return out;
}

}  // namespace

Poly normal_form(Poly p, const std::vector<Poly>& basis) {
    Poly remainder;
    while (!p.is_zero()) {
        const Exponents& lm = p.leading_monomial();
        const Rational& lc = p.leading_coefficient();
        bool reduced = false;
        for (const Poly& g : basis) {
            if (g.is_zero()) continue;
            if (!monomial_divides(g.leading_monomial(), lm)) continue;
            Poly factor = Poly::monomial(p.ring() ? p.ring() : g.ring(),
                                         exp_sub(lm, g.leading_monomial()),
                                         lc / g.leading_coefficient());
            p -= factor * g;
            reduced = true;
            break;
        }
        if (!reduced) {
            Poly head = Poly::monomial(p.ring(), lm, lc);
            remainder += head;
            p -= head;
        }
    }
    return remainder;
}

std::vector<Poly> groebner_basis(std::vector<Poly> gens) {
    std::vector<Poly> basis;
    for (Poly& g : gens)
        if (!g.is_zero()) basis.push_back(g.normalized());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.push_back({i, j});
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        const Exponents& li = basis[i].leading_monomial();
        const Exponents& lj = basis[j].leading_monomial();
        Exponents l = exp_lcm(li, lj);
        RingPtr ring = basis[i].ring() ? basis[i].ring() : basis[j].ring();
        Poly s = Poly::monomial(ring, exp_sub(l, li), Rational(1)) * basis[i] -
                 Poly::monomial(ring, exp_sub(l, lj), Rational(1)) * basis[j];
        Poly r = normal_form(std::move(s), basis);
        if (r.is_zero()) continue;
        basis.push_back(r.normalized());
        for (std::size_t k = 0; k + 1 < basis.size(); ++k)
            pairs.push_back({k, basis.size() - 1});
    }
    // minimal: no leading monomial divides another
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < basis.size() && keep; ++j) {
            if (i == j) continue;
            if (!monomial_divides(basis[j].leading_monomial(), basis[i].leading_monomial()))
                continue;
            if (basis[j].leading_monomial() == basis[i].leading_monomial() && j > i)
                continue;
            keep = false;
        }
        if (keep) minimal.push_back(basis[i]);
    }
    // reduced: every member in normal form against the others
    std::vector<Poly> out;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> rest;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) rest.push_back(minimal[j]);
        Poly r = normal_form(minimal[i], rest);
        if (!r.is_zero()) out.push_back(r.normalized());
    }
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        return monomial_cmp(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return out;
}

}  // namespace g2gauge
