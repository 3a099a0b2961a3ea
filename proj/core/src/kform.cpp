#include "g2gauge/kform.hpp"

#include <bit>

#include "g2gauge/errors.hpp"

namespace g2gauge {

IndexTuple IndexTuple::of(std::initializer_list<int> indices) {
    return of(std::vector<int>(indices));
}

IndexTuple IndexTuple::of(const std::vector<int>& indices) {
    IndexTuple t;
    for (int i : indices) {
        if (i < 1 || i > 7) throw Error("frame index out of range 1..7");
        std::uint8_t bit = std::uint8_t(1u << (i - 1));
        if (t.mask & bit) throw Error("repeated frame index");
        t.mask |= bit;
    }
    return t;
}

int IndexTuple::degree() const { return std::popcount(mask); }

std::vector<int> IndexTuple::indices() const {
    std::vector<int> out;
    for (int i = 1; i <= 7; ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

int wedge_sign(IndexTuple a, IndexTuple b) {
    if (a.mask & b.mask) return 0;
    // Count transpositions needed to merge: for each index of b, the
    // indices of a above it must move past it.
    int swaps = 0;
    for (int i = 1; i <= 7; ++i) {
        if (!b.contains(i)) continue;
        std::uint8_t above = std::uint8_t(a.mask >> i);
        swaps += std::popcount(above);
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

IndexTuple wedge_union(IndexTuple a, IndexTuple b) {
    return IndexTuple(std::uint8_t(a.mask | b.mask));
}

int hodge_sign(IndexTuple t) {
    int s = wedge_sign(t, t.complement());
    return s == 0 ? 1 : s;  // complement never overlaps
}

Orientation::Orientation(int s) : sign(s) {
    if (s != 1 && s != -1) throw Error("orientation sign must be +1 or -1");
}

KForm::KForm(int degree, RingPtr ring) : degree_(degree), ring_(std::move(ring)) {
    if (degree < 0 || degree > 7) throw Error("form degree out of range 0..7");
}

KForm KForm::from_poly(Poly p) {
    KForm w(0, p.ring());
    if (!p.is_zero()) w.terms_.emplace(IndexTuple(), std::move(p));
    return w;
}

KForm KForm::basis(std::initializer_list<int> indices, RingPtr ring) {
    IndexTuple t = IndexTuple::of(indices);
    KForm w(t.degree(), ring);
    w.terms_.emplace(t, Poly::constant(std::move(ring), 1));
    return w;
}

KForm KForm::monomial(Poly coeff, IndexTuple t) {
    KForm w(t.degree(), coeff.ring());
    if (!coeff.is_zero()) w.terms_.emplace(t, std::move(coeff));
    return w;
}

Poly KForm::coefficient(IndexTuple t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? Poly::zero(ring_) : it->second;
}

void KForm::add_term(IndexTuple t, Poly c) {
    if (c.is_zero()) return;
    if (!ring_ && c.ring()) ring_ = c.ring();
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

KForm KForm::operator-() const {
    KForm out = *this;
    for (auto& [t, c] : out.terms_) c = -c;
    return out;
}

KForm& KForm::operator+=(const KForm& o) {
    if (o.is_zero()) return *this;
    if (is_zero() && degree_ != o.degree_) degree_ = o.degree_;
    if (degree_ != o.degree_) throw DegreeMismatch("adding forms of different degree");
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

KForm& KForm::operator-=(const KForm& o) {
    if (o.is_zero()) return *this;
    if (is_zero() && degree_ != o.degree_) degree_ = o.degree_;
    if (degree_ != o.degree_) throw DegreeMismatch("subtracting forms of different degree");
    for (const auto& [t, c] : o.terms_) add_term(t, -c);
    return *this;
}

KForm& KForm::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, v] : terms_) v *= c;
    return *this;
}

KForm KForm::scaled(const Poly& p) const {
    KForm out(degree_, ring_ ? ring_ : p.ring());
    for (const auto& [t, c] : terms_) out.add_term(t, c * p);
    return out;
}

KForm KForm::substitute(const std::map<std::string, Rational>& assignment) const {
    KForm out(degree_, ring_);
    for (const auto& [t, c] : terms_) out.add_term(t, c.substitute(assignment));
    return out;
}

KForm wedge(const KForm& a, const KForm& b) {
    int deg = a.degree_ + b.degree_;
    if (deg > 7) deg = 7;
    KForm out(deg, a.ring_ ? a.ring_ : b.ring_);
    if (a.degree_ + b.degree_ > 7) return out;
    for (const auto& [ta, ca] : a.terms_) {
        for (const auto& [tb, cb] : b.terms_) {
            int s = wedge_sign(ta, tb);
            if (s == 0) continue;
            Poly c = ca * cb;
            if (s < 0) c *= Rational(-1);
            out.add_term(wedge_union(ta, tb), std::move(c));
        }
    }
    return out;
}

KForm ext_d(const KForm& w) {
    if (w.degree_ == 7) return KForm(7, w.ring_);
    KForm out(w.degree_ + 1, w.ring_);
    for (const auto& [t, c] : w.terms_) {
        for (int i = 1; i <= 7; ++i) {
            if (t.contains(i)) continue;
            Poly dc = c.partial(std::size_t(i - 1));
            if (dc.is_zero()) continue;
            int s = wedge_sign(IndexTuple::of({i}), t);
            if (s < 0) dc *= Rational(-1);
            out.add_term(wedge_union(IndexTuple::of({i}), t), std::move(dc));
        }
    }
    return out;
}

KForm hodge(const KForm& w, Orientation orient) {
    KForm out(7 - w.degree_, w.ring_);
    for (const auto& [t, c] : w.terms_) {
        Poly v = c;
        if (hodge_sign(t) * orient.sign < 0) v *= Rational(-1);
        out.add_term(t.complement(), std::move(v));
    }
    return out;
}

KForm contract(int i, const KForm& w) {
    if (i < 1 || i > 7) throw Error("frame index out of range 1..7");
    if (w.degree_ == 0) return KForm(0, w.ring_);
    KForm out(w.degree_ - 1, w.ring_);
    for (const auto& [t, c] : w.terms_) {
        if (!t.contains(i)) continue;
        int below = std::popcount(std::uint8_t(t.mask & ((1u << (i - 1)) - 1)));
        Poly v = c;
        if (below % 2 == 1) v *= Rational(-1);
        out.add_term(IndexTuple(std::uint8_t(t.mask & ~(1u << (i - 1)))), std::move(v));
    }
    return out;
}

Poly inner(const KForm& a, const KForm& b, Orientation orient) {
    if (a.degree() != b.degree())
        throw DegreeMismatch("inner product needs equal degrees");
    KForm vol = wedge(a, hodge(b, orient));
    Poly c = vol.coefficient(IndexTuple::full());
    if (orient.sign < 0) c *= Rational(-1);
    return c;
}

std::string KForm::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        bool negated = false;
        std::string coeff;
        if (t.degree() == 0) {
            coeff = c.str();
        } else if (c.is_constant()) {
            Rational v = c.constant_value();
            negated = v.sign() < 0;
            Rational mag = abs(v);
            if (!(mag == Rational(1))) coeff = mag.str() + "*";
        } else if (c.terms().size() == 1) {
            Poly p = c;
            if (c.leading_coefficient().sign() < 0) {
                negated = true;
                p = -p;
            }
            coeff = p.str() + "*";
        } else {
            coeff = "(" + c.str() + ")*";
        }
        if (first) {
            if (negated) out += "-";
            first = false;
        } else {
            out += negated ? " - " : " + ";
        }
        out += coeff;
        if (t.degree() > 0) {
            out += "e[";
            bool comma = false;
            for (int i : t.indices()) {
                if (comma) out += ",";
                out += std::to_string(i);
                comma = true;
            }
            out += "]";
        }
    }
    return out;
}

}  // namespace g2gauge
