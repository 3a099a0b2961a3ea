#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

#include "g2gauge/poly.hpp"

namespace g2gauge {

// Strictly increasing index set in 1..7, packed as a bit mask.
struct IndexTuple {
    std::uint8_t mask = 0;

    IndexTuple() = default;
    explicit IndexTuple(std::uint8_t m) : mask(m) {}
    static IndexTuple of(std::initializer_list<int> indices);
    static IndexTuple of(const std::vector<int>& indices);
    static IndexTuple full() { return IndexTuple(0x7f); }

    int degree() const;
    bool contains(int i) const { return mask & (1u << (i - 1)); }
    std::vector<int> indices() const;
    IndexTuple complement() const { return IndexTuple(std::uint8_t(~mask & 0x7f)); }

    friend auto operator<=>(const IndexTuple&, const IndexTuple&) = default;
};

// 0 when the tuples overlap, otherwise the sign of merging a before b
// into increasing order.
int wedge_sign(IndexTuple a, IndexTuple b);
IndexTuple wedge_union(IndexTuple a, IndexTuple b);
// Sign of the permutation (t, complement of t) relative to 1..7.
int hodge_sign(IndexTuple t);

struct Orientation {
    int sign = +1;
    Orientation() = default;
    explicit Orientation(int s);
};

class KForm {
public:
    using TermMap = std::map<IndexTuple, Poly>;

    KForm() = default;  // zero 0-form
    explicit KForm(int degree, RingPtr ring = nullptr);
    static KForm from_poly(Poly p);
    static KForm basis(std::initializer_list<int> indices, RingPtr ring = nullptr);
    static KForm monomial(Poly coeff, IndexTuple t);

    int degree() const { return degree_; }
    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Poly coefficient(IndexTuple t) const;

    KForm operator-() const;
    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    KForm& operator*=(const Rational& c);
    friend KForm operator*(KForm a, const Rational& c) { return a *= c; }
    friend KForm operator*(const Rational& c, KForm a) { return a *= c; }
    friend KForm operator*(const Poly& p, const KForm& a) { return a.scaled(p); }
    KForm scaled(const Poly& p) const;
    friend bool operator==(const KForm& a, const KForm& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

    KForm substitute(const std::map<std::string, Rational>& assignment) const;

    std::string str() const;

    friend KForm wedge(const KForm& a, const KForm& b);
    friend KForm ext_d(const KForm& w);
    friend KForm hodge(const KForm& w, Orientation orient);
    friend KForm contract(int i, const KForm& w);

private:
    void add_term(IndexTuple t, Poly c);

    int degree_ = 0;
    RingPtr ring_;
    TermMap terms_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm ext_d(const KForm& w);
KForm hodge(const KForm& w, Orientation orient);
KForm contract(int i, const KForm& w);
// Coefficient of the volume form in a wedge star(b); DegreeMismatch unless
// the degrees agree.  Positive definite and independent of the orientation.
Poly inner(const KForm& a, const KForm& b, Orientation orient);

}  // namespace g2gauge
