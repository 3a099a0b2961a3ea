#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "g2gauge/rational.hpp"

namespace g2gauge {

// Fixed variable universe for one computation: coordinates x1..x7 first,
// then declared parameter symbols in declaration order.
class PolyRing {
public:
    static constexpr std::size_t kCoordinates = 7;

    static std::shared_ptr<const PolyRing> create(
        const std::vector<std::string>& parameters = {});

    std::size_t var_count() const { return names_.size(); }
    const std::vector<std::string>& var_names() const { return names_; }
    const std::string& name(std::size_t idx) const { return names_[idx]; }
    // -1 when the symbol is not declared in this ring.
    int find(std::string_view name) const;
    bool is_coordinate(std::size_t idx) const { return idx < kCoordinates; }
    std::size_t parameter_count() const { return names_.size() - kCoordinates; }

private:
    explicit PolyRing(std::vector<std::string> names) : names_(std::move(names)) {}
    std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const PolyRing>;
using Exponents = std::vector<int>;

int monomial_total_degree(const Exponents& e);

// Graded order; ties broken by the most recently declared variable first.
// Returns negative/zero/positive like a three-way comparison.
int monomial_cmp(const Exponents& a, const Exponents& b);

// Leading term first.
struct MonomialOrderDesc {
    bool operator()(const Exponents& a, const Exponents& b) const {
        return monomial_cmp(a, b) > 0;
    }
};

class Poly {
public:
    using TermMap = std::map<Exponents, Rational, MonomialOrderDesc>;

    Poly() = default;  // zero with no ring; compatible with any ring
    static Poly zero(RingPtr ring);
    static Poly constant(RingPtr ring, Rational c);
    static Poly constant(Rational c) { return constant(nullptr, std::move(c)); }
    static Poly var(RingPtr ring, std::size_t idx, int power = 1);
    static Poly var(RingPtr ring, std::string_view name, int power = 1);
    static Poly monomial(RingPtr ring, Exponents e, Rational c);

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term (zero if absent).
    Rational constant_value() const;
    int total_degree() const;  // -1 for the zero polynomial
    bool uses_var(std::size_t idx) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& c);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Rational eval(const std::map<std::string, Rational>& assignment) const;
    // Substitutes a subset of the variables, returns a polynomial in the rest.
    Poly substitute(const std::map<std::string, Rational>& assignment) const;
    Poly partial(std::size_t var_idx) const;
    Poly partial(std::string_view var_name) const;

    // Divides by the leading coefficient so the leading term is monic.
    Poly normalized() const;
    const Rational& leading_coefficient() const;
    const Exponents& leading_monomial() const;

    std::string str() const;

private:
    void add_term(Exponents e, Rational c);
    void merge_ring(const RingPtr& other);
    static Exponents resized(const Exponents& e, std::size_t n);

    RingPtr ring_;
    TermMap terms_;
};

// Divisibility of monomials; shorter exponent vectors pad with zeros.
bool monomial_divides(const Exponents& a, const Exponents& b);

// Remainder of p on division by the basis under the graded order.
Poly normal_form(Poly p, const std::vector<Poly>& basis);

// Reduced monic basis of the ideal generated by gens; a canonical
// generating set for equality and membership tests.
std::vector<Poly> groebner_basis(std::vector<Poly> gens);

}  // namespace g2gauge
