#pragma once
// Discrete Cech-Deligne layer: exact chains and cochains on oriented
// simplicial complexes, covers with a subordinate vertex-ownership
// assignment, Cech cochains valued in integers or simplicial forms,
// Deligne classes for U(1) connections, the polyhedral decomposition
// subordinate to a cover, and the ladder evaluation of the cup-product
// action with its background corrections.
//
// Forms are simplicial cochains, the wedge is the simplicial cup
// product, and d is the coboundary.  All lattice weights are divided
// out, so "integral" always means an element of Z and the action is
// well defined modulo 1.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "g2gauge/errors.hpp"
#include "g2gauge/rational.hpp"

namespace g2gauge {

using VertexList = std::vector<int>;

// Chains are sparse: simplex index -> coefficient, zeros erased.
using Chain = std::map<int, Rational>;

// Finite simplicial complex, closed under faces.  Simplices are stored
// as strictly increasing vertex lists; top simplices carry orientation
// coefficients whose sum is the fundamental chain.
class SimplicialComplex {
public:
    explicit SimplicialComplex(int dim);

    int dim() const { return dim_; }
    std::size_t count(int d) const { return simplices_[d].size(); }
    const VertexList& vertices(int d, int i) const { return simplices_[d][i]; }
    int vertex_count() const { return (int)simplices_[0].size(); }

    // Adds the simplex and all of its faces; ignores duplicates.
    void add_closed(const VertexList& verts);
    // Index of a simplex by sorted vertex list, -1 if absent.
    int find(int d, const VertexList& verts) const;

    void set_orientation(const VertexList& top, const Rational& coeff);
    const Rational& orientation(int top_index) const { return orientation_[top_index]; }
    Chain fundamental_chain() const;

private:
    int dim_;
    std::vector<std::vector<VertexList>> simplices_;
    std::vector<std::map<VertexList, int>> index_;
    std::vector<Rational> orientation_;
};

// Dense cochain: one value per simplex of the given degree.
struct Cochain {
    int degree = 0;
    std::vector<Rational> values;

    bool is_zero() const;
    Cochain operator-() const;
    Cochain& operator+=(const Cochain& o);
    Cochain& operator-=(const Cochain& o);
    Cochain& operator*=(const Rational& s);
    friend bool operator==(const Cochain&, const Cochain&) = default;
};

Cochain zero_cochain(const SimplicialComplex& cx, int degree);
Chain boundary(const SimplicialComplex& cx, int d, const Chain& c);
Cochain coboundary(const SimplicialComplex& cx, const Cochain& c);
// Alexander-Whitney cup product: front face times back face.
Cochain cup(const SimplicialComplex& cx, const Cochain& a, const Cochain& b);
// Evaluation of a cochain on a chain of the same degree.
Rational pairing(const Chain& chain, const Cochain& c);

// Open cover modeled by vertex subsets, with an ownership map that
// assigns every vertex a chart containing the vertex's whole star.
struct Cover {
    std::vector<std::vector<int>> charts;  // sorted vertex ids
    std::vector<int> owner;                // vertex -> chart index

    std::size_t size() const { return charts.size(); }
    bool chart_contains(int chart, int v) const;
    // True when the charts of the tuple share at least one vertex.
    bool in_nerve(const VertexList& tuple) const;
};

// Throws ConstructionFailure unless the charts cover every vertex and
// the owner of each vertex satisfies the star condition: every simplex
// through v lies inside the owner's chart.
void validate_cover(const SimplicialComplex& cx, const Cover& cover);

namespace detail {
inline bool value_is_zero(const Rational& v) { return v.is_zero(); }
inline bool value_is_zero(const Cochain& v) { return v.is_zero(); }
}  // namespace detail

// Totally antisymmetric Cech cochain with values added per strictly
// increasing chart tuple.  Access on arbitrary tuples sorts with a
// sign; repeated indices give zero.
template <class Value>
struct CechCochain {
    int degree = 0;
    Value zero{};
    std::map<VertexList, Value> entries;

    Value get(VertexList tuple) const {
        int sgn = 1;
        for (std::size_t i = 0; i < tuple.size(); ++i)
            for (std::size_t j = i + 1; j < tuple.size(); ++j) {
                if (tuple[i] == tuple[j]) return zero;
                if (tuple[i] > tuple[j]) {
                    std::swap(tuple[i], tuple[j]);
                    sgn = -sgn;
                }
            }
        auto it = entries.find(tuple);
        if (it == entries.end()) return zero;
        return sgn < 0 ? -it->second : it->second;
    }

    void set(VertexList tuple, Value value) {
        int sgn = 1;
        for (std::size_t i = 0; i < tuple.size(); ++i)
            for (std::size_t j = i + 1; j < tuple.size(); ++j) {
                if (tuple[i] == tuple[j])
                    throw Error("repeated chart index in Cech tuple");
                if (tuple[i] > tuple[j]) {
                    std::swap(tuple[i], tuple[j]);
                    sgn = -sgn;
                }
            }
        if (sgn < 0) value = -value;
        if (detail::value_is_zero(value))
            entries.erase(tuple);
        else
            entries[tuple] = std::move(value);
    }

    void add(VertexList tuple, const Value& value) {
        Value cur = get(tuple);
        cur += value;
        set(std::move(tuple), std::move(cur));
    }
};

using IntCochain = CechCochain<Rational>;
using FormCochain = CechCochain<Cochain>;

FormCochain make_form_cochain(const SimplicialComplex& cx, int cech_degree, int form_degree);

// Visits every strictly increasing tuple of the given length drawn
// from {0, ..., n-1}.
void for_each_tuple(int n, int length, const std::function<void(const VertexList&)>& fn);

// Cech coboundary (delta c)(a_0..a_{q+1}) = sum_k (-1)^k c(omit a_k),
// computed on the nerve of the cover.
template <class Value>
CechCochain<Value> cech_delta(const Cover& cover, const CechCochain<Value>& c) {
    CechCochain<Value> out;
    out.degree = c.degree + 1;
    out.zero = c.zero;
    for_each_tuple((int)cover.size(), c.degree + 2, [&](const VertexList& t) {
        if (!cover.in_nerve(t)) return;
        Value acc = c.zero;
        for (std::size_t k = 0; k < t.size(); ++k) {
            VertexList face = t;
            face.erase(face.begin() + k);
            Value v = c.get(face);
            if (k % 2 == 0)
                acc += v;
            else
                acc -= v;
        }
        if (!detail::value_is_zero(acc)) out.entries[t] = std::move(acc);
    });
    return out;
}

// Degree-two Deligne class: local connection one-forms, transition
// logarithms, and the integer winding two-cocycle.  Transition
// functions are recovered as the exponentials of the negated logs.
struct DBClass {
    FormCochain conn;   // Cech degree 0, one-forms
    FormCochain trans;  // Cech degree 1, zero-forms
    IntCochain wind;    // Cech degree 2, integers
};

// Degree-one class: local logarithms of a circle-valued function with
// integer jumps across overlaps.
struct PhaseClass {
    FormCochain log;   // Cech degree 0, zero-forms
    IntCochain jump;   // Cech degree 1, integers
};

struct ResidualEntry {
    VertexList tuple;
    std::string condition;
    Rational magnitude;  // sum of absolute residual values on the overlap
};

struct CocycleReport {
    // Exact gluing residuals, listed by the condition they violate.
    std::vector<ResidualEntry> connection;   // difference of local data vs transition
    std::vector<ResidualEntry> transition;   // delta(trans) vs winding, as constants
    std::vector<ResidualEntry> integrality;  // non-integer top-layer entries
    std::vector<ResidualEntry> cocycle;      // delta of the top layer nonzero
    // Multiplicative-level residuals: the exponentiated transitions
    // fail their cocycle law, i.e. delta(trans) is not pointwise
    // integral on the overlap.
    std::vector<ResidualEntry> lattice;

    bool pass() const;
    // True when the class is valid up to integer shifts of the logs.
    bool pass_lattice() const;
};

CocycleReport db_cocycle_check(const SimplicialComplex& cx, const Cover& cover,
                               const DBClass& cls);
CocycleReport phase_cocycle_check(const SimplicialComplex& cx, const Cover& cover,
                                  const PhaseClass& cls);

// Background data: a closed integer cochain theta of Cech degree t,
// the partition weights xi, and the derived smearings tau (degree t-1,
// zero-forms) and chi (degree t-2, one-forms; absent when t < 2).
struct BackgroundCocycle {
    IntCochain theta;
    FormCochain tau;
    FormCochain chi;
    std::vector<Cochain> xi;  // one zero-form per chart
};

// Builds the partition from the ownership map (xi_a = indicator of the
// vertices owned by a) and derives tau and chi from theta.
BackgroundCocycle background_from_theta(const SimplicialComplex& cx, const Cover& cover,
                                        const IntCochain& theta);

struct BackgroundReport {
    std::vector<ResidualEntry> integrality;  // theta entries not integers
    std::vector<ResidualEntry> cocycle;      // delta theta nonzero
    std::vector<ResidualEntry> partition;    // xi not a partition of unity / not subordinate
    std::vector<ResidualEntry> smearing;     // tau vs sum_e theta(..e) xi_e
    std::vector<ResidualEntry> descent;      // chi vs -sum_c cup(xi_c, d tau(..c))
    bool pass() const;
};

BackgroundReport background_check(const SimplicialComplex& cx, const Cover& cover,
                                  const BackgroundCocycle& bg);

// Chains assigned to ordered chart tuples; level k holds the pieces of
// codimension k, carried by tuples of length k+1 (repeats allowed).
// The boundary of a level-k chain telescopes into the alternating sum
// of single-index insertions at level k+1.
struct PolyDecomp {
    int dim = 0;
    std::vector<std::map<VertexList, Chain>> levels;

    Chain chain(int level, const VertexList& tuple) const;
};

PolyDecomp polyhedral_decomposition(const SimplicialComplex& cx, const Cover& cover);

struct DecompReport {
    bool boundary_squared_zero = false;
    bool insertion_identity = false;
    bool chart_support = false;
    bool top_sum_is_fundamental = false;
    bool pass() const {
        return boundary_squared_zero && insertion_identity && chart_support &&
               top_sum_is_fundamental;
    }
};

DecompReport decomposition_check(const SimplicialComplex& cx, const Cover& cover,
                                 const PolyDecomp& P);

// Ladder shape: ambient dimension, Cech degree of theta, and the top
// local form degree of each class in evaluation order.  Consistency
// requires ambient = t + sum(tops + 1) - 1.
struct LadderPattern {
    int ambient = 3;
    int background_degree = 1;
    std::vector<int> class_tops;
};

LadderPattern three_dim_pattern();   // theta degree 1; one connection class, one phase class
LadderPattern eight_dim_pattern();   // theta degree 3; three connection classes

struct LadderFactor {
    int cls = 0;         // class position
    int layer = 0;       // 0..top: form layers; top+1: integer layer
    bool differential = false;
    int slice_begin = 0;  // tuple positions of the factor's Cech indices
    int slice_end = 0;    // inclusive
};

struct LadderTerm {
    int level = 0;  // decomposition level the term integrates over
    int sign = 1;
    int theta_begin = 0;
    int theta_end = 0;  // inclusive
    std::vector<LadderFactor> factors;
};

// Expands the pattern into its term table.  Throws UnsupportedPattern
// when the dimension bookkeeping does not close.
std::vector<LadderTerm> ladder_terms(const LadderPattern& pattern);

// Uniform view of a class as layered Cech data: forms[s] has Cech
// degree s and form degree top - s; the integer layer sits on top.
struct ClassLayers {
    std::vector<FormCochain> forms;
    IntCochain top;

    int top_degree() const { return (int)forms.size() - 1; }
};

ClassLayers layers(const DBClass& cls);
ClassLayers layers(const PhaseClass& cls);

struct ActionBreakdown {
    std::vector<Rational> ladder;  // one value per ladder term
    Rational tau_term;
    Rational chi_term;

    Rational ladder_sum() const;
    Rational total() const;
    // Representative of the class modulo 1, in [0, 1).
    Rational total_mod() const;
};

// Ladder part of the action: every term paired against the stored
// decomposition chains.  Throws DimensionMismatch when the pattern,
// complex, and decomposition disagree; DegreeMismatch when class data
// carries the wrong form degrees.
ActionBreakdown action_terms(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const LadderPattern& pattern,
                             const std::vector<ClassLayers>& classes,
                             const IntCochain& theta);

// Ladder plus the background corrections: the tau smearing term enters
// with a plus sign, the chi term with a minus sign.
ActionBreakdown action_total(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const LadderPattern& pattern,
                             const std::vector<ClassLayers>& classes,
                             const BackgroundCocycle& bg);

// Conveniences for the three-dimensional two-class ladder.
ActionBreakdown action_terms(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                             const IntCochain& theta);
ActionBreakdown action_total(const SimplicialComplex& cx, const Cover& cover,
                             const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                             const BackgroundCocycle& bg);

// Gauge data for a connection class: local exact shifts per chart and
// an integer Cech one-cochain shifting the transition logs.
struct GaugeData {
    std::vector<Cochain> local;  // zero-forms, one per chart; empty = none
    IntCochain large;            // degree 1; empty = none
};

// Applies A -> A + d(local), trans -> trans + delta(local) + large,
// wind -> wind + delta(large).  Throws InvalidGaugeData when a large
// entry is not an integer.
DBClass apply_gauge(const SimplicialComplex& cx, const Cover& cover, const DBClass& cls,
                    const GaugeData& gauge);

// Shifts the local logs by integer constants per chart and the jumps
// by their differences.  Throws InvalidGaugeData on non-integers.
PhaseClass apply_shift(const SimplicialComplex& cx, const PhaseClass& cls,
                       const std::vector<Rational>& shifts);

// Difference of totals after transforming both classes.  Exactly zero
// for purely local data; an integer for integral large data.
Rational gauge_variation(const SimplicialComplex& cx, const Cover& cover,
                         const PolyDecomp& P, const DBClass& a, const PhaseClass& b,
                         const BackgroundCocycle& bg, const GaugeData& gauge_a,
                         const std::vector<Rational>& shifts_b);

// Target of the cup product H^q(Z(l)) x H^t(Z(j)) in Deligne
// cohomology: the surviving case, the target degree, and the target
// weight.  Case 0 means the product vanishes; case 3 lands in the
// image of integral cohomology.
struct CupDegree {
    int case_id = 0;
    int degree = 0;
    int weight = 0;
    bool zero = false;
    bool integral = false;
};

CupDegree cup_degree(int q, int l, int t, int j);

// Fractional part in [0, 1).
Rational fractional_part(const Rational& r);

}  // namespace g2gauge
