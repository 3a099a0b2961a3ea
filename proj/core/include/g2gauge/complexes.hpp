#pragma once
// Ready-made covered test complexes and the JSON file formats for
// complexes, cocycle sets, and gauge data.

#include <string>

#include "g2gauge/dbcech.hpp"

namespace g2gauge {

struct CoveredComplex {
    SimplicialComplex complex;
    Cover cover;
    std::string name;
};

// Boundary of the four-dimensional cross-polytope: a triangulated
// three-sphere with 8 vertices and 16 oriented facets.  One chart per
// vertex (the complement of the antipode's star); each vertex owns its
// own chart.
CoveredComplex cross_polytope_sphere();

// Kuhn triangulation of the three-torus on a 4x4x4 vertex grid: 384
// oriented tetrahedra.  Eight slab charts, four stacked along z and
// four along y; vertices alternate ownership between the two slab
// families by the parity of their x coordinate.
CoveredComplex kuhn_torus();

// Cocycle payload carried by a single file: the background cochain and
// the two classes entering the three-dimensional ladder.
struct CocycleSet {
    IntCochain theta;
    DBClass a;
    PhaseClass b;
};

// Gauge payload: local and large data for the connection class plus
// constant shifts for the phase class.
struct GaugeFile {
    GaugeData a;
    std::vector<Rational> b_shifts;
};

// Nontrivial valid classes derived from closed global data with chart
// jumps and windings; every ladder term of the action is nonzero.
CocycleSet deterministic_cocycles(const CoveredComplex& cc);

// Seeded random gauge payload: local exact shifts, an integer large
// cochain, and integer phase shifts.
GaugeFile sample_gauge(const CoveredComplex& cc, unsigned seed);

void write_complex(const CoveredComplex& cc, const std::string& path);
CoveredComplex read_complex(const std::string& path);

void write_cocycles(const CocycleSet& set, const std::string& path);
CocycleSet read_cocycles(const SimplicialComplex& cx, const std::string& path);

void write_gauge(const GaugeFile& gauge, const std::string& path);
GaugeFile read_gauge(const SimplicialComplex& cx, const std::string& path);

}  // namespace g2gauge
