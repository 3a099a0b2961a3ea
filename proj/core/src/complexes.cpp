#include "g2gauge/complexes.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace g2gauge {

using nlohmann::json;

CoveredComplex cross_polytope_sphere() {
    // Vertex 2*axis + b is the positive (b = 0) or negative (b = 1)
    // unit vector along the axis; the antipode of v is v ^ 1.
    CoveredComplex cc{SimplicialComplex(3), {}, "sphere16"};
    for (int m = 0; m < 16; ++m) {
        VertexList tet;
        int sgn = 1;
        for (int axis = 0; axis < 4; ++axis) {
            int bit = (m >> axis) & 1;
            tet.push_back(2 * axis + bit);
            if (bit) sgn = -sgn;
        }
        cc.complex.add_closed(tet);
        cc.complex.set_orientation(tet, Rational(sgn));
    }
    for (int v = 0; v < 8; ++v) {
        std::vector<int> chart;
        for (int w = 0; w < 8; ++w)
            if (w != (v ^ 1)) chart.push_back(w);
        cc.cover.charts.push_back(chart);
    }
    cc.cover.owner.resize(8);
    for (int v = 0; v < 8; ++v) cc.cover.owner[v] = v;
    validate_cover(cc.complex, cc.cover);
    return cc;
}

namespace {

int torus_x(int v) { return v % 4; }
int torus_y(int v) { return (v / 4) % 4; }
int torus_z(int v) { return v / 16; }

int torus_vertex(int x, int y, int z) {
    return ((x % 4) + 4) % 4 + 4 * (((y % 4) + 4) % 4) + 16 * (((z % 4) + 4) % 4);
}

}  // namespace

CoveredComplex kuhn_torus() {
    CoveredComplex cc{SimplicialComplex(3), {}, "torus4"};
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static const int psign[6] = {1, -1, -1, 1, 1, -1};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int z = 0; z < 4; ++z)
                for (int p = 0; p < 6; ++p) {
                    int c[3] = {x, y, z};
                    VertexList path;
                    path.push_back(torus_vertex(c[0], c[1], c[2]));
                    for (int step = 0; step < 3; ++step) {
                        c[perms[p][step]]++;
                        path.push_back(torus_vertex(c[0], c[1], c[2]));
                    }
                    int inversions = 0;
                    for (std::size_t i = 0; i < path.size(); ++i)
                        for (std::size_t j = i + 1; j < path.size(); ++j)
                            if (path[i] > path[j]) inversions++;
                    int sgn = psign[p] * (inversions % 2 == 0 ? 1 : -1);
                    VertexList tet = path;
                    std::sort(tet.begin(), tet.end());
                    cc.complex.add_closed(tet);
                    cc.complex.set_orientation(tet, Rational(sgn));
                }
    for (int a = 0; a < 4; ++a) {
        std::vector<int> chart;
        for (int v = 0; v < 64; ++v)
            if ((((torus_z(v) - a) % 4) + 4) % 4 <= 2) chart.push_back(v);
        cc.cover.charts.push_back(chart);
    }
    for (int a = 0; a < 4; ++a) {
        std::vector<int> chart;
        for (int v = 0; v < 64; ++v)
            if ((((torus_y(v) - a) % 4) + 4) % 4 <= 2) chart.push_back(v);
        cc.cover.charts.push_back(chart);
    }
    cc.cover.owner.resize(64);
    for (int v = 0; v < 64; ++v) {
        if (torus_x(v) % 2 == 0)
            cc.cover.owner[v] = (((torus_z(v) - 1) % 4) + 4) % 4;
        else
            cc.cover.owner[v] = 4 + ((((torus_y(v) - 1) % 4) + 4) % 4);
    }
    validate_cover(cc.complex, cc.cover);
    return cc;
}

CocycleSet deterministic_cocycles(const CoveredComplex& cc) {
    const SimplicialComplex& cx = cc.complex;
    const Cover& cover = cc.cover;
    int nch = (int)cover.size();
    bool torus = cc.name == "torus4";

    CocycleSet set;
    set.theta.degree = 1;
    std::vector<Rational> rho(nch);
    for (int c = 0; c < nch; ++c) rho[c] = Rational((3 * c + 1) % 5);
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d)
            if (cover.in_nerve({c, d})) set.theta.set({c, d}, rho[d] - rho[c]);

    // Shared one-form with winding and a non-closed tail, so every
    // ladder term and the smearing correction are nonzero.
    Cochain aglob = zero_cochain(cx, 1);
    for (std::size_t e = 0; e < cx.count(1); ++e) {
        const VertexList& ev = cx.vertices(1, (int)e);
        if (torus) {
            int dx = (torus_x(ev[1]) - torus_x(ev[0]) + 4) % 4;
            int dy = (torus_y(ev[1]) - torus_y(ev[0]) + 4) % 4;
            int dz = (torus_z(ev[1]) - torus_z(ev[0]) + 4) % 4;
            bool fwd = dx <= 1 && dy <= 1 && dz <= 1;
            int sx = fwd ? dx : -((4 - dx) % 4);
            int sy = fwd ? dy : -((4 - dy) % 4);
            aglob.values[e] = Rational(sx, 4) + Rational(sy, 3) + Rational(ev[0] % 5, 6) +
                              Rational(ev[1] % 3, 7);
        } else {
            aglob.values[e] = Rational(ev[0] + 2 * ev[1], 5);
        }
    }

    std::vector<Cochain> h(nch, zero_cochain(cx, 0));
    for (int c = 0; c < nch; ++c)
        for (std::size_t v = 0; v < h[c].values.size(); ++v)
            h[c].values[v] = Rational(c * ((int)v % 3), 6);

    IntCochain z;
    z.degree = 1;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) z.set({c, d}, Rational(d == c + 1));

    set.a.conn = make_form_cochain(cx, 0, 1);
    for (int c = 0; c < nch; ++c) {
        Cochain val = aglob;
        val += coboundary(cx, h[c]);
        set.a.conn.set({c}, std::move(val));
    }
    set.a.trans = make_form_cochain(cx, 1, 0);
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) {
            Cochain val = h[d];
            val -= h[c];
            Rational zc = z.get({c, d});
            for (auto& x : val.values) x += zc;
            set.a.trans.set({c, d}, std::move(val));
        }
    set.a.wind.degree = 2;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d)
            for (int e = d + 1; e < nch; ++e)
                set.a.wind.set({c, d, e}, z.get({d, e}) - z.get({c, e}) + z.get({c, d}));

    Cochain bglob = zero_cochain(cx, 0);
    for (std::size_t v = 0; v < bglob.values.size(); ++v)
        bglob.values[v] = torus ? Rational(torus_y((int)v) + torus_z((int)v) * torus_z((int)v), 7)
                                : Rational((int)v * (int)v, 8);
    std::vector<Rational> jumps(nch);
    for (int c = 0; c < nch; ++c) jumps[c] = Rational(c % 3);
    set.b.log = make_form_cochain(cx, 0, 0);
    for (int c = 0; c < nch; ++c) {
        Cochain val = bglob;
        for (auto& x : val.values) x += jumps[c];
        set.b.log.set({c}, std::move(val));
    }
    set.b.jump.degree = 1;
    for (int c = 0; c < nch; ++c)
        for (int d = c + 1; d < nch; ++d) set.b.jump.set({c, d}, jumps[d] - jumps[c]);
    return set;
}

GaugeFile sample_gauge(const CoveredComplex& cc, unsigned seed) {
    std::mt19937 rng(seed);
    int nch = (int)cc.cover.size();
    GaugeFile out;
    out.a.local.assign(cc.cover.size(), zero_cochain(cc.complex, 0));
    for (auto& c : out.a.local)
        for (auto& v : c.values) v = Rational((int)(rng() % 9) - 4, 1 + (int)(rng() % 3));
    out.a.large.degree = 1;
    for (int a = 0; a < nch; ++a)
        for (int b = a + 1; b < nch; ++b) out.a.large.set({a, b}, Rational((int)(rng() % 5) - 2));
    out.b_shifts.resize(cc.cover.size());
    for (auto& s : out.b_shifts) s = Rational((int)(rng() % 5) - 2);
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational((long long)j.get<long long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ParseError("expected a rational as integer or string", 0, 0);
}

json cochain_to_json(const Cochain& c) {
    json out = json::array();
    for (const auto& v : c.values) out.push_back(rational_to_json(v));
    return out;
}

Cochain cochain_from_json(const SimplicialComplex& cx, int degree, const json& j) {
    Cochain c = zero_cochain(cx, degree);
    if (!j.is_array() || j.size() != c.values.size())
        throw ParseError("cochain value list does not match the complex", 0, 0);
    for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] = rational_from_json(j[i]);
    return c;
}

json int_cochain_to_json(const IntCochain& c) {
    json out;
    out["degree"] = c.degree;
    out["entries"] = json::array();
    for (const auto& [tuple, value] : c.entries)
        out["entries"].push_back({{"charts", tuple}, {"value", rational_to_json(value)}});
    return out;
}

IntCochain int_cochain_from_json(const json& j) {
    IntCochain c;
    c.degree = j.at("degree").get<int>();
    for (const auto& e : j.at("entries"))
        c.set(e.at("charts").get<VertexList>(), rational_from_json(e.at("value")));
    return c;
}

json form_cochain_to_json(const FormCochain& c) {
    json out;
    out["degree"] = c.degree;
    out["form_degree"] = c.zero.degree;
    out["entries"] = json::array();
    for (const auto& [tuple, value] : c.entries)
        out["entries"].push_back({{"charts", tuple}, {"values", cochain_to_json(value)}});
    return out;
}

FormCochain form_cochain_from_json(const SimplicialComplex& cx, const json& j) {
    FormCochain c = make_form_cochain(cx, j.at("degree").get<int>(),
                                      j.at("form_degree").get<int>());
    for (const auto& e : j.at("entries"))
        c.set(e.at("charts").get<VertexList>(),
              cochain_from_json(cx, c.zero.degree, e.at("values")));
    return c;
}

json load_file(const std::string& path, const char* schema) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0, 0);
    }
    if (j.value("schema", std::string()) != schema)
        throw ParseError(std::string("expected schema ") + schema + " in " + path, 0, 0);
    return j;
}

void save_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

void write_complex(const CoveredComplex& cc, const std::string& path) {
    json j;
    j["schema"] = "g2gauge/complex/1";
    j["name"] = cc.name;
    j["dimension"] = cc.complex.dim();
    j["cells"] = json::array();
    j["orientation"] = json::array();
    for (std::size_t i = 0; i < cc.complex.count(cc.complex.dim()); ++i) {
        j["cells"].push_back(cc.complex.vertices(cc.complex.dim(), (int)i));
        j["orientation"].push_back(rational_to_json(cc.complex.orientation((int)i)));
    }
    j["charts"] = cc.cover.charts;
    j["owner"] = cc.cover.owner;
    save_file(j, path);
}

CoveredComplex read_complex(const std::string& path) {
    json j = load_file(path, "g2gauge/complex/1");
    try {
        int dim = j.at("dimension").get<int>();
        CoveredComplex cc{SimplicialComplex(dim), {}, j.value("name", std::string())};
        const json& cells = j.at("cells");
        const json& orient = j.at("orientation");
        if (orient.size() != cells.size())
            throw ParseError("orientation list does not match the cell list", 0, 0);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            VertexList tet = cells[i].get<VertexList>();
            cc.complex.add_closed(tet);
            std::sort(tet.begin(), tet.end());
            cc.complex.set_orientation(tet, rational_from_json(orient[i]));
        }
        cc.cover.charts = j.at("charts").get<std::vector<std::vector<int>>>();
        for (auto& chart : cc.cover.charts) std::sort(chart.begin(), chart.end());
        cc.cover.owner = j.at("owner").get<std::vector<int>>();
        validate_cover(cc.complex, cc.cover);
        return cc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid complex file: ") + e.what(), 0, 0);
    }
}

void write_cocycles(const CocycleSet& set, const std::string& path) {
    json j;
    j["schema"] = "g2gauge/cocycles/1";
    j["theta"] = int_cochain_to_json(set.theta);
    j["connection_class"] = {{"connection", form_cochain_to_json(set.a.conn)},
                             {"transition", form_cochain_to_json(set.a.trans)},
                             {"winding", int_cochain_to_json(set.a.wind)}};
    j["phase_class"] = {{"log", form_cochain_to_json(set.b.log)},
                        {"jump", int_cochain_to_json(set.b.jump)}};
    save_file(j, path);
}

CocycleSet read_cocycles(const SimplicialComplex& cx, const std::string& path) {
    json j = load_file(path, "g2gauge/cocycles/1");
    try {
        CocycleSet set;
        set.theta = int_cochain_from_json(j.at("theta"));
        const json& a = j.at("connection_class");
        set.a.conn = form_cochain_from_json(cx, a.at("connection"));
        set.a.trans = form_cochain_from_json(cx, a.at("transition"));
        set.a.wind = int_cochain_from_json(a.at("winding"));
        const json& b = j.at("phase_class");
        set.b.log = form_cochain_from_json(cx, b.at("log"));
        set.b.jump = int_cochain_from_json(b.at("jump"));
        return set;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid cocycle file: ") + e.what(), 0, 0);
    }
}

void write_gauge(const GaugeFile& gauge, const std::string& path) {
    json j;
    j["schema"] = "g2gauge/gauge/1";
    if (!gauge.a.local.empty()) {
        j["local"] = json::array();
        for (const auto& c : gauge.a.local) j["local"].push_back(cochain_to_json(c));
    }
    if (!gauge.a.large.entries.empty()) j["large"] = int_cochain_to_json(gauge.a.large);
    if (!gauge.b_shifts.empty()) {
        j["shifts"] = json::array();
        for (const auto& s : gauge.b_shifts) j["shifts"].push_back(rational_to_json(s));
    }
    save_file(j, path);
}

GaugeFile read_gauge(const SimplicialComplex& cx, const std::string& path) {
    json j = load_file(path, "g2gauge/gauge/1");
    try {
        GaugeFile gauge;
        if (j.contains("local"))
            for (const auto& e : j.at("local"))
                gauge.a.local.push_back(cochain_from_json(cx, 0, e));
        if (j.contains("large"))
            gauge.a.large = int_cochain_from_json(j.at("large"));
        else
            gauge.a.large.degree = 1;
        if (j.contains("shifts"))
            for (const auto& e : j.at("shifts")) gauge.b_shifts.push_back(rational_from_json(e));
        return gauge;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid gauge file: ") + e.what(), 0, 0);
    }
}

}  // namespace g2gauge
