#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "g2gauge/clifford.hpp"
#include "g2gauge/complexes.hpp"
#include "g2gauge/dbcech.hpp"
#include "g2gauge/errors.hpp"
#include "g2gauge/g2.hpp"
#include "g2gauge/instanton.hpp"
#include "g2gauge/parse.hpp"
#include "g2gauge/regdet.hpp"
#include "g2gauge/verify.hpp"

namespace {

using namespace g2gauge;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string gstr(const GaussianRational& z) {
    if (z.im.is_zero()) return z.re.str();
    std::string out = z.re.is_zero() ? "" : z.re.str() + "+";
    return out + z.im.str() + "i";
}

// Splits declarations of the shape name or name=value.
struct ParamSet {
    std::vector<std::string> names;
    std::map<std::string, Rational> values;
};

ParamSet split_params(const std::vector<std::string>& raw) {
    ParamSet out;
    for (const std::string& entry : raw) {
        std::size_t eq = entry.find('=');
        std::string name = entry.substr(0, eq == std::string::npos ? entry.size() : eq);
        out.names.push_back(name);
        if (eq != std::string::npos) out.values[name] = Rational::parse(entry.substr(eq + 1));
    }
    return out;
}

int cmd_verify(bool json, std::uint64_t seed, bool corrupt) {
    VerifyOptions opts;
    opts.seed = seed;
    opts.corrupt_gamma = corrupt;
    Report report = run_verify(opts);
    std::cout << (json ? report.json() + "\n" : report.text());
    return report.exit_code();
}

int cmd_classify(const std::string& path, const std::vector<std::string>& raw_params,
                 bool json) {
    KForm B;
    try {
        ParamSet params = split_params(raw_params);
        B = parse_form(slurp(path), params.names);
        if (!params.values.empty()) B = B.substitute(params.values);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    Connection1Form conn(B);
    ClassificationReport rep = classify(conn, build_structure());
    if (json) {
        std::ostringstream os;
        os << "{\n  \"schema\": \"g2gauge/classify/1\",\n  \"items\": [";
        bool first = true;
        for (const auto& [name, cond] : rep.items()) {
            os << (first ? "\n" : ",\n") << "    {\"name\": \"" << name << "\", ";
            first = false;
            if (auto d = cond->decided(); d.has_value())
                os << "\"decided\": " << (*d ? "true" : "false");
            else
                os << "\"decided\": null";
            os << ", \"vanishing\": [";
            for (std::size_t k = 0; k < cond->vanishing.size(); ++k)
                os << (k ? ", " : "") << "\"" << cond->vanishing[k].str() << "\"";
            os << "]}";
        }
        os << "\n  ]\n}\n";
        std::cout << os.str();
        return 0;
    }
    std::cout << "curvature: " << conn.F.str() << "\n";
    for (const auto& [name, cond] : rep.items()) {
        std::cout << "  " << name << ": ";
        if (auto d = cond->decided(); d.has_value()) {
            std::cout << (*d ? "holds" : "fails");
            if (!*d && cond->parametric) std::cout << " for every parameter value";
        } else {
            std::cout << "holds on the locus {";
            for (std::size_t k = 0; k < cond->vanishing.size(); ++k)
                std::cout << (k ? ", " : "") << cond->vanishing[k].str() << " = 0";
            std::cout << "}";
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_decompose(int degree, const std::string& path,
                  const std::vector<std::string>& raw_params) {
    KForm w;
    try {
        ParamSet params = split_params(raw_params);
        w = parse_form(slurp(path), params.names);
        if (!params.values.empty()) w = w.substitute(params.values);
        if (w.degree() != degree && !w.is_zero())
            throw ParseError("form has degree " + std::to_string(w.degree()) +
                                 ", expected " + std::to_string(degree),
                             0, 0);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    FundamentalForm f = build_structure();
    std::vector<std::pair<std::string, KForm>> parts;
    if (degree == 2) {
        auto [p7, p14] = lambda2_split(w, f);
        parts = {{"Lambda2_7", p7}, {"Lambda2_14", p14}};
    } else if (degree == 3) {
        auto s = lambda3_split(w, f);
        parts = {{"Lambda3_1", s[0]}, {"Lambda3_7", s[1]}, {"Lambda3_27", s[2]}};
    } else {
        auto s = lambda4_split(w, f);
        parts = {{"Lambda4_1", s[0]}, {"Lambda4_7", s[1]}, {"Lambda4_27", s[2]}};
    }
    KForm sum(degree, w.ring());
    for (const auto& [name, part] : parts) {
        std::cout << name << ": " << part.str() << "\n";
        sum += part;
    }
    if (!(sum == w)) {
        std::cerr << "error: components do not sum back to the input\n";
        return 1;
    }
    return 0;
}

int cmd_example(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    WorkedExampleTable t =
        a ? worked_example_report(*a, *b) : worked_example_report();
    std::cout << "connection: " << t.connection.B.str() << "\n";
    for (const WorkedExampleRow& r : t.rows) {
        std::cout << (r.matches ? "  match     " : "  MISMATCH  ") << r.name << " = "
                  << r.computed.str() << "\n";
        if (!r.matches) std::cout << "            transcribed reference: " << r.reference.str() << "\n";
    }
    std::cout << (t.all_match ? "all rows match the transcribed references"
                              : "some rows differ from the transcribed references")
              << "\n";
    return t.all_match ? 0 : 1;
}

int cmd_spinor() {
    SpinGenerators g = gamma_matrices();
    G2Basis basis = g2_basis(g);
    Spinor eta = invariant_spinor(basis);
    std::cout << "invariant spinor: (";
    for (std::size_t k = 0; k < 8; ++k) std::cout << (k ? ", " : "") << gstr(eta.vec[k]);
    std::cout << ")\n";
    std::cout << "norm^2: " << eta.norm_sq.str() << "\n";
    std::cout << "nonzero psi coefficients:\n";
    for (const auto& [t, v] : psi_table(eta, g)) {
        std::cout << "  psi_";
        for (int i : t.indices()) std::cout << i;
        std::cout << " = " << v.str() << "\n";
    }
    FundamentalForm f = build_structure();
    KForm psi = psi_form(eta, g);
    std::cout << "psi == 6*phi0: " << (psi == f.phi0 * Rational(6) ? "yes" : "no") << "\n";
    RelabelResolution res = resolve_frame_relabel(psi, f.phi0);
    std::cout << "frame relabelings fixing psi -> 6*phi0: " << res.successes.size()
              << (res.canonical == FramePermutation{0, 1, 2, 3, 4, 5, 6, 7}
                      ? " (canonical: identity)"
                      : "")
              << "\n";
    return 0;
}

int cmd_zeta_det(const std::string& expr) {
    FormalDet det;
    try {
        det = parse_det_expr(expr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << det.str() << "\n";
    return 0;
}

int cmd_assemble_zsc(int b0, int b1) {
    ZscAssembly out = assemble_Zsc(b0, b1);
    std::cout << "gaussian integral: " << out.initial.str() << "\n";
    for (const TraceStep& step : out.trace)
        std::cout << "  " << step.rule << ": " << step.expression << "\n";
    std::cout << "Z_sc = " << out.value.str() << "\n";
    return 0;
}

void print_residuals(const std::vector<ResidualEntry>& entries) {
    std::size_t shown = 0;
    for (const ResidualEntry& e : entries) {
        if (++shown > 4) {
            std::cout << "      ... " << entries.size() - 4 << " more\n";
            break;
        }
        std::cout << "      " << e.condition << " on {";
        for (std::size_t k = 0; k < e.tuple.size(); ++k)
            std::cout << (k ? "," : "") << e.tuple[k];
        std::cout << "}: |residual| = " << e.magnitude.str() << "\n";
    }
}

int cmd_db_verify(const std::string& complex_path, const std::string& cocycle_path,
                  const std::string& gauge_path) {
    CoveredComplex cc{SimplicialComplex(0), {}, ""};
    CocycleSet set;
    std::optional<GaugeFile> gauge;
    try {
        cc = read_complex(complex_path);
        set = read_cocycles(cc.complex, cocycle_path);
        if (!gauge_path.empty()) gauge = read_gauge(cc.complex, gauge_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const SimplicialComplex& cx = cc.complex;
    std::cout << "complex: " << cc.name << " (dimension " << cx.dim() << ", "
              << cx.vertex_count() << " vertices, " << cx.count(cx.dim()) << " facets, "
              << cc.cover.size() << " charts)\n";
    bool ok = true;
    auto line = [&](const std::string& name, bool pass, const std::string& note) {
        std::cout << (pass ? "  pass  " : "  FAIL  ") << name << ": " << note << "\n";
        ok = ok && pass;
    };

    CocycleReport ra = db_cocycle_check(cx, cc.cover, set.a);
    line("connection-class", ra.pass(),
         ra.pass() ? "gluing, winding, and integrality hold exactly"
                   : (ra.pass_lattice() ? "exact gluing fails, but the lattice check passes "
                                          "(valid up to integer log shifts)"
                                        : "cocycle conditions violated"));
    if (!ra.pass()) {
        print_residuals(ra.connection);
        print_residuals(ra.transition);
        print_residuals(ra.integrality);
        print_residuals(ra.cocycle);
        print_residuals(ra.lattice);
    }

    CocycleReport rb = phase_cocycle_check(cx, cc.cover, set.b);
    line("phase-class", rb.pass(),
         rb.pass() ? "jump and integrality conditions hold exactly"
                   : "cocycle conditions violated");
    if (!rb.pass()) {
        print_residuals(rb.connection);
        print_residuals(rb.integrality);
        print_residuals(rb.cocycle);
    }

    BackgroundCocycle bg = background_from_theta(cx, cc.cover, set.theta);
    BackgroundReport rbg = background_check(cx, cc.cover, bg);
    line("background", rbg.pass(),
         rbg.pass() ? "closed integral cochain with derived smearing data"
                    : "background conditions violated");
    if (!rbg.pass()) {
        print_residuals(rbg.integrality);
        print_residuals(rbg.cocycle);
        print_residuals(rbg.partition);
        print_residuals(rbg.smearing);
        print_residuals(rbg.descent);
    }

    PolyDecomp P = polyhedral_decomposition(cx, cc.cover);
    DecompReport rd = decomposition_check(cx, cc.cover, P);
    line("decomposition", rd.pass(),
         rd.pass() ? "boundary, insertion, support, and total identities hold"
                   : "decomposition identities violated");

    ActionBreakdown action = action_total(cx, cc.cover, P, set.a, set.b, bg);
    std::cout << "action: ladder = [";
    for (std::size_t k = 0; k < action.ladder.size(); ++k)
        std::cout << (k ? ", " : "") << action.ladder[k].str();
    std::cout << "], tau = " << action.tau_term.str() << ", chi = " << action.chi_term.str()
              << "\n";
    std::cout << "total = " << action.total().str() << ", class mod 1 = "
              << action.total_mod().str() << "\n";

    if (gauge) {
        Rational diff = gauge_variation(cx, cc.cover, P, set.a, set.b, bg, gauge->a,
                                        gauge->b_shifts);
        bool large = !gauge->a.large.entries.empty() || !gauge->b_shifts.empty();
        bool pass = large ? diff.is_integer() : diff.is_zero();
        line("gauge-variation", pass,
             "difference " + diff.str() +
                 (large ? " (lattice element expected)" : " (exact zero expected)"));
    }
    std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    return ok ? 0 : 1;
}

int cmd_db_example(const std::string& out_dir, const std::string& which, unsigned seed) {
    CoveredComplex cc = which == "torus4" ? kuhn_torus() : cross_polytope_sphere();
    std::filesystem::create_directories(out_dir);
    std::string base = out_dir + "/" + cc.name;
    write_complex(cc, base + ".complex.json");
    write_cocycles(deterministic_cocycles(cc), base + ".cocycles.json");
    write_gauge(sample_gauge(cc, seed), base + ".gauge.json");
    std::cout << base << ".complex.json\n"
              << base << ".cocycles.json\n"
              << base << ".gauge.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact G2 gauge-theory toolkit: Clifford and exterior algebra, "
                 "instanton classification, determinant calculus, and Cech actions"};
    app.require_subcommand(1);
    int rc = 0;

    auto* verify = app.add_subcommand("verify", "Run the algebraic verification suite");
    bool verify_json = false;
    std::uint64_t verify_seed = 20260823;
    bool verify_corrupt = false;
    verify->add_flag("--json", verify_json, "Emit a machine-readable report");
    verify->add_option("--seed", verify_seed, "Seed for the randomized checks");
    verify->add_flag("--corrupt-gamma", verify_corrupt,
                     "Negative control: flip one generator entry so the Clifford "
                     "check must fail");
    verify->callback([&] { rc = cmd_verify(verify_json, verify_seed, verify_corrupt); });

    auto* classify_cmd =
        app.add_subcommand("classify", "Classify a connection one-form from a file");
    std::string classify_file;
    std::vector<std::string> classify_params;
    bool classify_json = false;
    classify_cmd->add_option("--form", classify_file, "File holding the form expression")
        ->required();
    classify_cmd->add_option("--param", classify_params,
                             "Declare a parameter, optionally with a value: name[=p/q]");
    classify_cmd->add_flag("--json", classify_json, "Emit a machine-readable report");
    classify_cmd->callback(
        [&] { rc = cmd_classify(classify_file, classify_params, classify_json); });

    auto* decompose =
        app.add_subcommand("decompose", "Split a form into its irreducible components");
    int decompose_degree = 0;
    std::string decompose_file;
    std::vector<std::string> decompose_params;
    decompose->add_option("--degree", decompose_degree, "Form degree")
        ->required()
        ->check(CLI::IsMember({2, 3, 4}));
    decompose->add_option("--form", decompose_file, "File holding the form expression")
        ->required();
    decompose->add_option("--param", decompose_params,
                          "Declare a parameter, optionally with a value: name[=p/q]");
    decompose->callback(
        [&] { rc = cmd_decompose(decompose_degree, decompose_file, decompose_params); });

    auto* example = app.add_subcommand(
        "example", "Print the running two-parameter connection and its derived forms");
    std::string example_a, example_b;
    example->add_option("--a", example_a, "Value for the parameter a (rational)");
    example->add_option("--b", example_b, "Value for the parameter b (rational)");
    example->callback([&] {
        std::optional<Rational> a, b;
        try {
            if (!example_a.empty()) a = Rational::parse(example_a);
            if (!example_b.empty()) b = Rational::parse(example_b);
            if (a.has_value() != b.has_value())
                throw Error("provide both --a and --b, or neither");
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            rc = 2;
            return;
        }
        rc = cmd_example(a, b);
    });

    auto* spinor =
        app.add_subcommand("spinor", "Print the invariant spinor and its bilinear form");
    spinor->callback([&] { rc = cmd_spinor(); });

    auto* zeta = app.add_subcommand("zeta-det",
                                    "Canonicalize a determinant expression, e.g. "
                                    "\"detp(9*Dp|L1)^(1/4) / detp(D|L0)\"");
    std::string zeta_expr;
    zeta->add_option("expr", zeta_expr, "Determinant expression")->required();
    zeta->callback([&] { rc = cmd_zeta_det(zeta_expr); });

    auto* zsc = app.add_subcommand(
        "assemble-zsc", "Derive the semiclassical partition function for given Betti numbers");
    int b0 = 1, b1 = 0;
    zsc->add_option("--b0", b0, "Zeroth Betti number")->required()->check(CLI::NonNegativeNumber);
    zsc->add_option("--b1", b1, "First Betti number")->required()->check(CLI::NonNegativeNumber);
    zsc->callback([&] { rc = cmd_assemble_zsc(b0, b1); });

    auto* dbv = app.add_subcommand(
        "db-verify", "Check cocycle files over a simplicial complex and evaluate the action");
    std::string dbv_complex, dbv_cocycles, dbv_gauge;
    dbv->add_option("complex", dbv_complex, "Complex file (JSON)")->required();
    dbv->add_option("cocycles", dbv_cocycles, "Cocycle file (JSON)")->required();
    dbv->add_option("--gauge", dbv_gauge, "Gauge data file (JSON)");
    dbv->callback([&] { rc = cmd_db_verify(dbv_complex, dbv_cocycles, dbv_gauge); });

    auto* dbe = app.add_subcommand(
        "db-example", "Write a ready-made complex with valid cocycle and gauge files");
    std::string dbe_out, dbe_which = "sphere16";
    unsigned dbe_seed = 20260823;
    dbe->add_option("--out", dbe_out, "Output directory")->required();
    dbe->add_option("--complex", dbe_which, "Which complex to emit")
        ->check(CLI::IsMember({"sphere16", "torus4"}));
    dbe->add_option("--seed", dbe_seed, "Seed for the gauge payload");
    dbe->callback([&] { rc = cmd_db_example(dbe_out, dbe_which, dbe_seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const g2gauge::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const g2gauge::UnknownSymbol& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const g2gauge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
