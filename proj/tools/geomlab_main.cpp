#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geomlab/report_json.hpp"

namespace {

using namespace geomlab;

double parse_number(const std::string& item, const char* what) {
    std::istringstream in(item);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof()) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + item +
                                    "'");
    }
    return v;
}

// "a,b,c" or "start:end:count".
std::vector<double> parse_amplitudes(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double start = 0.0, end = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> end >> c2 >> count) || c1 != ':' ||
            c2 != ':' || count < 1) {
            throw std::invalid_argument("bad amplitude range '" + text + "'");
        }
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0
                                        : static_cast<double>(i) / (count - 1);
            out.push_back(start + f * (end - start));
        }
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(parse_number(item, "amplitude"));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty amplitude list");
    }
    return out;
}

Eigen::Vector3d parse_axes(const std::string& text) {
    std::istringstream in(text);
    std::string item;
    std::vector<double> values;
    while (std::getline(in, item, ','))
        values.push_back(parse_number(item, "--axes entry"));
    if (values.size() != 3) {
        throw std::invalid_argument("--axes expects three comma separated "
                                    "values");
    }
    for (double a : values) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("--axes entries must be positive");
        }
    }
    return {values[0], values[1], values[2]};
}

// json unless the output path asks for csv.
bool want_csv(const std::string& format, const std::string& out_path) {
    if (format == "csv") return true;
    if (format == "json") return false;
    return out_path.size() > 4 &&
           out_path.compare(out_path.size() - 4, 4, ".csv") == 0;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_atomic(out_path, text);
    }
}

Mesh load_validated(const std::string& path) {
    Mesh mesh = load_off(path);
    validate(mesh);
    return mesh;
}

std::string resolve_family(const std::string& name) {
    if (name == "ellipsoid" || name == "ellipsoid-sweep") {
        return "ellipsoid-sweep";
    }
    if (name == "harmonic" || name == "harmonic-perturbation") {
        return "harmonic-perturbation";
    }
    throw std::invalid_argument("unknown family '" + name + "'");
}

struct Options {
    std::string input;
    std::string out;
    std::string format = "auto";
    std::string s_choice = "id";
    std::string t_choice = "id";
    double p = 2.0;
    double q = 4.0;
    int r = 0;
    int level = 4;
    int lmax = 4;
    int k = 6;
    std::uint64_t seed = 7;
    double radius = 1.0;
    double t = 0.1;
    std::string axes = "1,1,1";
    std::string family;
    std::string amplitudes;
    bool einstein_mode = false;
};

int cmd_gen(const std::string& kind, const Options& opt) {
    Mesh mesh;
    std::string source;
    if (kind == "icosphere") {
        mesh = gen_icosphere(opt.level, opt.radius);
        source = "icosphere level=" + std::to_string(opt.level);
    } else if (kind == "ellipsoid") {
        mesh = gen_ellipsoid(parse_axes(opt.axes), opt.level);
        source = "ellipsoid axes=" + opt.axes +
                 " level=" + std::to_string(opt.level);
    } else if (kind == "perturbed-sphere") {
        mesh = gen_perturbed_sphere(opt.level, opt.lmax, opt.seed, opt.t);
        source = "perturbed-sphere level=" + std::to_string(opt.level) +
                 " seed=" + std::to_string(opt.seed);
    } else {
        throw std::invalid_argument("unknown subfamily '" + kind + "'");
    }
    if (opt.out.empty()) {
        throw std::invalid_argument("gen requires --out");
    }
    save_off(mesh, opt.out);
    std::fputs(gen_json(mesh_meta(mesh, source, opt.level)).c_str(), stdout);
    return 0;
}

int cmd_curvature(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    const CurvatureField field = shape_operator(mesh);
    if (want_csv(opt.format, opt.out)) {
        emit(opt.out, curvature_csv(field));
    } else {
        emit(opt.out, curvature_json(mesh_meta(mesh, opt.input), field));
    }
    return 0;
}

int cmd_spectrum(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    const TensorChoice choice = parse_tensor_choice(opt.t_choice);
    SurfaceAnalysis ctx(mesh);
    const Spectrum spectrum = solve_lowest(ctx.pair(choice), opt.k);
    emit(opt.out,
         spectrum_json(mesh_meta(mesh, opt.input), choice.name(), spectrum));
    return 0;
}

int cmd_verify(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    SurfaceAnalysis ctx(mesh);
    const std::vector<InequalityReport> entries = verify_suite(ctx);
    const Spectrum& spectrum = ctx.spectrum_of(TensorChoice::id());
    const double residual = spectrum.residuals.maxCoeff();
    emit(opt.out, suite_json(mesh_meta(mesh, opt.input), entries, residual));
    for (const InequalityReport& e : entries) {
        if (e.hypotheses_ok && !e.certified) {
            std::fprintf(stderr,
                         "verify: %s not certified (ratio=%.6g)\n",
                         e.name.c_str(), e.ratio);
            return 1;
        }
    }
    return 0;
}

int cmd_pinch(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    SurfaceAnalysis ctx(mesh);
    PinchSetup setup;
    setup.S = parse_tensor_choice(opt.s_choice);
    setup.T = parse_tensor_choice(opt.t_choice);
    setup.p = opt.p;
    setup.q = opt.q;
    const PinchReport report = pinch_report(ctx, setup);
    emit(opt.out, pinch_json(mesh_meta(mesh, opt.input), report));
    if (report.lemmas.applicable &&
        !(report.lemmas.position_ok && report.lemmas.tangential_ok &&
          report.lemmas.norm_gap_ok)) {
        std::fprintf(stderr,
                     "pinch: lemma check failed (worst margin %.3e)\n",
                     report.lemmas.worst_margin);
        return 1;
    }
    return 0;
}

int cmd_stability(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    SurfaceAnalysis ctx(mesh);
    const StabilityReport report = stability_deficit(ctx, opt.r);
    emit(opt.out, stability_json(mesh_meta(mesh, opt.input), report));
    if (report.chain_applicable && !report.chain_ok) {
        std::fprintf(stderr,
                     "stability: eigenvalue bound failed (lhs=%.9g rhs=%.9g)"
                     "\n",
                     report.chain_lhs, report.chain_rhs);
        return 1;
    }
    return 0;
}

int cmd_einstein(const Options& opt) {
    const Mesh mesh = load_validated(opt.input);
    SurfaceAnalysis ctx(mesh);
    const EinsteinReport report = einstein_report(ctx, opt.p, opt.q);
    emit(opt.out, einstein_json(mesh_meta(mesh, opt.input), report));
    if (report.gauss_identity > 1e-9) {
        std::fprintf(stderr, "einstein: scalar curvature identity violated "
                             "(%.3e)\n",
                     report.gauss_identity);
        return 1;
    }
    if (report.decomposition > 1e-9) {
        std::fprintf(stderr, "einstein: deficit decomposition violated "
                             "(%.3e)\n",
                     report.decomposition);
        return 1;
    }
    if (report.chain_applicable && !report.chain_ok) {
        std::fprintf(stderr, "einstein: curvature chain inequality failed "
                             "(lhs=%.9g rhs=%.9g)\n",
                     report.chain_lhs, report.chain_rhs);
        return 1;
    }
    if (report.schur.hypotheses_ok && !report.schur.certified) {
        std::fprintf(stderr, "einstein: almost-Schur bound failed "
                             "(ratio=%.6g)\n",
                     report.schur.ratio);
        return 1;
    }
    return 0;
}

int cmd_scan(const Options& opt) {
    FamilySpec spec;
    spec.family = resolve_family(opt.family);
    spec.amplitudes = parse_amplitudes(opt.amplitudes);
    spec.lmax = opt.lmax;
    spec.seed = opt.seed;
    spec.level = opt.level;
    double slope = 0.0;
    double alpha = 0.0;
    int used = 0;
    if (opt.einstein_mode) {
        const EinsteinScan scan = einstein_family_scan(spec, opt.p, opt.q);
        emit(opt.out, want_csv(opt.format, opt.out)
                          ? einstein_scan_csv(scan)
                          : einstein_scan_json(scan));
        slope = scan.slope;
        alpha = scan.alpha;
        used = scan.rows_used;
    } else {
        PinchSetup setup;
        setup.S = parse_tensor_choice(opt.s_choice);
        setup.T = parse_tensor_choice(opt.t_choice);
        setup.p = opt.p;
        setup.q = opt.q;
        const FamilyScan scan = family_scan(spec, setup);
        emit(opt.out, want_csv(opt.format, opt.out) ? pinch_scan_csv(scan)
                                                    : pinch_scan_json(scan));
        slope = scan.slope;
        alpha = scan.rows.empty() ? 0.0 : scan.rows.front().ratios.alpha;
        used = scan.rows_used;
    }
    if (used < 2) {
        std::fprintf(stderr, "scan: too few rows inside the fit window\n");
        return 1;
    }
    if (slope < alpha - 0.02) {
        std::fprintf(stderr,
                     "scan: fitted exponent %.4f below reference %.4f\n",
                     slope, alpha);
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geomlab: spectral bounds and sphere-closeness reports for "
                 "closed hypersurfaces"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* gen = app.add_subcommand("gen", "generate a mesh as OFF");
    std::string gen_kind;
    gen->add_option("kind", gen_kind,
                    "icosphere | ellipsoid | perturbed-sphere")
        ->required();
    gen->add_option("--level", opt.level, "refinement level");
    gen->add_option("--radius", opt.radius, "sphere radius");
    gen->add_option("--axes", opt.axes, "ellipsoid semi-axes a,b,c");
    gen->add_option("--lmax", opt.lmax, "harmonic band limit");
    gen->add_option("--seed", opt.seed, "profile seed");
    gen->add_option("--t", opt.t, "perturbation amplitude");
    gen->add_option("-o,--out", opt.out, "output OFF path");

    auto add_io = [&opt](CLI::App* cmd, bool with_input) {
        if (with_input) {
            cmd->add_option("input", opt.input, "input OFF mesh")->required();
        }
        cmd->add_option("-o,--out", opt.out, "output path (default stdout)");
        cmd->add_option("--format", opt.format, "json | csv");
    };

    CLI::App* curvature =
        app.add_subcommand("curvature", "pointwise curvature data");
    add_io(curvature, true);

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "lowest eigenvalues of L_T");
    add_io(spectrum, true);
    spectrum->add_option("--T", opt.t_choice, "coefficient tensor");
    spectrum->add_option("--k", opt.k, "eigenpair count");

    CLI::App* verify =
        app.add_subcommand("verify", "run the eigenvalue bound suite");
    add_io(verify, true);
    std::string suite = "all";
    verify->add_option("--suite", suite, "suite selector (all)");
    verify->add_option("--p", opt.p, "unused, accepted for symmetry");
    verify->add_option("--q", opt.q, "unused, accepted for symmetry");

    CLI::App* pinch =
        app.add_subcommand("pinch", "sphere-closeness report");
    add_io(pinch, true);
    pinch->add_option("--S", opt.s_choice, "pairing tensor");
    pinch->add_option("--T", opt.t_choice, "operator tensor");
    pinch->add_option("--p", opt.p, "norm exponent (> 1)");
    pinch->add_option("--q", opt.q, "curvature integrability (> n)");

    CLI::App* stability =
        app.add_subcommand("stability", "almost-stability deficit");
    add_io(stability, true);
    stability->add_option("--r", opt.r, "functional order");

    CLI::App* einstein =
        app.add_subcommand("einstein", "almost-Einstein report");
    add_io(einstein, true);
    einstein->add_option("--p", opt.p, "deficit exponent (> max(2, n/2))");
    einstein->add_option("--q", opt.q, "curvature integrability (> n)");

    CLI::App* scan = app.add_subcommand("scan", "family sweep with fit");
    add_io(scan, false);
    scan->add_option("--family", opt.family, "ellipsoid | harmonic")
        ->required();
    scan->add_option("--amplitudes", opt.amplitudes,
                     "comma list or start:end:count")
        ->required();
    scan->add_option("--level", opt.level, "refinement level");
    scan->add_option("--lmax", opt.lmax, "harmonic band limit");
    scan->add_option("--seed", opt.seed, "profile seed");
    scan->add_option("--S", opt.s_choice, "pairing tensor");
    scan->add_option("--T", opt.t_choice, "operator tensor");
    scan->add_option("--p", opt.p, "norm exponent");
    scan->add_option("--q", opt.q, "curvature integrability");
    scan->add_flag("--einstein", opt.einstein_mode,
                   "sweep the almost-Einstein report instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_kind, opt);
        if (curvature->parsed()) return cmd_curvature(opt);
        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (pinch->parsed()) return cmd_pinch(opt);
        if (stability->parsed()) return cmd_stability(opt);
        if (einstein->parsed()) return cmd_einstein(opt);
        if (scan->parsed()) return cmd_scan(opt);
        std::fprintf(stderr, "no command\n");
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const hypothesis_error& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 1;
    } catch (const solver_error& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 1;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
