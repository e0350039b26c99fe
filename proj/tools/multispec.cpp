// Command-line front end: spectra of graph operators, trace-method bound runs,
// heat-kernel certification on the model plane, the star construction, seeded
// identity suites, and the closed-form bound formulas. All reports are JSON
// with a stable schema; dense grids can additionally be dumped as CSV.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "multispec/multispec.hpp"

namespace ms = multispec;
using json = nlohmann::json;

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("MULTISPEC_OUTDIR"); dir && *dir)
            p = std::filesystem::path(dir) / p;
    }
    return p.string();
}

void emit(const json& report, const std::string& out_path) {
    const std::string resolved = resolve_output(out_path);
    if (resolved.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::filesystem::path p(resolved);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ms::InvalidParams("cannot write output file " + resolved);
    out << report.dump(2) << "\n";
    std::cout << "wrote " << resolved << "\n";
}

ms::WeightedGraph load_connected(const std::string& path) {
    const ms::ParsedGraph parsed = ms::load_graph_file(path);
    if (!parsed.graph.connected()) throw ms::NotConnected();
    return parsed.graph;
}

std::vector<double> linspace_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-12; x += step) g.push_back(x);
    return g;
}

// ---- spectrum ------------------------------------------------------------------

struct SpectrumOpts {
    std::string graph_file;
    bool adjacency = false;
    double heat_t = -1.0;
    double group_tol = -1.0;
    std::string out;
};

int run_spectrum(const SpectrumOpts& o) {
    const ms::WeightedGraph g = load_connected(o.graph_file);
    json rep = ms::base_report("spectrum");
    ms::Spectrum spec;
    if (o.heat_t >= 0.0) {
        rep["operator"] = "heat";
        rep["heat_time"] = o.heat_t;
        spec = ms::eigendecompose(
            ms::heat_semigroup(ms::SymmetricOperator(g.laplacian_matrix()), o.heat_t),
            o.group_tol);
    } else if (o.adjacency) {
        rep["operator"] = "adjacency";
        spec = ms::eigendecompose(ms::SymmetricOperator(g.adjacency_matrix()), o.group_tol);
    } else {
        rep["operator"] = "laplacian";
        spec = ms::eigendecompose(ms::SymmetricOperator(g.laplacian_matrix()), o.group_tol);
    }
    rep["n"] = g.order();
    rep["spectrum"] = ms::to_json(spec);
    emit(rep, o.out);
    return 0;
}

// ---- bound ---------------------------------------------------------------------

struct BoundOpts {
    std::string graph_file;
    std::vector<int> js{2};
    double c = 1.0;
    double r1 = 0.0, r2 = 0.0, t_unit = 1.0, group_tol = -1.0;
    int radius = 0;
    bool single_cell = false;
    std::string out;
};

int run_bound(const BoundOpts& o) {
    const ms::WeightedGraph g = load_connected(o.graph_file);
    ms::PipelineParams params;
    params.c = o.c;
    params.r1 = o.r1;
    params.r2 = o.r2;
    params.t_unit = o.t_unit;
    params.group_tol = o.group_tol;
    params.radius_override = o.radius;
    std::vector<int> centers;
    if (o.single_cell) centers = {0};

    json rep = ms::base_report("bound");
    rep["graph"] = o.graph_file;
    rep["n"] = g.order();
    json reports = json::array();
    bool all = true;
    for (int j : o.js) {
        const ms::BoundReport r = ms::run_pipeline(g, params, j, centers);
        all = all && r.all_ok();
        reports.push_back(ms::to_json(r));
    }
    rep["reports"] = reports;
    rep["aggregate_pass"] = all;
    emit(rep, o.out);
    return all ? 0 : 5;
}

// ---- kernel-cert ---------------------------------------------------------------

struct KernelOpts {
    double curvature = -1.0;
    double heat_cut = 12.0;
    std::vector<double> t_grid{1.0, 2.0, 4.0, 8.0};
    double eta_max = 40.0;
    double eta_step = 1.0;
    int quad_points = 128;
    std::string check = "all";
    std::string csv;
    std::string out;
};

int run_kernel_cert(const KernelOpts& o) {
    ms::ModelPlaneParams params;
    params.curvature = o.curvature;
    params.quad_points = o.quad_points;
    params.validate();

    json rep = ms::base_report("kernel-cert");
    rep["curvature"] = o.curvature;
    rep["heat_cut"] = o.heat_cut;
    bool all = true;
    std::vector<ms::KernelCheckReport> for_csv;

    if (o.check == "all" || o.check == "mass") {
        json mass = json::array();
        for (double t : o.t_grid) {
            const double m = ms::kernel_total_mass(o.curvature, t, params);
            const bool ok = std::abs(m - 1.0) <= 1e-5;
            all = all && ok;
            mass.push_back({{"t", t}, {"mass", m}, {"ok", ok}});
        }
        rep["mass_conservation"] = mass;
    }
    if (o.check == "all" || o.check == "sandwich") {
        const auto grid = linspace_grid(0.0, o.eta_max, o.eta_step);
        const ms::KernelCheckReport r = ms::sandwich_fit(params, o.t_grid, grid);
        all = all && r.holds;
        rep["sandwich"] = ms::to_json(r);
        for_csv.push_back(r);
    }
    if (o.check == "all" || o.check == "tail") {
        const ms::KernelCheckReport r =
            ms::l1_tail_check(o.curvature, o.heat_cut, o.t_grid, params);
        all = all && r.holds;
        rep["l1_tail"] = ms::to_json(r);
        for_csv.push_back(r);
    }
    if (o.check == "all" || o.check == "variation") {
        const ms::KernelCheckReport r =
            ms::variation_ratio_check(o.curvature, o.heat_cut, o.t_grid, params);
        all = all && r.holds;
        rep["variation"] = ms::to_json(r);
        for_csv.push_back(r);
    }
    rep["aggregate_pass"] = all;

    if (!o.csv.empty()) {
        const std::string resolved = resolve_output(o.csv);
        std::ofstream csv(resolved);
        if (!csv) throw ms::InvalidParams("cannot write CSV file " + resolved);
        for (const auto& r : for_csv) {
            csv << "# check=" << r.check << "\n" << ms::kernel_report_csv(r);
        }
        std::cout << "wrote " << resolved << "\n";
    }
    emit(rep, o.out);
    return all ? 0 : 5;
}

// ---- construct -----------------------------------------------------------------

struct ConstructOpts {
    int n = 0;
    std::string n_range;
    std::string out;
};

int run_construct(const ConstructOpts& o) {
    std::vector<int> ns;
    if (!o.n_range.empty()) {
        const auto colon = o.n_range.find(':');
        if (colon == std::string::npos)
            throw ms::InvalidParams("n range must be A:B");
        const int a = std::stoi(o.n_range.substr(0, colon));
        const int b = std::stoi(o.n_range.substr(colon + 1));
        if (a > b) throw ms::InvalidParams("empty n range");
        for (int n = a; n <= b; ++n) ns.push_back(n);
    } else if (o.n > 0) {
        ns.push_back(o.n);
    } else {
        throw ms::InvalidParams("pass --n or --n-range");
    }

    json rep = ms::base_report("construct");
    json reports = json::array();
    bool all = true;
    for (int n : ns) {
        const ms::ConstructionReport r = ms::construction_report(n);
        all = all && r.near_degenerate_count == n - 1 && r.genus == n;
        reports.push_back(ms::to_json(r));
    }
    rep["reports"] = reports;
    rep["aggregate_pass"] = all;
    emit(rep, o.out);
    return all ? 0 : 5;
}

// ---- identities ----------------------------------------------------------------

struct IdentityOpts {
    int trials = 1000;
    int dim_max = 20;
    std::uint64_t seed = 42;
    int workers = 1;
    bool full_runs = false;
    std::string out;
};

template <typename SuiteFn>
ms::SuiteResult run_chunked(int trials, int workers, const SuiteFn& fn) {
    if (workers <= 1 || trials < 2 * workers) return fn(trials, 0);
    std::vector<ms::SuiteResult> parts(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const int chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int first = w * chunk;
        const int count = std::min(chunk, trials - first);
        if (count <= 0) break;
        pool.emplace_back([&, w, first, count] { parts[static_cast<std::size_t>(w)] = fn(count, first); });
    }
    for (auto& th : pool) th.join();
    ms::SuiteResult merged = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        merged.runs.insert(merged.runs.end(), parts[i].runs.begin(), parts[i].runs.end());
    merged.finalize();
    return merged;
}

int run_identities(const IdentityOpts& o) {
    if (o.trials < 1) throw ms::InvalidParams("identities needs at least one trial");
    if (o.dim_max < 4) throw ms::InvalidParams("identities needs dim-max >= 4");
    const int small_trials = std::max(1, o.trials / 5);

    const auto interlace = run_chunked(o.trials, o.workers, [&](int n, int first) {
        return ms::interlacing_suite(n, o.dim_max, o.seed, first);
    });
    const auto trace = run_chunked(small_trials, o.workers, [&](int n, int first) {
        return ms::trace_identity_suite(n, o.dim_max, 4, o.seed, first);
    });
    const auto telegain = run_chunked(small_trials, o.workers, [&](int n, int first) {
        return ms::telescoping_gain_suite(n, std::min(o.dim_max, 24), o.seed, first);
    });

    json rep = ms::base_report("identities");
    rep["seed"] = o.seed;
    rep["trials"] = o.trials;
    rep["dim_max"] = o.dim_max;
    rep["timestamp"] = utc_timestamp();
    rep["suites"] = {ms::to_json(interlace, o.full_runs), ms::to_json(trace, o.full_runs),
                     ms::to_json(telegain, o.full_runs)};
    const bool all =
        interlace.aggregate_pass && trace.aggregate_pass && telegain.aggregate_pass;
    rep["aggregate_pass"] = all;
    std::cerr << "seed " << o.seed << "\n";
    emit(rep, o.out);
    return all ? 0 : 5;
}

// ---- formula -------------------------------------------------------------------

struct FormulaOpts {
    std::string name;
    int g = 2;
    double c0 = 1.0;
    double vol = 1.0;
    double kappa = 0.0;
    double inj = 1.0;
    double a = -1.0;
    double b = -1.0;
    double rho = 1.0;
    double delta = -1.0;
    double big_k = 1.0;
    double beta = 1.0;
    double c2 = 0.5;
    std::string out;
};

int run_formula(const FormulaOpts& o) {
    json rep = ms::base_report("formula");
    rep["formula"] = o.name;
    if (o.name == "mult-genus") {
        rep["params"] = {{"g", o.g}, {"C0", o.c0}};
        rep["value"] = ms::multiplicity_bound_genus(o.g, o.c0);
    } else if (o.name == "mult-volume") {
        rep["params"] = {{"vol", o.vol}, {"C0", o.c0}};
        rep["value"] = ms::multiplicity_bound_volume(o.vol, o.c0);
    } else if (o.name == "remark-constants") {
        rep["params"] = {{"a", o.a}, {"b", o.b}, {"rho", o.rho}};
        const auto r = ms::remark_constants(
            o.a, o.b, o.rho,
            o.delta > 0.0 ? std::optional<double>(o.delta) : std::nullopt);
        rep["value"] = r.c0_factor;
        if (r.alpha_factor) rep["alpha_factor"] = *r.alpha_factor;
    } else if (o.name == "scale-free") {
        rep["params"] = {{"vol", o.vol}, {"kappa", o.kappa}, {"inj", o.inj}};
        rep["value"] = ms::scale_free_quantity(o.vol, o.kappa, o.inj);
    } else if (o.name == "gauss-bonnet-cap") {
        rep["params"] = {{"g", o.g}, {"a", o.a}};
        rep["value"] = ms::gauss_bonnet_volume_cap(o.g, o.a);
    } else if (o.name == "chromatic") {
        rep["params"] = {{"g", o.g}};
        rep["value"] = ms::chromatic_number(o.g);
    } else if (o.name == "cdv-target") {
        rep["params"] = {{"g", o.g}};
        const auto t = ms::cdv_conjecture_target(o.g);
        rep["value"] = t.value;
        rep["conjecture_disproven"] = t.conjecture_disproven;
    } else if (o.name == "colbois-lower") {
        rep["params"] = {{"g", o.g}};
        rep["value"] = ms::colbois_cdv_lower(o.g);
    } else if (o.name == "diameter-lower") {
        rep["params"] = {{"b", o.b}};
        rep["value"] = ms::diameter_lower_bound(o.b);
    } else if (o.name == "window-bound") {
        rep["params"] = {{"g", o.g}, {"K", o.big_k}, {"beta", o.beta}, {"C0", o.c0}};
        const auto w = ms::window_bound(o.g, o.big_k, o.beta, o.c0);
        rep["value"] = w.count_bound;
        rep["window_factor"] = w.window_factor;
    } else if (o.name == "buser-separation") {
        rep["params"] = {{"delta", o.delta}, {"b", o.b}};
        rep["value"] = ms::buser_gap_to_separation(o.delta, o.b);
    } else if (o.name == "assemble-constants") {
        rep["params"] = {{"b", o.b}, {"C2", o.c2}};
        const auto c = ms::assemble_constants(o.b, o.c2);
        rep["value"] = {{"chi_cut", c.chi_cut}, {"heat_cut", c.heat_cut}, {"c", c.c}};
    } else {
        throw ms::InvalidParams(
            "unknown formula '" + o.name +
            "' (try: mult-genus mult-volume remark-constants scale-free gauss-bonnet-cap "
            "chromatic cdv-target colbois-lower diameter-lower window-bound "
            "buser-separation assemble-constants)");
    }
    emit(rep, o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral multiplicity laboratory"};
    app.set_config("--config", "", "key=value config file (flags win)");
    app.require_subcommand(1);

    SpectrumOpts so;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a graph operator");
    spectrum->add_option("graph", so.graph_file, "graph file")->required();
    spectrum->add_flag("--adjacency", so.adjacency, "adjacency instead of Laplacian");
    spectrum->add_option("--heat", so.heat_t, "heat semigroup exp(-tL) at this time");
    spectrum->add_option("--group-tol", so.group_tol, "multiplicity grouping tolerance");
    spectrum->add_option("-o,--output", so.out, "output JSON path");

    BoundOpts bo;
    auto* bound = app.add_subcommand("bound", "trace-method multiplicity bound run");
    bound->add_option("graph", bo.graph_file, "graph file")->required();
    bound->add_option("--j", bo.js, "target indices (default 2)");
    bound->add_option("--c", bo.c, "net-scale constant for derived r1/r2");
    bound->add_option("--r1", bo.r1, "explicit r1 (>= 1)");
    bound->add_option("--r2", bo.r2, "explicit r2 (>= r1)");
    bound->add_option("--t-unit", bo.t_unit, "semigroup time step multiplier");
    bound->add_option("--radius", bo.radius, "forced net radius");
    bound->add_option("--group-tol", bo.group_tol, "multiplicity grouping tolerance");
    bound->add_flag("--single-cell", bo.single_cell, "one Voronoi cell covering the graph");
    bound->add_option("-o,--output", bo.out, "output JSON path");

    KernelOpts ko;
    auto* kc = app.add_subcommand("kernel-cert", "model-plane heat kernel certification");
    kc->add_option("--K", ko.curvature, "curvature (negative)");
    kc->add_option("--heat-cut", ko.heat_cut, "tail/variation cutoff scale");
    kc->add_option("--t-grid", ko.t_grid, "time grid");
    kc->add_option("--eta-max", ko.eta_max, "largest radius on the grid");
    kc->add_option("--eta-step", ko.eta_step, "radius grid step");
    kc->add_option("--quad-points", ko.quad_points, "quadrature nodes per pass (>= 64)");
    kc->add_option("--check", ko.check, "all|mass|sandwich|tail|variation");
    kc->add_option("--csv", ko.csv, "CSV dump path for the grids");
    kc->add_option("-o,--output", ko.out, "output JSON path");

    ConstructOpts co;
    auto* construct = app.add_subcommand("construct", "star construction report");
    construct->add_option("--n", co.n, "number of branches (>= 3)");
    construct->add_option("--n-range", co.n_range, "range A:B of branch counts");
    construct->add_option("-o,--output", co.out, "output JSON path");

    IdentityOpts io;
    auto* identities = app.add_subcommand("identities", "seeded identity/property suites");
    identities->add_option("--trials", io.trials, "interlacing trials (others run trials/5)");
    identities->add_option("--dim-max", io.dim_max, "largest operator dimension");
    identities->add_option("--seed", io.seed, "PRNG seed");
    identities->add_option("--workers", io.workers, "worker threads");
    identities->add_flag("--full-runs", io.full_runs, "list every run in the manifest");
    identities->add_option("-o,--output", io.out, "output JSON path");

    FormulaOpts fo;
    auto* formula = app.add_subcommand("formula", "closed-form bound evaluation");
    formula->add_option("name", fo.name, "formula name")->required();
    formula->add_option("--g", fo.g, "genus");
    formula->add_option("--C0", fo.c0, "constant multiplier");
    formula->add_option("--vol", fo.vol, "volume");
    formula->add_option("--kappa", fo.kappa, "curvature magnitude bound");
    formula->add_option("--inj", fo.inj, "injectivity radius");
    formula->add_option("--a", fo.a, "curvature upper bound");
    formula->add_option("--b", fo.b, "curvature lower bound");
    formula->add_option("--rho", fo.rho, "injectivity radius floor");
    formula->add_option("--delta", fo.delta, "spectral gap");
    formula->add_option("--K", fo.big_k, "window size constant");
    formula->add_option("--beta", fo.beta, "window exponent");
    formula->add_option("--C2", fo.c2, "lower bound on mu_2, in (0,1)");
    formula->add_option("-o,--output", fo.out, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(so);
        if (bound->parsed()) return run_bound(bo);
        if (kc->parsed()) return run_kernel_cert(ko);
        if (construct->parsed()) return run_construct(co);
        if (identities->parsed()) return run_identities(io);
        if (formula->parsed()) return run_formula(fo);
    } catch (const ms::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
