#pragma once

// Seeded randomized verification suites shared by the CLI and the acceptance
// binary. Every trial derives its own generator from (seed, trial index), so
// results are independent of any worker partitioning.

#include <Eigen/QR>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "multispec/graph.hpp"
#include "multispec/net.hpp"
#include "multispec/pipeline.hpp"
#include "multispec/rng.hpp"
#include "multispec/spectral.hpp"

namespace multispec {

struct SuiteRun {
    std::string key;
    bool pass = false;
    double metric = 0.0;  // residual / worst violation, suite-specific
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    bool aggregate_pass = false;
    double worst_metric = 0.0;
    std::vector<SuiteRun> runs;

    void finalize() {
        aggregate_pass = !runs.empty();
        worst_metric = 0.0;
        for (const auto& r : runs) {
            aggregate_pass = aggregate_pass && r.pass;
            worst_metric = std::max(worst_metric, r.metric);
        }
    }
};

inline Rng trial_rng(std::uint64_t seed, int trial) {
    return Rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1));
}

// ---- random instances ---------------------------------------------------------

inline SymmetricOperator random_symmetric(Rng& rng, int dim) {
    Eigen::MatrixXd m(dim, dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = scale * rng.normal();
    return SymmetricOperator(std::move(m));
}

inline SymmetricOperator random_psd(Rng& rng, int dim) {
    Eigen::MatrixXd b(dim, dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) b(i, j) = scale * rng.normal();
    return SymmetricOperator(b * b.transpose());
}

inline Projection random_projection(Rng& rng, int dim, int corank) {
    if (corank == 0) return Projection::identity(dim);
    Eigen::MatrixXd m(dim, corank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < corank; ++j) m(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, corank);
    return Projection(dim, std::move(q));
}

/// Random spanning tree plus independent extra edges: connected by build.
inline WeightedGraph random_connected_graph(Rng& rng, int n, double extra_p = 0.2) {
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v) e.push_back({rng.uniform_int(0, v - 1), v, 1.0});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < extra_p) e.push_back({u, v, 1.0});
    return WeightedGraph(n, std::move(e));
}

/// d-regular simple connected graph by the pairing model with rejection.
inline WeightedGraph random_regular_graph(Rng& rng, int n, int d) {
    if (n * d % 2 != 0) throw InvalidParams("n*d must be even for a regular graph");
    for (int attempt = 0; attempt < 5000; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        rng.shuffle(stubs);
        std::vector<Edge> e;
        bool simple = true;
        std::vector<std::vector<char>> seen(static_cast<std::size_t>(n),
                                            std::vector<char>(static_cast<std::size_t>(n), 0));
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const int u = stubs[i], v = stubs[i + 1];
            if (u == v || seen[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
                simple = false;
                break;
            }
            seen[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
            seen[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
            e.push_back({u, v, 1.0});
        }
        if (!simple) continue;
        WeightedGraph g(n, std::move(e));
        if (g.connected()) return g;
    }
    throw NumericalError("regular graph sampling did not produce a simple connected graph");
}

// ---- suites --------------------------------------------------------------------

/// Random PSD operators vs random projections: sorted spectra must interlace
/// with shift = corank, worst violation <= 1e-9.
inline SuiteResult interlacing_suite(int trials, int dim_max, std::uint64_t seed,
                                     int first_trial = 0) {
    if (trials < 1) throw InvalidParams("suite needs at least one trial");
    if (dim_max < 2) throw InvalidParams("suite needs dim_max >= 2");
    SuiteResult res;
    res.name = "interlacing";
    res.seed = seed;
    for (int trial = first_trial; trial < first_trial + trials; ++trial) {
        Rng rng = trial_rng(seed, trial);
        const int dim = rng.uniform_int(2, dim_max);
        const SymmetricOperator a = random_psd(rng, dim);
        const Projection p = random_projection(rng, dim, rng.uniform_int(0, dim));
        const InterlaceReport rep = interlace_check(a, p);
        res.runs.push_back({"interlace-" + std::to_string(trial), rep.holds,
                            rep.worst_violation});
    }
    res.finalize();
    return res;
}

/// Tr(Q^{2n}) vs the coordinate expansion, relative residual <= 1e-9.
inline SuiteResult trace_identity_suite(int trials, int dim_max, int n_max,
                                        std::uint64_t seed, int first_trial = 0) {
    if (trials < 1) throw InvalidParams("suite needs at least one trial");
    if (dim_max < 2 || n_max < 1) throw InvalidParams("invalid suite bounds");
    SuiteResult res;
    res.name = "trace_identity";
    res.seed = seed;
    for (int trial = first_trial; trial < first_trial + trials; ++trial) {
        Rng rng = trial_rng(seed, trial);
        const int dim = rng.uniform_int(2, dim_max);
        const int n = rng.uniform_int(1, n_max);
        const SymmetricOperator q = random_symmetric(rng, dim);
        const TracePowerReport rep = trace_power_identity(q, n);
        res.runs.push_back({"trace-" + std::to_string(trial), rep.residual <= 1e-9,
                            rep.residual});
    }
    res.finalize();
    return res;
}

/// Telescoping expansion and gain decomposition on random pipeline
/// configurations: residuals <= 1e-9 and gain >= -1e-9 throughout.
inline SuiteResult telescoping_gain_suite(int trials, int dim_max, std::uint64_t seed,
                                          int first_trial = 0) {
    if (trials < 1) throw InvalidParams("suite needs at least one trial");
    if (dim_max < 4) throw InvalidParams("suite needs dim_max >= 4");
    SuiteResult res;
    res.name = "telescoping_gain";
    res.seed = seed;
    for (int trial = first_trial; trial < first_trial + trials; ++trial) {
        Rng rng = trial_rng(seed, trial);
        const int n = rng.uniform_int(4, dim_max);
        const WeightedGraph g = random_connected_graph(rng, n);
        const double r1 = static_cast<double>(rng.uniform_int(1, 2));
        const SymmetricOperator a =
            heat_semigroup(SymmetricOperator(g.laplacian_matrix()), r1);

        std::vector<int> centers;
        if (rng.uniform() < 0.5) {
            centers.resize(static_cast<std::size_t>(n));
            std::iota(centers.begin(), centers.end(), 0);
        } else {
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);
            perm.resize(static_cast<std::size_t>(rng.uniform_int(1, n)));
            centers = perm;
        }
        const NetPartition part =
            select_net(g, voronoi_partition(g, centers), rng.uniform_int(1, 3));
        const Projection p = cell_projection(part, n);
        const int x = rng.uniform_int(0, n - 1);
        const double radius = static_cast<double>(rng.uniform_int(0, 4));
        const Eigen::VectorXd chi = cutoff_indicator(part, g, x, radius);
        const int steps = rng.uniform_int(1, 4);

        const double tele = telescoping_identity_check(a, p, chi, x, steps);
        bool pass = tele <= 1e-9;
        double metric = tele;

        const Eigen::MatrixXd pm = p.matrix();
        const SymmetricOperator bx(pm * chi.asDiagonal() * a.mat() * chi.asDiagonal() * pm);
        const TopEigenvector top = top_eigenvector(bx);
        if (!top.degenerate) {
            const GainReport gain = gain_identity_check(a, p, chi, part, top.vector);
            pass = pass && gain.residual <= 1e-9 && gain.eps >= -1e-9;
            metric = std::max(metric, gain.residual);
            metric = std::max(metric, -gain.eps);
        }
        res.runs.push_back({"telegain-" + std::to_string(trial), pass, metric});
    }
    res.finalize();
    return res;
}

/// The fixed verification corpus: paths, cycles, complete graphs, seeded
/// random regular graphs, barbells.
inline std::vector<std::pair<std::string, WeightedGraph>> standard_corpus(
    std::uint64_t seed = 20240915ULL) {
    std::vector<std::pair<std::string, WeightedGraph>> c;
    for (int n : {8, 16, 24, 40}) c.push_back({"path-" + std::to_string(n), path_graph(n)});
    for (int n : {8, 16, 25, 40}) c.push_back({"cycle-" + std::to_string(n), cycle_graph(n)});
    for (int n : {5, 8, 12}) c.push_back({"complete-" + std::to_string(n), complete_graph(n)});
    int idx = 0;
    for (auto [n, d] : {std::pair{12, 3}, {16, 3}, {20, 3}, {24, 3}, {10, 4}, {14, 4}, {18, 4}}) {
        Rng rng = trial_rng(seed, idx++);
        c.push_back({"regular-" + std::to_string(d) + "-" + std::to_string(n),
                     random_regular_graph(rng, n, d)});
    }
    c.push_back({"barbell-5-0", barbell_graph(5, 0)});
    c.push_back({"barbell-5-3", barbell_graph(5, 3)});
    c.push_back({"barbell-6-2", barbell_graph(6, 2)});
    c.push_back({"barbell-4-5", barbell_graph(4, 5)});
    return c;
}

/// Full pipeline verdicts over a graph corpus for each requested index.
inline SuiteResult pipeline_corpus_suite(
    const std::vector<std::pair<std::string, WeightedGraph>>& corpus,
    const std::vector<int>& js, const PipelineParams& base = PipelineParams{}) {
    SuiteResult res;
    res.name = "pipeline_corpus";
    for (const auto& [name, g] : corpus) {
        for (int j : js) {
            if (j > g.order()) continue;
            const BoundReport rep = run_pipeline(g, base, j);
            const bool pass = rep.all_ok();
            res.runs.push_back({name + "-j" + std::to_string(j), pass,
                                pass ? 0.0 : 1.0});
        }
    }
    res.finalize();
    return res;
}

}  // namespace multispec
