#pragma once

#include <cmath>
#include <vector>

#include "multispec/formulas.hpp"
#include "multispec/graph.hpp"
#include "multispec/spectral.hpp"

namespace multispec {

inline constexpr double kTwoPi = 6.28318530717958647692529;

/// Graph with edge lengths theta, all degrees >= 3 (loops count 2), and the
/// vertex measure mu(i) = 2 pi (d_i - 2).
struct MeasuredGraph {
    WeightedGraph graph;
    std::vector<int> degree;
    std::vector<double> measure;
};

inline MeasuredGraph make_measured(WeightedGraph g) {
    MeasuredGraph m{std::move(g), {}, {}};
    m.degree = m.graph.degrees();
    for (int d : m.degree)
        if (d < 3) throw InvalidOrder("measured graph needs all degrees >= 3");
    m.measure.reserve(m.degree.size());
    for (int d : m.degree) m.measure.push_back(kTwoPi * (d - 2));
    return m;
}

inline MeasuredGraph measured_from_parsed(const ParsedGraph& p) {
    if (!p.measure_auto)
        throw InvalidParams("graph file lacks the 'measure auto' directive");
    return make_measured(p.graph);
}

/// Star with n spokes plus a loop at each leaf, all edge lengths 1. Center
/// degree n, leaf degrees 3; the loops raise leaf degrees without touching
/// the Dirichlet form.
inline MeasuredGraph star_graph(int n) {
    if (n < 3) throw InvalidOrder("star construction needs n >= 3");
    std::vector<Edge> e;
    for (int i = 1; i <= n; ++i) {
        e.push_back({0, i, 1.0});
        e.push_back({i, i, 1.0});
    }
    return make_measured(WeightedGraph(n + 1, std::move(e)));
}

inline int graph_genus(const WeightedGraph& g) {
    return static_cast<int>(g.edges().size()) - g.order() + 1;
}

/// Matrix Q of the Dirichlet energy (1/pi) sum theta_ij |x_i - x_j|^2.
/// Loops contribute nothing; constants lie in the kernel.
inline SymmetricOperator q_theta_form(const MeasuredGraph& m) {
    return SymmetricOperator(m.graph.laplacian_matrix() / 3.14159265358979323846);
}

/// Eigenvalues of the energy form on the measured space: Q v = zeta M v with
/// M = diag(measure), solved through the symmetric reduction
/// M^(-1/2) Q M^(-1/2).
inline Spectrum generalized_spectrum(const MeasuredGraph& m, double group_tol = -1.0) {
    const int n = m.graph.order();
    Eigen::VectorXd inv_sqrt(n);
    for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(m.measure[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXd q = q_theta_form(m).mat();
    const Eigen::MatrixXd sym =
        inv_sqrt.asDiagonal() * q * inv_sqrt.asDiagonal();
    return eigendecompose(SymmetricOperator(sym), group_tol);
}

/// Spectrum of the combinatorial operator (Dx)_i = (d_i-2)^{-1} sum_{j~i}
/// (x_i - x_j), through the symmetric similar form D'^(-1/2) L D'^(-1/2).
/// Only defined for unit edge lengths.
inline Spectrum cdv_operator_spectrum(const MeasuredGraph& m, double group_tol = -1.0) {
    for (const auto& e : m.graph.edges())
        if (e.w != 1.0)
            throw Unsupported("combinatorial operator is defined for unit edge lengths");
    const int n = m.graph.order();
    Eigen::VectorXd inv_sqrt(n);
    for (int i = 0; i < n; ++i)
        inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(m.degree[static_cast<std::size_t>(i)] - 2));
    const Eigen::MatrixXd sym =
        inv_sqrt.asDiagonal() * m.graph.laplacian_matrix() * inv_sqrt.asDiagonal();
    return eigendecompose(SymmetricOperator(sym), group_tol);
}

struct ConstructionReport {
    int n = 0;
    int genus = 0;
    Spectrum spectrum;      // generalized eigenvalues of the energy form
    Spectrum cdv_spectrum;  // combinatorial operator eigenvalues
    int near_degenerate_count = 0;
    int chr_target = 0;
    double spectral_ratio = 0.0;  // generalized / combinatorial, nonzero part
};

/// Full star-construction report: genus n, both spectra, the multiplicity of
/// the second-smallest distinct generalized eigenvalue, and the chromatic
/// conjecture target at that genus.
inline ConstructionReport construction_report(int n) {
    const MeasuredGraph g = star_graph(n);
    ConstructionReport rep;
    rep.n = n;
    rep.genus = graph_genus(g.graph);
    rep.spectrum = generalized_spectrum(g);
    rep.cdv_spectrum = cdv_operator_spectrum(g);

    // groups are descending; the second-smallest distinct value is the
    // next-to-last group
    const auto& groups = rep.spectrum.groups;
    if (groups.size() >= 2)
        rep.near_degenerate_count = groups[groups.size() - 2].count;
    rep.chr_target = cdv_conjecture_target(rep.genus).value;

    // observed global ratio between the two spectra on the largest eigenvalue
    const double top_gen = rep.spectrum.values.front();
    const double top_cdv = rep.cdv_spectrum.values.front();
    rep.spectral_ratio = top_cdv > 0.0 ? top_gen / top_cdv : 0.0;
    return rep;
}

}  // namespace multispec
