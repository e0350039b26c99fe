#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "multispec/graph.hpp"
#include "multispec/spectral.hpp"

namespace multispec {

/// Marker for vertices unreachable from the BFS source.
inline constexpr int kUnreachable = -1;

/// Exact hop distances from src (unit edge lengths, loops ignored).
inline std::vector<int> bfs_distance(const WeightedGraph& g, int src) {
    if (src < 0 || src >= g.order()) throw InvalidIndex("BFS source out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.order()), kUnreachable);
    std::deque<int> queue{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : g.neighbors(v)) {
            if (dist[static_cast<std::size_t>(u)] == kUnreachable) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

inline int graph_diameter(const WeightedGraph& g) {
    if (!g.connected()) throw NotConnected();
    int diam = 0;
    for (int v = 0; v < g.order(); ++v) {
        const auto d = bfs_distance(g, v);
        diam = std::max(diam, *std::max_element(d.begin(), d.end()));
    }
    return diam;
}

/// Greedy maximal r-separated set: pairwise hop distance >= r, and maximal by
/// inclusion, hence an r-net. The visit order is an explicit input so
/// experiments are reproducible; empty means ascending vertex id.
inline std::vector<int> maximal_separated_set(const WeightedGraph& g, int r,
                                              std::vector<int> seed_order = {}) {
    if (r < 1) throw InvalidParams("separation radius must be >= 1");
    if (!g.connected()) throw NotConnected();
    if (seed_order.empty()) {
        seed_order.resize(static_cast<std::size_t>(g.order()));
        std::iota(seed_order.begin(), seed_order.end(), 0);
    }
    // min distance from each vertex to the chosen set so far
    std::vector<int> mind(static_cast<std::size_t>(g.order()),
                          std::numeric_limits<int>::max());
    std::vector<int> chosen;
    for (int v : seed_order) {
        if (v < 0 || v >= g.order()) throw InvalidIndex("seed order vertex out of range");
        if (mind[static_cast<std::size_t>(v)] < r) continue;
        chosen.push_back(v);
        const auto d = bfs_distance(g, v);
        for (int u = 0; u < g.order(); ++u)
            mind[static_cast<std::size_t>(u)] =
                std::min(mind[static_cast<std::size_t>(u)], d[static_cast<std::size_t>(u)]);
    }
    return chosen;
}

/// Voronoi cells around a center set plus the selected net. Cells partition
/// the vertex set; ties go to the smallest center index so the cell indicator
/// functions have disjoint supports.
struct NetPartition {
    int radius = 0;                   // net radius used by select_net
    std::vector<int> centers;         // cell k is centered at centers[k]
    std::vector<int> net_indices;     // selected cell indices (into centers)
    std::vector<int> cell_of;         // vertex -> cell index
    std::vector<std::vector<int>> cell_members;
};

inline NetPartition voronoi_partition(const WeightedGraph& g, std::vector<int> centers) {
    if (centers.empty()) throw InvalidParams("Voronoi partition needs at least one center");
    if (!g.connected()) throw NotConnected();
    NetPartition p;
    p.centers = std::move(centers);
    const int m = static_cast<int>(p.centers.size());
    std::vector<std::vector<int>> dist;
    dist.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const int c = p.centers[static_cast<std::size_t>(k)];
        if (c < 0 || c >= g.order()) throw InvalidIndex("center out of range");
        dist.push_back(bfs_distance(g, c));
    }
    p.cell_of.assign(static_cast<std::size_t>(g.order()), 0);
    p.cell_members.assign(static_cast<std::size_t>(m), {});
    for (int v = 0; v < g.order(); ++v) {
        int best = 0;
        for (int k = 1; k < m; ++k)
            if (dist[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)] <
                dist[static_cast<std::size_t>(best)][static_cast<std::size_t>(v)])
                best = k;
        p.cell_of[static_cast<std::size_t>(v)] = best;
        p.cell_members[static_cast<std::size_t>(best)].push_back(v);
    }
    return p;
}

/// Selects the net cells: take a greedy r-net and mark the cell containing
/// each of its points. A graph of diameter <= r admits a net of size 1, so
/// that case short-circuits to the single cell containing the first seed.
inline NetPartition select_net(const WeightedGraph& g, NetPartition p, int r,
                               std::vector<int> seed_order = {}) {
    if (r < 1) throw InvalidParams("net radius must be >= 1");
    p.radius = r;
    p.net_indices.clear();
    const int seed0 = seed_order.empty() ? 0 : seed_order.front();
    std::vector<int> net_points;
    if (graph_diameter(g) <= r) {
        net_points = {seed0};
    } else {
        net_points = maximal_separated_set(g, r, std::move(seed_order));
    }
    std::vector<char> taken(p.centers.size(), 0);
    for (int x : net_points) {
        const int k = p.cell_of[static_cast<std::size_t>(x)];
        if (!taken[static_cast<std::size_t>(k)]) {
            taken[static_cast<std::size_t>(k)] = 1;
            p.net_indices.push_back(k);
        }
    }
    std::sort(p.net_indices.begin(), p.net_indices.end());
    return p;
}

/// Orthogonal projection onto the complement of the normalized indicator of
/// each net cell. Supports are disjoint so the basis is orthonormal exactly.
inline Projection cell_projection(const NetPartition& p, int dim) {
    if (p.net_indices.empty()) throw InvalidParams("net selection is empty");
    Eigen::MatrixXd basis =
        Eigen::MatrixXd::Zero(dim, static_cast<int>(p.net_indices.size()));
    for (int j = 0; j < static_cast<int>(p.net_indices.size()); ++j) {
        const auto& cell =
            p.cell_members[static_cast<std::size_t>(p.net_indices[static_cast<std::size_t>(j)])];
        if (cell.empty()) throw InvalidPartition("net cell is empty");
        const double a = 1.0 / std::sqrt(static_cast<double>(cell.size()));
        for (int v : cell) {
            if (v < 0 || v >= dim) throw DimMismatch("cell member outside operator dimension");
            basis(v, j) = a;
        }
    }
    return Projection(dim, std::move(basis));
}

/// Exact discrete Cheeger constant min_{0<|S|<=n/2} w(boundary S)/|S| by Gray-code
/// enumeration of all subsets. Rejected above 24 vertices.
inline double cheeger_constant(const WeightedGraph& g) {
    const int n = g.order();
    if (n > 24) throw TooLargeForExact("Cheeger enumeration capped at 24 vertices");
    if (n < 2) throw InvalidParams("Cheeger constant needs at least 2 vertices");
    if (!g.connected()) throw NotConnected();

    // weighted incidence, loops excluded (they never cross a cut)
    std::vector<std::vector<std::pair<int, double>>> inc(static_cast<std::size_t>(n));
    for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        inc[static_cast<std::size_t>(e.u)].push_back({e.v, e.w});
        inc[static_cast<std::size_t>(e.v)].push_back({e.u, e.w});
    }

    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    double cut = 0.0;
    int size = 0;
    double best = std::numeric_limits<double>::infinity();
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        // Gray code: flip the vertex given by the lowest set bit of i
        const int v = static_cast<int>(std::countr_zero(i));
        const bool entering = !in_s[static_cast<std::size_t>(v)];
        for (const auto& [u, w] : inc[static_cast<std::size_t>(v)]) {
            const bool u_in = in_s[static_cast<std::size_t>(u)];
            if (entering)
                cut += u_in ? -w : w;
            else
                cut += u_in ? w : -w;
        }
        in_s[static_cast<std::size_t>(v)] = entering;
        size += entering ? 1 : -1;
        if (size >= 1 && 2 * size <= n)
            best = std::min(best, cut / static_cast<double>(size));
    }
    return best;
}

/// delta' = max(sqrt(delta)/sqrt(20), delta/(4 sqrt(|b|))): the isoperimetric
/// floor a spectral gap delta forces through the Buser inequality on a surface
/// with curvature >= b.
inline double buser_gap_to_separation(double delta, double b) {
    if (!(delta > 0.0)) throw InvalidParams("spectral gap must be positive");
    if (!(b < 0.0)) throw InvalidParams("curvature lower bound must be negative");
    return std::max(std::sqrt(delta) / std::sqrt(20.0), delta / (4.0 * std::sqrt(-b)));
}

}  // namespace multispec
