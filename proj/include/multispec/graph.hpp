#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "multispec/errors.hpp"

namespace multispec {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

/// Undirected weighted multigraph with loops. Weights feed the operators;
/// the metric side (BFS, nets, Voronoi cells) always uses unit edge lengths.
class WeightedGraph {
public:
    WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 1) throw InvalidParams("graph needs at least one vertex");
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (const auto& e : edges_) {
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
                throw InvalidParams("edge endpoint out of range");
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw InvalidParams("edge weight must be positive and finite");
            if (e.u != e.v) {
                adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
                adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
            }
        }
        connected_ = compute_connected();
    }

    int order() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const {
        return adj_[static_cast<std::size_t>(v)];
    }
    bool connected() const { return connected_; }

    /// Loops count 2, per the usual multigraph convention.
    std::vector<int> degrees() const {
        std::vector<int> d(static_cast<std::size_t>(n_), 0);
        for (const auto& e : edges_) {
            if (e.u == e.v) {
                d[static_cast<std::size_t>(e.u)] += 2;
            } else {
                d[static_cast<std::size_t>(e.u)] += 1;
                d[static_cast<std::size_t>(e.v)] += 1;
            }
        }
        return d;
    }

    /// Weighted adjacency; a loop contributes 2w on the diagonal.
    Eigen::MatrixXd adjacency_matrix() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& e : edges_) {
            if (e.u == e.v) {
                a(e.u, e.u) += 2.0 * e.w;
            } else {
                a(e.u, e.v) += e.w;
                a(e.v, e.u) += e.w;
            }
        }
        return a;
    }

    /// Weighted Laplacian D - W assembled edge by edge; loops drop out since
    /// they contribute nothing to the Dirichlet form.
    Eigen::MatrixXd laplacian_matrix() const {
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& e : edges_) {
            if (e.u == e.v) continue;
            l(e.u, e.u) += e.w;
            l(e.v, e.v) += e.w;
            l(e.u, e.v) -= e.w;
            l(e.v, e.u) -= e.w;
        }
        return l;
    }

private:
    bool compute_connected() const {
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int visited = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u : adj_[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    ++visited;
                    stack.push_back(u);
                }
            }
        }
        return visited == n_;
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    bool connected_;
};

// ---- builders --------------------------------------------------------------

inline WeightedGraph path_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return WeightedGraph(n, std::move(e));
}

inline WeightedGraph cycle_graph(int n) {
    if (n < 3) throw InvalidParams("cycle needs at least 3 vertices");
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
    return WeightedGraph(n, std::move(e));
}

inline WeightedGraph complete_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
    return WeightedGraph(n, std::move(e));
}

/// Two complete graphs K_k joined by a path of bridge_len extra vertices
/// (bridge_len = 0 joins them by a single edge).
inline WeightedGraph barbell_graph(int k, int bridge_len) {
    if (k < 3) throw InvalidParams("barbell bells need at least 3 vertices");
    const int n = 2 * k + bridge_len;
    std::vector<Edge> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e.push_back({i, j, 1.0});
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e.push_back({k + i, k + j, 1.0});
    int prev = k - 1;
    for (int b = 0; b < bridge_len; ++b) {
        e.push_back({prev, 2 * k + b, 1.0});
        prev = 2 * k + b;
    }
    e.push_back({prev, k, 1.0});
    return WeightedGraph(n, std::move(e));
}

// ---- shared text format -----------------------------------------------------
//
//   graph <n>
//   u v [w]        one line per edge, 0-based, w > 0 defaults to 1.0
//   measure auto   optional directive for measured-graph loaders

struct ParsedGraph {
    WeightedGraph graph;
    bool measure_auto = false;
};

inline ParsedGraph parse_graph_text(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    bool measure_auto = false;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        std::string head;
        ss >> head;
        if (head == "graph") {
            if (n >= 0) throw ParseError("duplicate graph header", lineno);
            if (!(ss >> n) || n < 1) throw ParseError("invalid vertex count", lineno);
            continue;
        }
        if (head == "measure") {
            std::string mode;
            ss >> mode;
            if (mode != "auto") throw ParseError("unknown measure directive", lineno);
            measure_auto = true;
            continue;
        }
        if (n < 0) throw ParseError("missing 'graph <n>' header", lineno);
        Edge e;
        std::istringstream es(line);
        if (!(es >> e.u >> e.v)) throw ParseError("malformed edge line", lineno);
        if (!(es >> e.w)) e.w = 1.0;
        std::string trailing;
        if (es >> trailing) throw ParseError("trailing tokens on edge line", lineno);
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw ParseError("edge endpoint out of range", lineno);
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw ParseError("edge weight must be positive", lineno);
        edges.push_back(e);
    }
    if (n < 0) throw ParseError("missing 'graph <n>' header", lineno == 0 ? 1 : lineno);
    return ParsedGraph{WeightedGraph(n, std::move(edges)), measure_auto};
}

inline ParsedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file " + path, 0);
    return parse_graph_text(in);
}

inline std::string to_graph_text(const WeightedGraph& g, bool measure_auto = false) {
    std::ostringstream out;
    out << "graph " << g.order() << "\n";
    if (measure_auto) out << "measure auto\n";
    for (const auto& e : g.edges()) {
        out << e.u << " " << e.v;
        if (e.w != 1.0) out << " " << e.w;
        out << "\n";
    }
    return out.str();
}

}  // namespace multispec
