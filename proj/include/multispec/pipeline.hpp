#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "multispec/graph.hpp"
#include "multispec/net.hpp"
#include "multispec/spectral.hpp"

namespace multispec {

/// Knobs of the trace-method run. r1/r2 <= 0 request the derived defaults
/// r1 = c*log log n, r2 = c*log n (each clamped below at 1); graphs smaller
/// than 3 vertices require explicit values.
struct PipelineParams {
    double c = 1.0;
    double chi_cut = 0.0;   // cutoff radius scale (0 = no cutoff stage)
    double heat_cut = 0.0;  // kernel truncation scale, recorded for reports
    double r1 = 0.0;
    double r2 = 0.0;
    double t_unit = 1.0;    // evolved operator is exp(-r1*t_unit*L)
    double group_tol = -1.0;  // <0 = default 1e-8*(1+max|lambda|)
    int radius_override = 0;  // forces the net radius; 0 = ceil(r1)

    void resolve(int model_size) {
        if (!(c > 0.0) || !(t_unit > 0.0))
            throw InvalidParams("pipeline scale parameters must be positive");
        if (r1 <= 0.0 || r2 <= 0.0) {
            if (model_size < 3)
                throw InvalidParams(
                    "derived r1/r2 need model size >= 3; pass explicit values");
            const double n = static_cast<double>(model_size);
            if (r1 <= 0.0) r1 = std::max(1.0, c * std::log(std::log(n)));
            if (r2 <= 0.0) r2 = std::max(r1, c * std::log(n));
        }
        if (r1 < 1.0) throw InvalidParams("r1 must be >= 1");
        if (r2 < r1) throw InvalidParams("r2 must be >= r1");
    }
};

struct BoundReport {
    int m = 0;             // multiplicity of the target eigenvalue of exp(-r1 L)
    int m_prime = 0;       // same, for P exp(-r1 L) P
    int rank_deficit = 0;  // rank(Id - P)
    double trace_value = 0.0;
    int n_steps = 0;
    double r1 = 0.0;
    double r2 = 0.0;
    int net_radius = 0;
    int j = 0;
    double target = 0.0;        // the tracked eigenvalue of exp(-r1 L)
    double lambda_j = 0.0;      // matching Laplacian eigenvalue
    double group_tol = 0.0;
    bool trace_bound_ok = false;
    bool interlace_ok = false;
    bool final_inequality_ok = false;
    bool all_ok() const { return trace_bound_ok && interlace_ok && final_inequality_ok; }
};

/// Diagonal 0/1 cutoff supported on the union of whole cells meeting the ball
/// B(x, radius); the support therefore contains the ball, and the cutoff
/// commutes with any projection built from the same cells.
inline Eigen::VectorXd cutoff_indicator(const NetPartition& p, const WeightedGraph& g,
                                        int x, double radius) {
    if (radius < 0.0) throw InvalidParams("cutoff radius must be >= 0");
    if (x < 0 || x >= g.order()) throw InvalidIndex("cutoff base vertex out of range");
    const auto dist = bfs_distance(g, x);
    Eigen::VectorXd chi = Eigen::VectorXd::Zero(g.order());
    for (const auto& cell : p.cell_members) {
        bool meets = false;
        for (int v : cell) {
            if (dist[static_cast<std::size_t>(v)] != kUnreachable &&
                dist[static_cast<std::size_t>(v)] <= radius) {
                meets = true;
                break;
            }
        }
        if (meets)
            for (int v : cell) chi(v) = 1.0;
    }
    return chi;
}

namespace detail {

inline void require_commuting_cutoff(const Projection& p, const Eigen::VectorXd& chi,
                                     double tol) {
    const Eigen::MatrixXd pm = p.matrix();
    const Eigen::MatrixXd comm =
        chi.asDiagonal() * pm - pm * Eigen::MatrixXd(chi.asDiagonal());
    if (comm.cwiseAbs().maxCoeff() > tol)
        throw PreconditionFailed("cutoff does not commute with the projection");
}

}  // namespace detail

/// Residual of the telescoping expansion of (PAP)^n - (P chi A chi P)^n
/// applied to the coordinate vector at x, evaluated by direct matrix
/// arithmetic. Requires [P,chi]=0 and chi e_x = e_x.
inline double telescoping_identity_check(const SymmetricOperator& a, const Projection& p,
                                         const Eigen::VectorXd& chi, int x, int n) {
    if (n < 1) throw InvalidParams("telescoping power must be >= 1");
    if (a.dim() != p.dim() || chi.size() != a.dim())
        throw DimMismatch("telescoping operands have mismatched dimensions");
    if (x < 0 || x >= a.dim()) throw InvalidIndex("base vertex out of range");
    if (chi(x) != 1.0)
        throw PreconditionFailed("base vertex lies outside the cutoff support");
    detail::require_commuting_cutoff(p, chi, 1e-10);

    const Eigen::MatrixXd pm = p.matrix();
    const Eigen::MatrixXd am = a.mat();
    const Eigen::MatrixXd chim = chi.asDiagonal();
    const Eigen::MatrixXd pap = pm * am * pm;
    const Eigen::MatrixXd pcacp = pm * chim * am * chim * pm;
    const Eigen::MatrixXd pca = pm * chim * am;
    const Eigen::MatrixXd ap = am * pm;
    const Eigen::MatrixXd one_minus_chi =
        Eigen::MatrixXd::Identity(a.dim(), a.dim()) - chim;

    Eigen::VectorXd ex = Eigen::VectorXd::Zero(a.dim());
    ex(x) = 1.0;

    auto power_apply = [&](const Eigen::MatrixXd& m, int k, Eigen::VectorXd v) {
        for (int i = 0; i < k; ++i) v = (m * v).eval();
        return v;
    };

    const Eigen::VectorXd lhs = power_apply(pap, n, ex) - power_apply(pcacp, n, ex);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.dim());
    for (int l = 0; l < n; ++l) {
        Eigen::VectorXd term = power_apply(ap, l + 1, ex);
        term = pm * (one_minus_chi * term);
        term = power_apply(pca, n - l - 1, term);
        rhs += term;
    }
    return (lhs - rhs).norm() / (1.0 + lhs.norm());
}

struct TopEigenvector {
    double value = 0.0;
    Eigen::VectorXd vector;
    bool degenerate = false;  // zero operator: any unit vector qualifies
};

/// Largest eigenvalue and a unit top eigenvector of a PSD compression
/// B = P chi A chi P. For a nonzero top eigenvalue the eigenvector is checked
/// to be fixed by both P and chi.
inline TopEigenvector top_eigenvector(const SymmetricOperator& bx) {
    if (!bx.is_psd())
        throw NotPositive("top eigenvector extraction requires a PSD operator");
    const auto ep = detail::eigensolve(bx);
    TopEigenvector t;
    t.value = ep.values(ep.values.size() - 1);
    t.vector = ep.vectors.col(ep.values.size() - 1);
    const double scale = bx.operator_norm();
    if (t.value <= 1e-14 * (1.0 + scale)) {
        t.degenerate = true;
        t.value = std::max(t.value, 0.0);
    }
    return t;
}

struct GainReport {
    double eps = 0.0;
    double term_interaction = 0.0;  // 4 <A phi_+, A phi_->
    double term_cells = 0.0;        // sum over net cells meeting the cutoff
    double term_outside = 0.0;      // ||(1-chi) A phi||^2
    double residual = 0.0;
};

/// Exact decomposition of the defect ||A|phi|||^2 - ||P chi A phi||^2 into the
/// interaction, net-cell and outside-cutoff terms; each is nonnegative when A
/// has nonnegative entries. Requires P phi = phi and chi phi = phi.
inline GainReport gain_identity_check(const SymmetricOperator& a, const Projection& p,
                                      const Eigen::VectorXd& chi, const NetPartition& part,
                                      const Eigen::VectorXd& phi) {
    if (a.dim() != p.dim() || chi.size() != a.dim() || phi.size() != a.dim())
        throw DimMismatch("gain operands have mismatched dimensions");
    if ((p.apply(phi) - phi).norm() > 1e-8)
        throw PreconditionFailed("phi is not fixed by the projection");
    if ((chi.asDiagonal() * phi - phi).norm() > 1e-8)
        throw PreconditionFailed("phi is not fixed by the cutoff");
    if (a.mat().minCoeff() < -1e-12)
        throw PreconditionFailed("gain decomposition needs entrywise-nonnegative A");

    const Eigen::VectorXd phi_plus = phi.cwiseMax(0.0);
    const Eigen::VectorXd phi_minus = (-phi).cwiseMax(0.0);
    const Eigen::VectorXd a_abs = a.mat() * (phi_plus + phi_minus);
    const Eigen::VectorXd a_phi = a.mat() * phi;
    const Eigen::VectorXd pca_phi = p.apply(chi.asDiagonal() * a_phi);

    GainReport r;
    r.eps = a_abs.squaredNorm() - pca_phi.squaredNorm();
    r.term_interaction = 4.0 * (a.mat() * phi_plus).dot(a.mat() * phi_minus);
    r.term_outside =
        ((Eigen::VectorXd::Ones(a.dim()) - chi).asDiagonal() * a_phi).squaredNorm();
    // net cells whose support lies inside the cutoff (cell indicators are
    // either fully inside or fully outside, cutoffs being unions of cells)
    for (int k : part.net_indices) {
        const auto& cell = part.cell_members[static_cast<std::size_t>(k)];
        if (cell.empty()) throw InvalidPartition("net cell is empty");
        if (chi(cell.front()) != 1.0) continue;
        double dot_plus = 0.0, dot_minus = 0.0;
        const double amp = 1.0 / std::sqrt(static_cast<double>(cell.size()));
        for (int v : cell) {
            dot_plus += amp * (a.mat().row(v).dot(phi_plus));
            dot_minus += amp * (a.mat().row(v).dot(phi_minus));
        }
        const double diff = dot_plus - dot_minus;
        r.term_cells += diff * diff;
    }
    r.residual = std::abs(r.eps - (r.term_interaction + r.term_cells + r.term_outside)) /
                 (1.0 + std::abs(r.eps));
    return r;
}

/// Cross-term magnitude |<A_t |phi_x1|, |phi_x2|>| between the top eigenvectors
/// of the two localized compressions. Cutoff radii come from the partition's
/// own radius field; the supports must be disjoint.
inline double far_support_decay_probe(const SymmetricOperator& a_t, const WeightedGraph& g,
                                      int x1, int x2, const NetPartition& part) {
    if (x1 == x2) throw PreconditionFailed("probe endpoints must differ");
    const double radius = static_cast<double>(part.radius);
    const Eigen::VectorXd chi1 = cutoff_indicator(part, g, x1, radius);
    const Eigen::VectorXd chi2 = cutoff_indicator(part, g, x2, radius);
    if ((chi1.array() * chi2.array()).maxCoeff() > 0.0)
        throw PreconditionFailed("cutoff supports overlap");
    const Projection p = cell_projection(part, g.order());
    auto compress = [&](const Eigen::VectorXd& chi) {
        const Eigen::MatrixXd pm = p.matrix();
        return SymmetricOperator(pm * chi.asDiagonal() * a_t.mat() * chi.asDiagonal() * pm);
    };
    const TopEigenvector t1 = top_eigenvector(compress(chi1));
    const TopEigenvector t2 = top_eigenvector(compress(chi2));
    return std::abs((a_t.mat() * t1.vector.cwiseAbs()).dot(t2.vector.cwiseAbs()));
}

struct AssembledConstants {
    double chi_cut = 0.0;
    double heat_cut = 0.0;
    double c = 0.0;
};

/// Smallest cutoff scales on a half-integer grid satisfying the coupled
/// inequality system, then the largest admissible net-scale constant:
///   chi^2/32  >= max(5|b| + 2 chi sqrt|b| + chi, 32 sqrt|b| + 16, -4 log C2 + 1)
///   heat^2/64 >= |b| + 25(1+|b|)(1+heat) - 2 log C2,  heat >= max(8 sqrt|b|+4, 16)
///   c = 1 / (4 (3 chi sqrt|b| - 4 log C2 + 25(1+|b|)(1+heat)))
inline AssembledConstants assemble_constants(double b, double c2) {
    if (!(b < 0.0)) throw InvalidParams("curvature lower bound must be negative");
    if (!(c2 > 0.0 && c2 < 1.0)) throw InvalidParams("C2 must lie in (0,1)");
    const double ab = -b;
    const double sb = std::sqrt(ab);
    const double log_c2 = std::log(c2);

    auto chi_ok = [&](double chi) {
        const double lhs = chi * chi / 32.0;
        return lhs >= 5.0 * ab + 2.0 * chi * sb + chi && lhs >= 32.0 * sb + 16.0 &&
               lhs >= -4.0 * log_c2 + 1.0;
    };
    auto heat_ok = [&](double heat) {
        return heat * heat / 64.0 >= ab + 25.0 * (1.0 + ab) * (1.0 + heat) - 2.0 * log_c2 &&
               heat >= std::max(8.0 * sb + 4.0, 16.0);
    };

    AssembledConstants out;
    for (out.chi_cut = 0.5; !chi_ok(out.chi_cut); out.chi_cut += 0.5) {}
    for (out.heat_cut = 0.5; !heat_ok(out.heat_cut); out.heat_cut += 0.5) {}
    out.c = 1.0 / (4.0 * (3.0 * out.chi_cut * sb - 4.0 * log_c2 +
                          25.0 * (1.0 + ab) * (1.0 + out.heat_cut)));
    return out;
}

/// End-to-end run on a finite model: L = D - W, A = exp(-r1 t_unit L),
/// multiplicity m at the group of exp(-r1 t_unit lambda_j), net projection P
/// with radius ceil(r1), multiplicity m' of the same target in PAP, trace of
/// (PAP)^{2n} with n = floor(r2/r1)+1, and the three verdicts.
///
/// centers_override replaces the default maximal 1-separated center set (all
/// vertices, singleton cells) with an explicit Voronoi center list.
inline BoundReport run_pipeline(const WeightedGraph& g, PipelineParams params, int j,
                                const std::vector<int>& centers_override = {}) {
    if (!g.connected()) throw NotConnected();
    if (j < 2) throw InvalidParams("target index must be >= 2");
    if (j > g.order()) throw InvalidIndex("target index exceeds model dimension");
    params.resolve(g.order());

    const SymmetricOperator lap{g.laplacian_matrix()};
    const SymmetricOperator a = heat_semigroup(lap, params.r1 * params.t_unit);
    const Spectrum spec_a = eigendecompose(a, params.group_tol);

    BoundReport rep;
    rep.j = j;
    rep.r1 = params.r1;
    rep.r2 = params.r2;
    rep.group_tol = spec_a.group_tol;

    // Laplacian eigenvalues ascend exactly as the semigroup eigenvalues
    // descend, so the j-th smallest of L is the j-th largest of A.
    rep.target = spec_a.values[static_cast<std::size_t>(j - 1)];
    rep.lambda_j = -std::log(rep.target) / (params.r1 * params.t_unit);
    rep.m = multiplicity(spec_a, rep.target, spec_a.group_tol);

    std::vector<int> centers = centers_override;
    if (centers.empty()) {
        centers.resize(static_cast<std::size_t>(g.order()));
        std::iota(centers.begin(), centers.end(), 0);
    }
    rep.net_radius = params.radius_override > 0 ? params.radius_override
                                                : static_cast<int>(std::ceil(params.r1));
    const NetPartition part =
        select_net(g, voronoi_partition(g, std::move(centers)), rep.net_radius);
    const Projection p = cell_projection(part, g.order());
    rep.rank_deficit = p.corank();

    const SymmetricOperator pap = apply_projection(p, a);
    const Spectrum spec_pap = eigendecompose(pap, spec_a.group_tol);
    rep.m_prime = multiplicity(spec_pap, rep.target, spec_a.group_tol);

    rep.n_steps = static_cast<int>(std::floor(params.r2 / params.r1)) + 1;
    rep.trace_value = 0.0;
    for (double beta : spec_pap.values)
        rep.trace_value += std::pow(beta, 2 * rep.n_steps);

    // trace step: m' beta^{2n} <= Tr((PAP)^{2n}) with beta the grouped PAP
    // eigenvalue nearest the target
    if (rep.m_prime == 0) {
        rep.trace_bound_ok = true;
    } else {
        double beta = spec_pap.values.front();
        for (double v : spec_pap.values)
            if (std::abs(v - rep.target) < std::abs(beta - rep.target)) beta = v;
        rep.trace_bound_ok =
            rep.m_prime * std::pow(beta, 2 * rep.n_steps) <= rep.trace_value + 1e-9;
    }
    rep.interlace_ok = interlace_check(a, p).holds;
    rep.final_inequality_ok = rep.m <= rep.m_prime + rep.rank_deficit;
    return rep;
}

}  // namespace multispec
