#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "multispec/errors.hpp"

namespace multispec {

/// Dense real symmetric operator, symmetrized on construction so that
/// entries(i,j) == entries(j,i) holds exactly as stored.
class SymmetricOperator {
public:
    explicit SymmetricOperator(Eigen::MatrixXd m) {
        if (m.rows() != m.cols() || m.rows() < 1)
            throw InvalidOperator("operator must be square with dim >= 1");
        if (!m.allFinite())
            throw InvalidOperator("operator has non-finite entries");
        mat_ = 0.5 * (m + m.transpose()).eval();
    }

    static SymmetricOperator identity(int n) {
        return SymmetricOperator(Eigen::MatrixXd::Identity(n, n));
    }
    static SymmetricOperator zero(int n) {
        return SymmetricOperator(Eigen::MatrixXd::Zero(n, n));
    }

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& mat() const { return mat_; }

    /// Spectral norm (largest |eigenvalue|).
    double operator_norm() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    /// Positive semidefinite up to rounding: lambda_min >= -tol_scale*(1+||A||).
    bool is_psd(double tol_scale = 1e-10) const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
        return ev(0) >= -tol_scale * (1.0 + norm);
    }

private:
    Eigen::MatrixXd mat_;
};

/// Eigenvalues sorted descending with tolerance-grouped multiplicities.
struct Spectrum {
    struct Group {
        int begin;     // index of the first member in values
        int count;     // multiplicity
        double value;  // representative (first member)
    };

    std::vector<double> values;  // non-increasing
    double group_tol = 0.0;
    std::vector<Group> groups;

    int dim() const { return static_cast<int>(values.size()); }

    /// Sorts descending and groups adjacent values differing by <= group_tol.
    /// group_tol < 0 selects the default 1e-8*(1+max|lambda|).
    static Spectrum from_values(std::vector<double> vals, double group_tol) {
        Spectrum s;
        std::sort(vals.begin(), vals.end(), std::greater<double>());
        if (group_tol < 0.0) {
            double m = 0.0;
            for (double v : vals) m = std::max(m, std::abs(v));
            group_tol = 1e-8 * (1.0 + m);
        }
        s.values = std::move(vals);
        s.group_tol = group_tol;
        int i = 0;
        const int n = s.dim();
        while (i < n) {
            int j = i;
            while (j + 1 < n && s.values[j] - s.values[j + 1] <= group_tol) ++j;
            s.groups.push_back({i, j - i + 1, s.values[i]});
            i = j + 1;
        }
        return s;
    }
};

namespace detail {

struct EigenPair {
    Eigen::VectorXd values;   // ascending, Eigen's native order
    Eigen::MatrixXd vectors;  // columns
};

inline EigenPair eigensolve(const SymmetricOperator& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace detail

/// Full eigendecomposition, spectrum only. group_tol < 0 picks the default.
inline Spectrum eigendecompose(const SymmetricOperator& a, double group_tol = -1.0) {
    const auto ep = detail::eigensolve(a);
    std::vector<double> vals(ep.values.data(), ep.values.data() + ep.values.size());
    return Spectrum::from_values(std::move(vals), group_tol);
}

/// Count of eigenvalues within [target - tol, target + tol].
inline int multiplicity(const Spectrum& s, double target, double tol) {
    if (tol < 0.0) throw InvalidParams("multiplicity tolerance must be >= 0");
    int c = 0;
    for (double v : s.values)
        if (v >= target - tol && v <= target + tol) ++c;
    return c;
}

/// Count of eigenvalues in the closed interval [lo, hi].
inline int count_in_window(const Spectrum& s, double lo, double hi) {
    if (lo > hi) throw InvalidWindow("window lower bound exceeds upper bound");
    int c = 0;
    for (double v : s.values)
        if (v >= lo && v <= hi) ++c;
    return c;
}

/// exp(-tL) through the full eigendecomposition. Requires t >= 0 and L PSD
/// (up to the rounding tolerance); the result is the positivity-preserving
/// contraction semigroup of the generator -L.
inline SymmetricOperator heat_semigroup(const SymmetricOperator& l, double t) {
    if (t < 0.0) throw InvalidTime("semigroup time must be >= 0");
    if (!l.is_psd())
        throw NotPositive("semigroup generator must be positive semidefinite");
    if (t == 0.0) return SymmetricOperator::identity(l.dim());
    const auto ep = detail::eigensolve(l);
    Eigen::VectorXd e = (-t * ep.values.array()).exp().matrix();
    return SymmetricOperator(ep.vectors * e.asDiagonal() * ep.vectors.transpose());
}

/// Orthogonal projection P = Id - sum_k v_k v_k^T. The stored basis spans the
/// removed subspace, so corank() == rank(Id - P).
class Projection {
public:
    Projection(int dim, Eigen::MatrixXd basis) : dim_(dim), basis_(std::move(basis)) {
        if (dim_ < 1) throw InvalidParams("projection dimension must be >= 1");
        if (basis_.size() == 0) basis_.resize(dim_, 0);
        if (basis_.rows() != dim_)
            throw DimMismatch("projection basis vectors have wrong length");
        const Eigen::MatrixXd gram = basis_.transpose() * basis_;
        const Eigen::MatrixXd dev =
            gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
        if (basis_.cols() > 0 && dev.cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidParams("projection basis is not orthonormal");
    }

    static Projection identity(int dim) { return Projection(dim, Eigen::MatrixXd(dim, 0)); }

    /// Removes the given coordinate directions.
    static Projection coordinate(int dim, const std::vector<int>& killed) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, static_cast<int>(killed.size()));
        for (int j = 0; j < static_cast<int>(killed.size()); ++j) b(killed[j], j) = 1.0;
        return Projection(dim, b);
    }

    int dim() const { return dim_; }
    int corank() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    Eigen::MatrixXd matrix() const {
        return Eigen::MatrixXd::Identity(dim_, dim_) - basis_ * basis_.transpose();
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
        if (f.size() != dim_) throw DimMismatch("projection applied to wrong-size vector");
        if (basis_.cols() == 0) return f;
        return f - basis_ * (basis_.transpose() * f);
    }

private:
    int dim_;
    Eigen::MatrixXd basis_;  // dim x corank, orthonormal columns
};

/// PAP as a symmetric operator.
inline SymmetricOperator apply_projection(const Projection& p, const SymmetricOperator& a) {
    if (p.dim() != a.dim())
        throw DimMismatch("projection and operator dimensions differ");
    const Eigen::MatrixXd pm = p.matrix();
    return SymmetricOperator(pm * a.mat() * pm);
}

struct InterlaceReport {
    Spectrum alpha;  // spectrum of A, descending
    Spectrum beta;   // spectrum of PAP, descending
    bool holds = false;
    double worst_violation = 0.0;
};

/// Checks alpha_j >= beta_j >= alpha_{j+k} for all j, with k = corank(P) and
/// alpha read as 0 past the dimension. Requires A PSD up to rounding.
inline InterlaceReport interlace_check(const SymmetricOperator& a, const Projection& p) {
    if (p.dim() != a.dim())
        throw DimMismatch("projection and operator dimensions differ");
    if (!a.is_psd())
        throw NotPositive("interlacing requires a positive semidefinite operator");
    InterlaceReport r;
    r.alpha = eigendecompose(a);
    r.beta = eigendecompose(apply_projection(p, a));
    const int n = a.dim();
    const int k = p.corank();
    auto alpha_at = [&](int j) { return j < n ? r.alpha.values[j] : 0.0; };
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        worst = std::max(worst, r.beta.values[j] - r.alpha.values[j]);
        worst = std::max(worst, alpha_at(j + k) - r.beta.values[j]);
    }
    r.worst_violation = worst;
    r.holds = worst <= 1e-9;
    return r;
}

struct TracePowerReport {
    double lhs = 0.0;       // Tr(Q^{2n})
    double rhs = 0.0;       // sum_x ||Q^n e_x||^2
    double residual = 0.0;  // |lhs-rhs| / (1+|lhs|)
};

/// Tr(Q^{2n}) against the coordinate-vector expansion, both by direct matrix
/// arithmetic (no eigensolve on either route).
inline TracePowerReport trace_power_identity(const SymmetricOperator& q, int n) {
    if (n < 1) throw InvalidParams("power index must be >= 1");
    const int d = q.dim();
    Eigen::MatrixXd qn = Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < n; ++i) qn = (qn * q.mat()).eval();
    Eigen::MatrixXd q2n = qn;
    for (int i = 0; i < n; ++i) q2n = (q2n * q.mat()).eval();

    TracePowerReport r;
    r.lhs = q2n.trace();
    for (int x = 0; x < d; ++x) r.rhs += qn.col(x).squaredNorm();
    r.residual = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs));
    return r;
}

/// True iff the j-th smallest eigenvalue (1-based) is <= cap.
inline bool eigenvalue_upper_bound_check(const Spectrum& s, int j, double cap) {
    if (j < 1 || j > s.dim()) throw InvalidIndex("eigenvalue index out of range");
    return s.values[static_cast<std::size_t>(s.dim() - j)] <= cap;
}

}  // namespace multispec
