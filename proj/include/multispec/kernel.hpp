#pragma once

// Radial heat kernel of the constant-curvature model plane, evaluated exactly
// by quadrature of the classical one-dimensional integral representation, plus
// the bound shapes it is certified against (two-sided Davies-type sandwich,
// L1 tail outside a linearly growing ball, variation ratios at scale ~t).
//
// Everything kernel-valued is computed and reported in the log domain: the
// certification grids reach exp(-eta^2/(4t)) factors far below double
// underflow (eta=40, t=1 already gives e^-400).

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "multispec/errors.hpp"
#include "multispec/quadrature.hpp"

namespace multispec {

struct ModelPlaneParams {
    double curvature = -1.0;  // K < 0
    int quad_points = 128;    // nodes of the first quadrature pass
    double quad_cutoff = 0.0; // explicit upper integration limit in the radial
                              // variable; 0 = automatic (tail below 1e-12 of peak)

    void validate() const {
        if (!(curvature < 0.0)) throw InvalidParams("model curvature must be negative");
        if (quad_points < 64) throw InvalidParams("quadrature needs at least 64 points");
    }
};

namespace detail {

inline double log_sinh(double x) {
    // sinh never overflows this way; accurate down to x -> 0+
    if (x < 1e-4) return std::log(x) + x * x / 6.0;
    return x + std::log1p(-std::exp(-2.0 * x)) - 0.6931471805599453094172321;
}

/// log( sinh(y)/y ) for y = k*u^2/2, smooth through y = 0.
inline double log_sinhc(double y) {
    if (y < 1e-8) return y * y / 6.0;
    return log_sinh(y) - std::log(y);
}

/// log of the radial heat kernel at distance eta on the plane of curvature
/// -k^2, via the integral representation with the substitution s = eta + u^2
/// (which removes the inverse-square-root endpoint singularity). The Gaussian
/// peak factor exp(-eta^2/(4t)) is kept outside the integral.
inline double log_radial_kernel(double k, double t, double eta,
                                const ModelPlaneParams& params) {
    if (!(t > 0.0)) throw InvalidParams("kernel time must be positive");
    if (eta < 0.0) throw InvalidParams("kernel radius must be >= 0");

    auto log_g = [&](double u) {
        const double u2 = u * u;
        const double s_plus = k * (eta + 0.5 * u2);  // k*(s+eta)/2 at s = eta+u^2
        double lg = 0.6931471805599453 + std::log(eta + u2) -
                    u2 * (2.0 * eta + u2) / (4.0 * t) - 0.5 * std::log(k) -
                    0.5 * log_sinh(s_plus) - 0.5 * log_sinhc(0.5 * k * u2);
        return lg;
    };

    double u_max;
    if (params.quad_cutoff > 0.0) {
        if (params.quad_cutoff <= eta)
            throw InvalidParams("explicit quadrature cutoff below evaluation radius");
        u_max = std::sqrt(params.quad_cutoff - eta);
    } else {
        // drop of 60 e-folds in u^2(2eta+u^2)/(4t) + k u^2/4 relative to u=0
        const double b = eta / (2.0 * t) + 0.25 * k;
        const double v = 2.0 * t * (-b + std::sqrt(b * b + 60.0 / t));
        u_max = 1.1 * std::sqrt(std::max(v, 1e-6)) + 1.0;
    }

    const int initial_panels = std::max(4, params.quad_points / 32);
    const double log_j = integrate_log(log_g, 0.0, u_max, 1e-10, initial_panels);

    const double log_4pit = std::log(4.0 * 3.14159265358979323846 * t);
    return 0.5 * 0.6931471805599453 + std::log(k) - 1.5 * log_4pit - k * k * t / 4.0 -
           eta * eta / (4.0 * t) + log_j;
}

}  // namespace detail

/// log k_t(eta) on the hyperbolic plane (curvature -1).
inline double log_h2_kernel(double t, double eta,
                            const ModelPlaneParams& params = ModelPlaneParams{}) {
    params.validate();
    return detail::log_radial_kernel(1.0, t, eta, params);
}

/// k_t(eta) on the hyperbolic plane; underflows to 0 where log < -745.
inline double h2_kernel(double t, double eta,
                        const ModelPlaneParams& params = ModelPlaneParams{}) {
    return std::exp(log_h2_kernel(t, eta, params));
}

/// Curvature-K kernel through the rescaling |K| k^{H2}(|K| t, sqrt|K| eta).
inline double log_model_kernel(double curvature_k, double t, double eta,
                               const ModelPlaneParams& params = ModelPlaneParams{}) {
    if (!(curvature_k < 0.0)) throw InvalidParams("model curvature must be negative");
    const double ak = -curvature_k;
    return std::log(ak) + detail::log_radial_kernel(1.0, ak * t, std::sqrt(ak) * eta, params);
}

/// Same kernel by direct quadrature with the curvature inside the integrand
/// (independent evaluation route; used to certify the rescaling identity).
inline double log_model_kernel_direct(double curvature_k, double t, double eta,
                                      const ModelPlaneParams& params = ModelPlaneParams{}) {
    if (!(curvature_k < 0.0)) throw InvalidParams("model curvature must be negative");
    return detail::log_radial_kernel(std::sqrt(-curvature_k), t, eta, params);
}

/// Volume element factor of the geodesic sphere of radius s: its total measure
/// is 2 pi sinh(sqrt|K| s)/sqrt|K|.
inline double log_sphere_measure(double curvature_k, double s) {
    const double sk = std::sqrt(-curvature_k);
    return std::log(2.0 * 3.14159265358979323846 / sk) + detail::log_sinh(sk * s);
}

/// Total mass of the kernel at time t (should be 1 by stochastic completeness).
inline double kernel_total_mass(double curvature_k, double t,
                                const ModelPlaneParams& params = ModelPlaneParams{}) {
    const double sk = std::sqrt(-curvature_k);
    const double s_up = 2.0 * t * (sk + std::sqrt(sk * sk + 55.0 / t)) + 5.0;
    const double log_mass = integrate_log(
        [&](double s) {
            return log_model_kernel(curvature_k, t, s, params) +
                   log_sphere_measure(curvature_k, s);
        },
        1e-12, s_up, 1e-9, 8);
    return std::exp(log_mass);
}

/// Radial convolution value int k_t(r) k_s(r) dvol = k_{t+s}(0).
inline double kernel_semigroup_convolution(double curvature_k, double t, double s,
                                           const ModelPlaneParams& params = ModelPlaneParams{}) {
    const double sk = std::sqrt(-curvature_k);
    const double tm = std::min(t, s);
    const double r_up = 2.0 * tm * (sk + std::sqrt(sk * sk + 55.0 / tm)) + 5.0;
    const double log_conv = integrate_log(
        [&](double r) {
            return log_model_kernel(curvature_k, t, r, params) +
                   log_model_kernel(curvature_k, s, r, params) +
                   log_sphere_measure(curvature_k, r);
        },
        1e-12, r_up, 1e-9, 8);
    return std::exp(log_conv);
}

// ---- bound shapes ------------------------------------------------------------

/// Lower-bound shape g1(t,eta) = (1/t) (1+eta)/(1+eta+t)^(1/2)
///                               exp(-t/4 - eta/2 - eta^2/(4t)).
inline double log_davies_lower(double t, double eta) {
    if (!(t > 0.0)) throw InvalidParams("time must be positive");
    if (eta < 0.0) throw InvalidParams("radius must be >= 0");
    return -std::log(t) + std::log1p(eta) - 0.5 * std::log1p(eta + t) - t / 4.0 -
           eta / 2.0 - eta * eta / (4.0 * t);
}

inline double davies_lower(double t, double eta) {
    return std::exp(log_davies_lower(t, eta));
}

/// Scaled lower-bound shape on the curvature-K plane:
/// g_|K|(t,eta) = |K| g1(|K| t, sqrt|K| eta).
inline double log_davies_lower_scaled(double curvature_k, double t, double eta) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    const double ak = -curvature_k;
    return std::log(ak) + log_davies_lower(ak * t, std::sqrt(ak) * eta);
}

/// Upper-bound shape (1/t)(1 + d^2/t) exp(-d^2/(4t)).
inline double log_gaussian_upper(double t, double d) {
    if (!(t > 0.0)) throw InvalidParams("time must be positive");
    if (d < 0.0) throw InvalidParams("distance must be >= 0");
    return -std::log(t) + std::log1p(d * d / t) - d * d / (4.0 * t);
}

inline double gaussian_upper(double t, double d) {
    return std::exp(log_gaussian_upper(t, d));
}

/// Hyperbolic ball volume (4 pi/|K|) sinh^2(sqrt|K| r / 2).
inline double ball_volume(double curvature_k, double r) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    if (r < 0.0) throw InvalidParams("radius must be >= 0");
    const double s = std::sinh(0.5 * std::sqrt(-curvature_k) * r);
    return 4.0 * 3.14159265358979323846 / (-curvature_k) * s * s;
}

/// The same volume as the integral of the sphere measure (oracle route).
inline double ball_volume_integral(double curvature_k, double r) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    if (r <= 0.0) return 0.0;
    const double sk = std::sqrt(-curvature_k);
    return integrate(
        [&](double s) { return 2.0 * 3.14159265358979323846 * std::sinh(sk * s) / sk; },
        0.0, r, 1e-13);
}

/// Lattice point count shape (C0/(|K| rho^2)) exp(2 eta sqrt|K|); report
/// annotation only, the constant is a free parameter.
inline double lattice_count_bound(double curvature_k, double rho, double eta,
                                  double c0 = 1.0) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    if (!(rho > 0.0)) throw InvalidParams("injectivity radius must be positive");
    if (eta < 0.0) throw InvalidParams("radius must be >= 0");
    return c0 / ((-curvature_k) * rho * rho) * std::exp(2.0 * eta * std::sqrt(-curvature_k));
}

// ---- certification reports ----------------------------------------------------

/// Grid certification result. All kernel-valued entries are log-domain.
/// holds is true iff log_lhs <= log_rhs entrywise after constant fitting.
struct KernelCheckReport {
    std::string check;
    double curvature = -1.0;
    double heat_cut = 0.0;
    std::vector<double> t_grid;
    std::vector<double> eta_grid;
    std::vector<std::vector<double>> log_lhs;
    std::vector<std::vector<double>> log_rhs;
    std::vector<std::vector<double>> log_kernel;  // sandwich only
    double fitted_log_c1 = 0.0;  // largest lower constant (log)
    double fitted_log_c0 = 0.0;  // smallest upper constant (log)
    bool holds = false;
};

/// Fits the largest c1 and smallest C0 with c1 g_|K| <= k_t <= C0 upper on the
/// grid, then re-verifies the sandwich entrywise.
inline KernelCheckReport sandwich_fit(const ModelPlaneParams& params,
                                      const std::vector<double>& t_grid,
                                      const std::vector<double>& eta_grid) {
    params.validate();
    if (t_grid.empty() || eta_grid.empty())
        throw InvalidParams("certification grids must be nonempty");
    for (double t : t_grid)
        if (t < 0.5 || t > 20.0)
            throw InvalidParams("t grid outside quadrature validity [0.5, 20]");
    for (double e : eta_grid)
        if (e < 0.0 || e > 60.0)
            throw InvalidParams("eta grid outside quadrature validity [0, 60]");

    KernelCheckReport rep;
    rep.check = "sandwich";
    rep.curvature = params.curvature;
    rep.t_grid = t_grid;
    rep.eta_grid = eta_grid;

    double log_c1 = std::numeric_limits<double>::infinity();    // min of k/g
    double log_c0 = -std::numeric_limits<double>::infinity();   // max of k/upper
    std::vector<std::vector<double>> log_low, log_up;
    for (double t : t_grid) {
        std::vector<double> kr, lr, ur;
        for (double eta : eta_grid) {
            const double lk = log_model_kernel(params.curvature, t, eta, params);
            const double lg = log_davies_lower_scaled(params.curvature, t, eta);
            const double lu = log_gaussian_upper(t, eta);
            kr.push_back(lk);
            lr.push_back(lg);
            ur.push_back(lu);
            log_c1 = std::min(log_c1, lk - lg);
            log_c0 = std::max(log_c0, lk - lu);
        }
        rep.log_kernel.push_back(kr);
        log_low.push_back(lr);
        log_up.push_back(ur);
    }
    rep.fitted_log_c1 = log_c1;
    rep.fitted_log_c0 = log_c0;

    bool ok = std::isfinite(log_c1) && std::isfinite(log_c0);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::vector<double> lhs_row, rhs_row;
        for (std::size_t j = 0; j < eta_grid.size(); ++j) {
            const double lhs = log_c1 + log_low[i][j];
            const double rhs = log_c0 + log_up[i][j];
            lhs_row.push_back(lhs);
            rhs_row.push_back(rhs);
            ok = ok && lhs <= rep.log_kernel[i][j] + 1e-9 &&
                 rep.log_kernel[i][j] <= rhs + 1e-9;
        }
        rep.log_lhs.push_back(lhs_row);
        rep.log_rhs.push_back(rhs_row);
    }
    rep.holds = ok;
    return rep;
}

/// L1 mass of the kernel outside the ball of radius heat_cut * t, fitted
/// against the shape C0 exp(|K| t - heat_cut^2 t / 16). Requires the shape's
/// hypothesis heat_cut >= 8 sqrt|K| + 4 and t_grid within [1, 20].
inline KernelCheckReport l1_tail_check(double curvature_k, double heat_cut,
                                       const std::vector<double>& t_grid,
                                       const ModelPlaneParams& base = ModelPlaneParams{}) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    const double ak = -curvature_k;
    const double sk = std::sqrt(ak);
    if (heat_cut < 8.0 * sk + 4.0)
        throw PreconditionFailed("tail bound needs heat_cut >= 8 sqrt|K| + 4");
    if (t_grid.empty()) throw InvalidParams("t grid must be nonempty");
    for (double t : t_grid)
        if (t < 1.0 || t > 20.0) throw InvalidParams("tail t grid outside [1, 20]");

    ModelPlaneParams params = base;
    params.curvature = curvature_k;

    KernelCheckReport rep;
    rep.check = "l1_tail";
    rep.curvature = curvature_k;
    rep.heat_cut = heat_cut;
    rep.t_grid = t_grid;

    std::vector<double> log_tail, log_shape;
    double log_c0 = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        const double lo = heat_cut * t;
        const double gamma = heat_cut / 2.0 - sk;  // positive under the hypothesis
        const double hi = lo + 55.0 / gamma + std::sqrt(55.0 * 4.0 * t) + 5.0;
        const double lt = integrate_log(
            [&](double s) {
                return log_model_kernel(curvature_k, t, s, params) +
                       log_sphere_measure(curvature_k, s);
            },
            lo, hi, 1e-9, 8);
        const double ls = ak * t - heat_cut * heat_cut * t / 16.0;
        log_tail.push_back(lt);
        log_shape.push_back(ls);
        log_c0 = std::max(log_c0, lt - ls);
    }
    rep.fitted_log_c0 = log_c0;
    rep.log_lhs.push_back(log_tail);
    std::vector<double> rhs_row;
    bool ok = std::isfinite(log_c0);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        rhs_row.push_back(log_c0 + log_shape[i]);
        ok = ok && log_tail[i] <= rhs_row.back() + 1e-9;
    }
    rep.log_rhs.push_back(rhs_row);
    rep.holds = ok;
    return rep;
}

/// Ratio floor k_t(eta+alpha)/k_t(eta) >= C0 exp(-5(1+|K|)(1+heat_cut) t) over
/// the sampled box eta <= heat_cut*t, |alpha| <= 4t+4 (samples with
/// eta+alpha < 0 are skipped). holds iff a positive floor constant fits.
inline KernelCheckReport variation_ratio_check(double curvature_k, double heat_cut,
                                               const std::vector<double>& t_grid,
                                               const ModelPlaneParams& base = ModelPlaneParams{}) {
    if (!(curvature_k < 0.0)) throw InvalidParams("curvature must be negative");
    if (!(heat_cut > 0.0)) throw InvalidParams("heat_cut must be positive");
    if (t_grid.empty()) throw InvalidParams("t grid must be nonempty");
    for (double t : t_grid)
        if (t < 1.0) throw InvalidParams("variation check needs t >= 1");

    ModelPlaneParams params = base;
    params.curvature = curvature_k;

    KernelCheckReport rep;
    rep.check = "variation";
    rep.curvature = curvature_k;
    rep.heat_cut = heat_cut;
    rep.t_grid = t_grid;

    const double ak = -curvature_k;
    double log_c0 = std::numeric_limits<double>::infinity();  // min of ratio/shape
    std::vector<double> lhs_flat, rhs_flat;
    for (double t : t_grid) {
        const double log_shape = -5.0 * (1.0 + ak) * (1.0 + heat_cut) * t;
        for (int ie = 0; ie <= 4; ++ie) {
            const double eta = heat_cut * t * ie / 4.0;
            const double log_k_eta = log_model_kernel(curvature_k, t, eta, params);
            for (int ia = -2; ia <= 2; ++ia) {
                const double alpha = (4.0 * t + 4.0) * ia / 2.0;
                if (eta + alpha < 0.0) continue;
                const double log_ratio =
                    log_model_kernel(curvature_k, t, eta + alpha, params) - log_k_eta;
                log_c0 = std::min(log_c0, log_ratio - log_shape);
                rhs_flat.push_back(log_ratio);
                lhs_flat.push_back(log_shape);  // floor before the constant
            }
        }
    }
    rep.fitted_log_c0 = log_c0;
    bool ok = std::isfinite(log_c0);
    for (double& v : lhs_flat) v += log_c0;
    for (std::size_t i = 0; i < lhs_flat.size(); ++i)
        ok = ok && lhs_flat[i] <= rhs_flat[i] + 1e-9;
    rep.log_lhs.push_back(lhs_flat);
    rep.log_rhs.push_back(rhs_flat);
    rep.holds = ok;
    return rep;
}

}  // namespace multispec
