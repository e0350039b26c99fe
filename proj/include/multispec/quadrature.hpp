#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "multispec/errors.hpp"

namespace multispec {

struct GaussRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
/// recurrence. Cached for the fixed panel order used below.
inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

inline const GaussRule& gauss32() {
    static const GaussRule rule = gauss_legendre(32);
    return rule;
}

/// Integrates exp(log_f(x)) over [a,b] in the log domain: panels of 32-point
/// Gauss-Legendre, panel count doubling until the log of the integral moves by
/// less than tol. Returns log of the integral; -inf for a vanishing integrand.
/// Throws QuadratureError when doubling stalls above the tolerance.
inline double integrate_log(const std::function<double(double)>& log_f, double a, double b,
                            double tol = 1e-9, int initial_panels = 4,
                            int max_doublings = 12) {
    if (!(b > a)) return -std::numeric_limits<double>::infinity();
    const GaussRule& rule = gauss32();

    auto pass = [&](int panels) {
        // running max keeps the sum representable regardless of the scale
        double peak = -std::numeric_limits<double>::infinity();
        std::vector<double> logs;
        logs.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
        std::vector<double> ws;
        ws.reserve(logs.capacity());
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double x = lo + 0.5 * h * (rule.nodes[i] + 1.0);
                const double lf = log_f(x);
                logs.push_back(lf);
                ws.push_back(0.5 * h * rule.weights[i]);
                peak = std::max(peak, lf);
            }
        }
        if (!std::isfinite(peak)) return -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t i = 0; i < logs.size(); ++i)
            sum += ws[i] * std::exp(logs[i] - peak);
        return peak + std::log(sum);
    };

    double prev = pass(initial_panels);
    int panels = initial_panels;
    double err = std::numeric_limits<double>::infinity();
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double cur = pass(panels);
        if (!std::isfinite(prev) && !std::isfinite(cur)) return cur;
        err = std::abs(cur - prev);
        prev = cur;
        if (err <= tol) return cur;
    }
    throw QuadratureError("panel-doubling quadrature did not converge", err);
}

/// Plain Gauss-Legendre integration with panel doubling, for well-scaled
/// integrands. Relative tolerance on the value.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int initial_panels = 2,
                        int max_doublings = 14) {
    if (!(b > a)) return 0.0;
    const GaussRule& rule = gauss32();
    auto pass = [&](int panels) {
        double sum = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                sum += 0.5 * h * rule.weights[i] * f(lo + 0.5 * h * (rule.nodes[i] + 1.0));
        }
        return sum;
    };
    double prev = pass(initial_panels);
    int panels = initial_panels;
    double err = std::numeric_limits<double>::infinity();
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double cur = pass(panels);
        err = std::abs(cur - prev) / (1.0 + std::abs(cur));
        prev = cur;
        if (err <= tol) return cur;
    }
    throw QuadratureError("panel-doubling quadrature did not converge", err);
}

}  // namespace multispec
