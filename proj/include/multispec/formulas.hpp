#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "multispec/errors.hpp"

namespace multispec {

/// Geometric parameter set (a, b, rho) with b <= a < 0, rho > 0, plus the
/// optional quantities the closed-form bounds consume.
struct SurfaceParams {
    double a = -1.0;    // curvature upper bound
    double b = -1.0;    // curvature lower bound
    double rho = 1.0;   // injectivity radius
    int g = 2;          // genus
    double vol = 0.0;   // 0 = not given
    std::optional<double> delta;  // spectral gap
    double kappa = 0.0;
    double inj = 1.0;

    void validate() const {
        if (!(b <= a && a < 0.0)) throw InvalidParams("need b <= a < 0");
        if (!(rho > 0.0)) throw InvalidParams("need rho > 0");
    }

    /// Volume vs the Gauss-Bonnet cap; false flags an inconsistent pair.
    bool gauss_bonnet_consistent() const {
        if (vol <= 0.0 || g < 2) return true;
        return vol <= 4.0 * 3.14159265358979323846 * (g - 1) / (-a) + 1e-12;
    }
};

/// C0 * g / log log(1+g), the genus form of the multiplicity bound.
inline double multiplicity_bound_genus(int g, double c0) {
    if (g < 2) throw InvalidGenus("genus bound needs g >= 2");
    if (!(c0 > 0.0)) throw InvalidParams("constant must be positive");
    return c0 * g / std::log(std::log(1.0 + g));
}

/// C0 * (1 + vol / log log(3+vol)), the volume form.
inline double multiplicity_bound_volume(double vol, double c0) {
    if (!(vol > 0.0)) throw InvalidParams("volume must be positive");
    return c0 * (1.0 + vol / std::log(std::log(3.0 + vol)));
}

struct RemarkConstants {
    double c0_factor = 0.0;     // (|b| + rho^-2)/|a|, times the universal C_u = 1
    std::optional<double> alpha_factor;  // gap-dependent exponent factor
};

/// Structural parts of the explicit constants; the universal multipliers stay
/// symbolic (= 1), the paper never quantifies them.
inline RemarkConstants remark_constants(double a, double b, double rho,
                                        std::optional<double> delta = std::nullopt) {
    SurfaceParams p;
    p.a = a;
    p.b = b;
    p.rho = rho;
    p.validate();
    RemarkConstants r;
    r.c0_factor = (-b + 1.0 / (rho * rho)) / (-a);
    if (delta) {
        if (!(*delta > 0.0)) throw InvalidParams("spectral gap must be positive");
        const double num = std::max(std::sqrt(*delta) / std::sqrt(20.0),
                                    *delta / (4.0 * std::sqrt(-b)));
        r.alpha_factor = num / (std::sqrt(-b) + 1.0 / rho);
    }
    return r;
}

/// vol * (kappa + inj^-2); invariant under metric rescaling.
inline double scale_free_quantity(double vol, double kappa, double inj) {
    if (!(vol > 0.0)) throw InvalidParams("volume must be positive");
    if (kappa < 0.0) throw InvalidParams("kappa must be >= 0");
    if (!(inj > 0.0)) throw InvalidParams("injectivity radius must be positive");
    return vol * (kappa + 1.0 / (inj * inj));
}

/// 4 pi (g-1)/|a|.
inline double gauss_bonnet_volume_cap(int g, double a) {
    if (g < 2) throw InvalidGenus("volume cap needs g >= 2");
    if (!(a < 0.0)) throw InvalidParams("curvature upper bound must be negative");
    return 4.0 * 3.14159265358979323846 * (g - 1) / (-a);
}

namespace detail {

inline std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (x > 0 && x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

}  // namespace detail

/// Largest n with K_n embeddable in the closed orientable genus-g surface:
/// floor((7 + sqrt(1+48g))/2), integer-exact.
inline int chromatic_number(int g) {
    if (g < 0) throw InvalidGenus("genus must be >= 0");
    const std::uint64_t n = 1 + 48 * static_cast<std::uint64_t>(g);
    return static_cast<int>((7 + detail::isqrt_u64(n)) / 2);
}

/// Same value through the Euler-characteristic form floor((7+sqrt(49-24*chi))/2)
/// with chi = 2-2g, evaluated in floating point (agreement route for tests).
inline int chromatic_number_euler_form(int g) {
    if (g < 0) throw InvalidGenus("genus must be >= 0");
    const double chi = 2.0 - 2.0 * g;
    return static_cast<int>(std::floor(0.5 * (7.0 + std::sqrt(49.0 - 24.0 * chi))));
}

struct ConjectureTarget {
    int value = 0;
    bool conjecture_disproven = false;  // known failing genera
};

/// chr(g) - 1, annotated at the genera where the equality is known to fail.
inline ConjectureTarget cdv_conjecture_target(int g) {
    ConjectureTarget t;
    t.value = chromatic_number(g) - 1;
    t.conjecture_disproven = (g == 10 || g == 17);
    return t;
}

/// floor((1 + sqrt(8g+1))/2): the realized multiplicity of the explicit
/// genus-g construction, defined for g >= 3.
inline int colbois_cdv_lower(int g) {
    if (g < 3) throw InvalidGenus("construction lower bound needs g >= 3");
    const std::uint64_t n = 8 * static_cast<std::uint64_t>(g) + 1;
    return static_cast<int>((1 + detail::isqrt_u64(n)) / 2);
}

/// The d with sinh^2(sqrt|b| d/2) = 1, i.e. (2/sqrt|b|) asinh(1): a diameter
/// floor for closed surfaces with curvature >= b.
inline double diameter_lower_bound(double b) {
    if (!(b < 0.0)) throw InvalidParams("curvature lower bound must be negative");
    return 2.0 / std::sqrt(-b) * std::asinh(1.0);
}

struct WindowBound {
    double window_factor = 0.0;  // 1 + K/log^beta g
    double count_bound = 0.0;    // C0 g / log log g
};

inline WindowBound window_bound(int g, double k, double beta, double c0) {
    if (g <= 2) throw InvalidGenus("window bound needs g >= 3");
    if (!(k > 0.0 && beta > 0.0 && c0 > 0.0))
        throw InvalidParams("window parameters must be positive");
    WindowBound w;
    w.window_factor = 1.0 + k / std::pow(std::log(static_cast<double>(g)), beta);
    w.count_bound = c0 * g / std::log(std::log(static_cast<double>(g)));
    return w;
}

}  // namespace multispec
