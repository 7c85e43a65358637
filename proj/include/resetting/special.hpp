#pragma once

/// Modified Bessel functions I_nu and K_nu for real x > 0 and orders
/// nu = k/2, k = 0, 1, 2, ...  (the orders (d-2)/2 of the radial problem).
///
/// Integer orders start from K_0, K_1 computed with Temme's series (x <= 2)
/// or Steed's continued fraction (x > 2); half-integer orders start from the
/// elementary K_{1/2}, K_{3/2}. Both climb to the requested order with the
/// forward recurrence, which is stable for K. I_nu is then recovered from the
/// continued fraction for I_{nu+1}/I_nu and the Wronskian
///     I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x.
///
/// The scaled variants e^x K_nu(x) and e^{-x} I_nu(x) are valid far beyond
/// the double-precision range of the unscaled functions and are what the
/// eigenvalue code consumes.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "resetting/error.hpp"

namespace resetting {

/// Order nu = twice/2 with twice >= 0.
class BesselOrder {
public:
    static BesselOrder from_twice(int twice_nu) {
        require(twice_nu >= 0, "Bessel order must be non-negative");
        return BesselOrder(twice_nu);
    }

    /// nu = (d - 2) / 2 for a Bessel process of integer dimension d >= 2.
    static BesselOrder from_dimension(int d) {
        require(d >= 2, "Bessel order from dimension requires d >= 2");
        return BesselOrder(d - 2);
    }

    double value() const noexcept { return 0.5 * twice_; }
    int twice() const noexcept { return twice_; }
    bool half_integer() const noexcept { return (twice_ % 2) != 0; }

private:
    explicit BesselOrder(int twice_nu) : twice_(twice_nu) {}
    int twice_;
};

namespace detail {

inline constexpr double bessel_eps = 1.0e-16;
inline constexpr int bessel_max_iterations = 100000;

struct ScaledKPair {
    double k_nu;  // e^x K_nu(x)
    double k_nu1; // e^x K_{nu+1}(x)
};

// e^x K_0(x) and e^x K_1(x).
inline ScaledKPair k01_scaled(double x) {
    if (x <= 2.0) {
        const double half_x = 0.5 * x;
        const double d = half_x * half_x;
        double f = -(std::log(half_x) + std::numbers::egamma);
        double p = 0.5;
        double q = 0.5;
        double c = 1.0;
        double sum0 = f;
        double sum1 = p;
        for (int i = 1; i < bessel_max_iterations; ++i) {
            const double di = i;
            f = (di * f + p + q) / (di * di);
            c *= d / di;
            p /= di;
            q /= di;
            const double del0 = c * f;
            sum0 += del0;
            sum1 += c * (p - di * f);
            if (std::abs(del0) < std::abs(sum0) * bessel_eps) break;
        }
        const double ex = std::exp(x);
        return {sum0 * ex, sum1 * (2.0 / x) * ex};
    }

    // Steed's algorithm for the CF2 continued fraction.
    constexpr double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i < bessel_max_iterations; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < bessel_eps) break;
    }
    if (i == bessel_max_iterations) {
        fail(ErrorCategory::non_convergence, "Bessel K continued fraction did not converge");
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

// e^x K_nu(x), e^x K_{nu+1}(x) by forward recurrence from the seed pair.
inline ScaledKPair k_scaled_pair(BesselOrder nu, double x) {
    ScaledKPair pair{};
    double mu = 0.0;
    if (nu.half_integer()) {
        const double k_half = std::sqrt(std::numbers::pi / (2.0 * x));
        pair = {k_half, k_half * (1.0 + 1.0 / x)};
        mu = 0.5;
    } else {
        pair = k01_scaled(x);
    }
    const int steps = (nu.twice() - (nu.half_integer() ? 1 : 0)) / 2;
    for (int j = 0; j < steps; ++j) {
        const double m = mu + 1.0 + j;
        const double next = pair.k_nu + (2.0 * m / x) * pair.k_nu1;
        pair = {pair.k_nu1, next};
    }
    return pair;
}

// I_{nu+1}(x) / I_nu(x) by modified Lentz on 1/(b1 + 1/(b2 + ...)), b_k = 2(nu+k)/x.
inline double i_ratio(double nu, double x) {
    constexpr double tiny = 1.0e-300;
    double f = tiny;
    double c = f;
    double d = 0.0;
    for (int k = 1; k < bessel_max_iterations * 100; ++k) {
        const double b = 2.0 * (nu + k) / x;
        d = b + d;
        if (d == 0.0) d = tiny;
        c = b + 1.0 / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < bessel_eps) return f;
    }
    fail(ErrorCategory::non_convergence, "Bessel I ratio continued fraction did not converge");
}

inline void check_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        fail(ErrorCategory::domain, "Bessel argument must be positive and finite, got " + std::to_string(x));
    }
}

} // namespace detail

/// e^x K_nu(x).
inline double bessel_k_scaled(BesselOrder nu, double x) {
    detail::check_argument(x);
    const double v = detail::k_scaled_pair(nu, x).k_nu;
    if (!std::isfinite(v)) {
        fail(ErrorCategory::overflow, "K_nu(x) overflows for nu=" + std::to_string(nu.value()) +
                                          ", x=" + std::to_string(x));
    }
    return v;
}

/// e^{-x} I_nu(x).
inline double bessel_i_scaled(BesselOrder nu, double x) {
    detail::check_argument(x);
    const auto k = detail::k_scaled_pair(nu, x);
    const double ratio = detail::i_ratio(nu.value(), x);
    const double v = 1.0 / (x * (k.k_nu1 + ratio * k.k_nu));
    if (!(v > 0.0)) {
        fail(ErrorCategory::overflow, "I_nu(x) underflows for nu=" + std::to_string(nu.value()) +
                                          ", x=" + std::to_string(x));
    }
    return v;
}

inline double log_bessel_k(BesselOrder nu, double x) {
    return std::log(bessel_k_scaled(nu, x)) - x;
}

inline double log_bessel_i(BesselOrder nu, double x) {
    return std::log(bessel_i_scaled(nu, x)) + x;
}

/// K_nu(x). Throws ErrorCategory::overflow when the value leaves the
/// normal double range (tiny x with large nu, or x beyond ~705).
inline double bessel_k(BesselOrder nu, double x) {
    const double v = bessel_k_scaled(nu, x) * std::exp(-x);
    if (!(v >= std::numeric_limits<double>::min())) {
        fail(ErrorCategory::overflow, "K_nu(x) underflows at x=" + std::to_string(x));
    }
    return v;
}

/// I_nu(x). Throws ErrorCategory::overflow above the exponential range.
inline double bessel_i(BesselOrder nu, double x) {
    const double log_v = log_bessel_i(nu, x);
    if (log_v > std::log(std::numeric_limits<double>::max())) {
        fail(ErrorCategory::overflow, "I_nu(x) overflows at x=" + std::to_string(x));
    }
    const double v = bessel_i_scaled(nu, x) * std::exp(x);
    if (!(v >= std::numeric_limits<double>::min())) {
        fail(ErrorCategory::overflow, "I_nu(x) underflows at x=" + std::to_string(x));
    }
    return v;
}

} // namespace resetting
