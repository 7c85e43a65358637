#pragma once

/// Failure probability of a resetting search for a randomly placed target.
///
/// The target position has an isotropic density proportional to
/// c(|a|) exp(-B |a|^l) on R^d. Averaging the large-t survival probability
/// (1/M(a)) e^{-lambda0(a) t} over it reduces to a one-dimensional integral
/// over the radius, evaluated in log space so that failure probabilities far
/// below the double range are still resolved. The same machinery evaluates
/// int_0^inf exp(-R t e^{-kappa a} - B a^l) da and locates the minimiser of
/// its exponent.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "resetting/eigen1d.hpp"
#include "resetting/eigen_radial.hpp"
#include "resetting/error.hpp"
#include "resetting/quadrature.hpp"
#include "resetting/roots.hpp"

namespace resetting {

namespace detail {

inline constexpr double log_window = 40.0;

// log of the integral of exp(logf) over [lo, hi]. The integrand is scanned
// on a uniform grid, truncated where it falls log_window nats below its
// maximum, and the remainder integrated adaptively.
template <class LogF>
double log_integral(LogF&& logf, double lo, double hi, int n_scan, double rel_tol) {
    std::vector<double> xs(n_scan + 1);
    std::vector<double> vs(n_scan + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_scan; ++i) {
        xs[i] = lo + (hi - lo) * i / n_scan;
        vs[i] = logf(xs[i]);
        peak = std::max(peak, vs[i]);
    }
    if (!std::isfinite(peak)) return -std::numeric_limits<double>::infinity();
    int first = 0;
    while (vs[first] < peak - log_window) ++first;
    int last = n_scan;
    while (vs[last] < peak - log_window) --last;
    first = std::max(0, first - 1);
    last = std::min(n_scan, last + 1);
    const int stride = std::max(1, (last - first) / 64);
    std::vector<double> pts;
    for (int i = first; i < last; i += stride) pts.push_back(xs[i]);
    pts.push_back(xs[last]);
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.max_subdivisions = 20000;
    const auto res = integrate([&](double x) { return std::exp(logf(x) - peak); }, std::span<const double>(pts), opt);
    return peak + std::log(res.value);
}

inline double log_sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2); equals 2 for d = 1.
    return std::log(2.0) + 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d);
}

} // namespace detail

/// Isotropic law on R^d with density mu(a) = c(|a|) e^{-B|a|^l} / Z.
class TargetDistribution {
public:
    using LogPrefactor = std::function<double(double)>;

    /// log_prefactor is log c as a function of the radius; empty means c = 1.
    /// It must be o(radius^l). The normalizer Z is computed numerically.
    TargetDistribution(double B, double l, int d, LogPrefactor log_prefactor = {})
        : B_(B), l_(l), d_(d), log_c_(std::move(log_prefactor)) {
        require(B > 0.0 && std::isfinite(B), "B must be positive");
        require(l > 0.0 && std::isfinite(l), "l must be positive");
        require(d >= 1, "dimension must be at least 1");
        log_z_ = 0.0;
        log_z_ = detail::log_integral([&](double x) { return log_radial_density(x); }, 0.0, radius_bound(60.0), 4000,
                                      1e-12);
    }

    /// Centred Gaussian with covariance sigma^2 I_d.
    static TargetDistribution gaussian(double sigma, int d) {
        require(sigma > 0.0, "sigma must be positive");
        return TargetDistribution(1.0 / (2.0 * sigma * sigma), 2.0, d);
    }

    /// Density (B/2) e^{-B|x|} on the line.
    static TargetDistribution two_sided_exponential(double B) { return TargetDistribution(B, 1.0, 1); }

    double B() const noexcept { return B_; }
    double l() const noexcept { return l_; }
    int d() const noexcept { return d_; }
    double log_normalizer() const noexcept { return log_z_; }

    /// log mu(a) at |a| = radius.
    double log_density(double radius) const {
        const double log_c = log_c_ ? log_c_(radius) : 0.0;
        return log_c - B_ * std::pow(radius, l_) - log_z_;
    }

    /// log of the radial density |S^{d-1}| radius^{d-1} mu(radius).
    double log_radial_density(double radius) const {
        if (radius <= 0.0) return d_ == 1 ? log_density(0.0) + std::log(2.0) : -std::numeric_limits<double>::infinity();
        return detail::log_sphere_area(d_) + (d_ - 1) * std::log(radius) + log_density(radius);
    }

    /// A radius beyond the mode where the radial density has dropped by `drop` nats below its maximum.
    double radius_bound(double drop) const {
        double hi = std::max(1.0, std::pow(static_cast<double>(d_) / (B_ * l_), 1.0 / l_));
        double top = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i) top = std::max(top, log_radial_density(hi * i / 200.0));
        while (log_radial_density(hi) > top - drop) hi *= 1.25;
        return hi;
    }

private:
    double B_;
    double l_;
    int d_;
    LogPrefactor log_c_;
    double log_z_ = 0.0;
};

/// The search: diffusion D, reset rate r, dimension d, and for d >= 2 the target radius eps0.
struct SearchModel {
    double D;
    double r;
    int d;
    double eps0 = 0.0;
};

inline void check_model(const SearchModel& m) {
    require(m.D > 0.0 && m.r > 0.0, "D and r must be positive");
    require(m.d >= 1, "dimension must be at least 1");
    if (m.d >= 2) require(m.eps0 > 0.0, "target radius eps0 must be positive for d >= 2");
}

/// lambda0 and M as functions of the target distance, memoized by exact
/// radius. Safe to share between threads.
class SurvivalLayer {
public:
    explicit SurvivalLayer(const SearchModel& model) : model_(model) { check_model(model); }

    struct Entry {
        double lambda0;
        double log_M;
    };

    /// Infinite lambda0 marks targets inside the eps0-ball (located at once).
    Entry eigen(double radius) const {
        {
            std::lock_guard lock(mutex_);
            if (const auto it = cache_.find(radius); it != cache_.end()) return it->second;
        }
        Entry e{};
        if (model_.d == 1) {
            const Params1D p{model_.D, model_.r, radius};
            const auto sol = solve_lambda0(p);
            e = {sol.lambda0, std::log(sol.prefactor_M)};
        } else if (radius <= model_.eps0) {
            e = {std::numeric_limits<double>::infinity(), 0.0};
        } else {
            const ParamsRadial p{model_.D, model_.r, model_.d, model_.eps0, radius};
            const auto sol = solve_lambda0_radial(p);
            e = {sol.lambda0, std::log(sol.prefactor_M)};
        }
        std::lock_guard lock(mutex_);
        cache_.emplace(radius, e);
        return e;
    }

    /// log min(1, e^{-lambda0 t} / M).
    double log_survival(double radius, double t) const {
        const auto e = eigen(radius);
        if (std::isinf(e.lambda0)) return -std::numeric_limits<double>::infinity();
        return std::min(0.0, -e.lambda0 * t - e.log_M);
    }

    const SearchModel& model() const noexcept { return model_; }

    std::size_t cache_size() const {
        std::lock_guard lock(mutex_);
        return cache_.size();
    }

private:
    SearchModel model_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<double, Entry> cache_;
};

struct FailureProbability {
    double probability;
    double log_probability;
};

/// Integral over the target law of the survival probability at time t.
/// Meaningful once lambda0 t >= 3 at the radii carrying the integral.
inline FailureProbability failure_probability(const TargetDistribution& dist, const SurvivalLayer& layer, double t,
                                              double quad_tol = 1e-8) {
    require(t > 0.0, "t must be positive");
    require(quad_tol > 0.0, "quadrature tolerance must be positive");
    if (dist.d() != layer.model().d) {
        fail(ErrorCategory::domain, "target law has dimension " + std::to_string(dist.d()) + " but model has " +
                                        std::to_string(layer.model().d));
    }
    const double lo_base = layer.model().d == 1 ? 0.0 : layer.model().eps0;
    const auto logf = [&](double rho) { return dist.log_radial_density(rho) + layer.log_survival(rho, t); };
    // Survival increases with the radius, so past the scan peak the integrand
    // is bounded by the radial density; grow hi until that bound is negligible.
    double hi = dist.radius_bound(detail::log_window + 20.0);
    for (int pass = 0;; ++pass) {
        const double lo = lo_base + 1e-9 * hi;
        double peak = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 600; ++i) peak = std::max(peak, logf(lo + (hi - lo) * i / 600.0));
        if (dist.log_radial_density(hi) < peak - detail::log_window - 5.0) break;
        if (pass == 60) fail(ErrorCategory::non_convergence, "failure probability: integrand tail not resolved");
        hi *= 2.0;
    }
    const double log_p = detail::log_integral(logf, lo_base + 1e-9 * hi, hi, 600, quad_tol);
    return {std::exp(log_p), log_p};
}

inline FailureProbability failure_probability(const TargetDistribution& dist, const SearchModel& model, double t,
                                              double quad_tol = 1e-8) {
    const SurvivalLayer layer(model);
    return failure_probability(dist, layer, t, quad_tol);
}

/// log(failure probability) / (log t)^l; tends to -B (D/2r)^{l/2}.
inline double scaling_functional(const TargetDistribution& dist, const SurvivalLayer& layer, double t) {
    require(t > std::numbers::e, "t must exceed e");
    return failure_probability(dist, layer, t).log_probability / std::pow(std::log(t), dist.l());
}

inline double scaling_limit(const TargetDistribution& dist, const SearchModel& model) {
    return -dist.B() * std::pow(model.D / (2.0 * model.r), 0.5 * dist.l());
}

// ---------------------------------------------------------------------------
// gamma_t(a) = R t e^{-kappa a} + B a^l and its integral.

struct LaplacePoint {
    double t;
    double a_star;
    double gamma_at_star;
    double kappa;
    double R;
    double residual; ///< relative mismatch of kappa R t e^{-kappa a*} = l B a*^{l-1}
};

enum class CriticalPoint { relative_max, relative_min };

/// A zero of gamma_t' is a relative maximum when a < (1 - l)/kappa.
inline CriticalPoint classify_critical_point(double l, double kappa, double a) {
    return a < (1.0 - l) / kappa ? CriticalPoint::relative_max : CriticalPoint::relative_min;
}

inline double laplace_gamma(double B, double l, double kappa, double R, double t, double a) {
    return std::exp(std::log(R * t) - kappa * a) + B * std::pow(a, l);
}

/// Global minimiser of gamma_t on (0, inf). For l < 1 this is the larger
/// critical point; when it does not exist yet (or does not beat a = 0) the
/// call fails with "pre-asymptotic regime".
inline LaplacePoint laplace_minimize(double B, double l, double kappa, double R, double t) {
    require(B > 0.0 && l > 0.0 && kappa > 0.0 && R > 0.0 && t > 0.0, "B, l, kappa, R, t must be positive");
    // gamma_t'(a) = 0  <=>  phi(a) = 0, phi(a) = log(kappa R t) - kappa a - log(l B) - (l - 1) log a.
    const double c = std::log(kappa * R * t) - std::log(l * B);
    const auto phi = [&](double a) { return c - kappa * a - (l - 1.0) * std::log(a); };
    const auto pre_asymptotic = [&] {
        fail(ErrorCategory::domain, "pre-asymptotic regime: gamma_t has no interior global minimum at t=" +
                                        std::to_string(t));
    };
    double a;
    if (l == 1.0) {
        if (c <= 0.0) pre_asymptotic();
        a = c / kappa;
    } else {
        const double lo = l < 1.0 ? (1.0 - l) / kappa : 1e-300;
        if (l < 1.0 && phi(lo) <= 0.0) pre_asymptotic();
        double hi = std::max(1.0, 2.0 * std::abs(c) / kappa);
        while (phi(hi) > 0.0) hi *= 2.0;
        a = brent_root(phi, lo, hi).root;
    }
    const double g = laplace_gamma(B, l, kappa, R, t, a);
    if (l < 1.0 && g >= R * t) pre_asymptotic();
    const double lhs = std::log(kappa * R * t) - kappa * a;
    const double rhs = std::log(l * B) + (l - 1.0) * std::log(a);
    return {t, a, g, kappa, R, std::abs(std::expm1(lhs - rhs))};
}

/// log of int_0^inf exp(-R t e^{-kappa a} - B a^l) da.
inline double laplace_log_integral(double B, double l, double kappa, double R, double t, double rel_tol = 1e-10) {
    require(B > 0.0 && l > 0.0 && kappa > 0.0 && R > 0.0 && t > 0.0, "B, l, kappa, R, t must be positive");
    const double log_rt = std::log(R * t);
    const auto logf = [&](double a) { return -std::exp(log_rt - kappa * a) - B * std::pow(a, l); };
    // Everywhere gamma_t >= B a^l, and gamma_t <= R t at a = 0.
    double top = std::min(R * t, B * std::pow(std::max(0.0, log_rt) / kappa, l) + R);
    for (int pass = 0; pass < 10; ++pass) {
        const double hi = std::pow((top + detail::log_window + 10.0) / B, 1.0 / l);
        const double v = detail::log_integral(logf, 0.0, hi, 4000, rel_tol);
        if (-v <= top + 5.0) return v;
        top = -v;
    }
    fail(ErrorCategory::non_convergence, "Laplace integral: could not bracket the integrand");
}

struct LaplaceBounds {
    double lower_log;
    double upper_log;
    double log_integral;
    bool bracketed;
};

/// Explicit lower and upper bounds on log int_0^inf exp(-R t e^{-kappa a} - B a^l) da
/// for a given epsilon and constant alpha, together with the quadrature value.
inline LaplaceBounds laplace_bound_check(double B, double l, double kappa, double R, double t, double epsilon,
                                         double alpha = 1.0) {
    require(t > std::numbers::e, "t must exceed e");
    require(epsilon > 0.0 && alpha > 0.0, "epsilon and alpha must be positive");
    const double L = std::log(t);
    const double x = L / kappa;
    const double core = B * std::pow(x, l);
    const double lower = std::log(alpha) - std::max(0.0, l - 1.0) * std::log(L) - (1.0 + epsilon) * core - 1.0;
    const double first = std::log1p(epsilon) + std::log(x);
    const double second = -std::log(l * B) + (1.0 - l) * std::log(x);
    const double upper = std::max(first, second) + std::log1p(std::exp(-std::abs(first - second))) -
                         (1.0 - epsilon) * core;
    const double value = laplace_log_integral(B, l, kappa, R, t);
    return {lower, upper, value, lower <= value && value <= upper};
}

/// kappa and R for which lambda0(a) ~ R e^{-kappa a} up to powers of a.
struct LaplaceRates {
    double kappa;
    double R;
};

inline LaplaceRates laplace_rates(const SearchModel& model) {
    check_model(model);
    const double kappa = std::sqrt(2.0 * model.r / model.D);
    if (model.d == 1) return {kappa, model.r};
    return {kappa, radial_limit_constant(model.D, model.r, model.d, model.eps0)};
}

} // namespace resetting
