#pragma once

/// Moving targets: for a target at distance a_t, the search succeeds by time
/// t with probability tending to 1 when a_t falls behind the front
/// sqrt(D/2r) log t, and fails when it runs ahead. In d >= 2 the front is
/// shifted by (d-1)/2 sqrt(D/2r) log log t.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resetting/eigen1d.hpp"
#include "resetting/eigen_radial.hpp"
#include "resetting/error.hpp"
#include "resetting/mc.hpp"

namespace resetting {

enum class FrontRegime { sub_front, super_front, log_log_corrected, indeterminate };

inline std::string_view regime_name(FrontRegime r) {
    switch (r) {
    case FrontRegime::sub_front: return "sub-front";
    case FrontRegime::super_front: return "super-front";
    case FrontRegime::log_log_corrected: return "log-log-corrected";
    case FrontRegime::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

/// A target distance schedule t -> a_t.
struct FrontSchedule {
    std::function<double(double)> offset_fn;
    std::string description;
};

/// Dimension, diffusion and reset rate; eps0 is the target radius for d >= 2.
struct FrontModel {
    double D;
    double r;
    int d = 1;
    double eps0 = 0.0;
};

struct ClassifyOptions {
    /// Drift must exceed this many multiples of sqrt(D/2r) at the grid end.
    double threshold = 5.0;
    /// gamma - (d-1)/2 sqrt(D/2r), in units of sqrt(D/2r), for the d >= 2 sub-front test.
    double gamma_margin = 0.01;
};

struct FrontSample {
    double t;
    double a_t;
    double drift;           ///< |a_t| - sqrt(D/2r) log t
    double corrected_drift; ///< drift + (d-1)/2 sqrt(D/2r) log log t
    double log_lambda_t;    ///< log(lambda0(a_t) t); NaN where a_t is not a valid distance
};

struct FrontClassification {
    FrontRegime regime;
    std::vector<FrontSample> samples;
};

/// Probe grid uniform in log log t from t = 20 to t = 1e300.
inline std::vector<double> default_front_grid(int n = 48) {
    require(n >= 4, "grid needs at least 4 points");
    const double s0 = std::log(std::log(20.0));
    const double s1 = std::log(std::log(1e300));
    std::vector<double> ts(n);
    for (int i = 0; i < n; ++i) ts[i] = std::exp(std::exp(s0 + (s1 - s0) * i / (n - 1)));
    return ts;
}

namespace detail {

// +1 / -1 when the values diverge upward / downward by the rule: strictly
// monotone over the last half and beyond the threshold at the end; else 0.
inline int divergence(std::span<const double> v, double threshold) {
    const std::size_t start = v.size() / 2;
    bool up = true;
    bool down = true;
    for (std::size_t i = start + 1; i < v.size(); ++i) {
        up = up && v[i] > v[i - 1];
        down = down && v[i] < v[i - 1];
    }
    if (up && v.back() > threshold) return 1;
    if (down && v.back() < -threshold) return -1;
    return 0;
}

inline double log_lambda0_at(const FrontModel& m, double a) {
    if (!std::isfinite(a) || a == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (m.d == 1) return solve_lambda0({m.D, m.r, a}).log_lambda0;
    if (std::abs(a) <= m.eps0) return std::numeric_limits<double>::quiet_NaN();
    return solve_lambda0_radial({m.D, m.r, m.d, m.eps0, std::abs(a)}).log_lambda0;
}

} // namespace detail

/// Classifies a schedule from the trend of its drift on the probe grid.
/// d = 1: drift -> -inf is sub-front (eventually found), +inf super-front.
/// d >= 2: drift + gamma log log t -> -inf for some gamma > (d-1)/2 sqrt(D/2r)
/// is sub-front. Corrected drift -> +inf is super-front when the plain drift
/// also diverges upward, and log-log-corrected when only the log log t shift
/// puts the target ahead of the front. Everything else, including schedules
/// between the two conditions, is indeterminate.
inline FrontClassification classify_schedule(const FrontSchedule& sched, const FrontModel& m,
                                             std::span<const double> t_probe, const ClassifyOptions& opt = {}) {
    require(m.D > 0.0 && m.r > 0.0, "D and r must be positive");
    require(m.d >= 1, "dimension must be at least 1");
    if (m.d >= 2) require(m.eps0 > 0.0, "eps0 must be positive for d >= 2");
    require(static_cast<bool>(sched.offset_fn), "schedule has no offset function");
    require(t_probe.size() >= 4, "probe grid needs at least 4 points");
    for (std::size_t i = 0; i < t_probe.size(); ++i) {
        require(t_probe[i] > std::numbers::e, "probe times must exceed e");
        if (i > 0) require(t_probe[i] > t_probe[i - 1], "probe times must increase");
    }
    const double len = std::sqrt(m.D / (2.0 * m.r));
    const double g_c = 0.5 * (m.d - 1) * len;
    const double gamma = g_c + opt.gamma_margin * len;

    FrontClassification out{FrontRegime::indeterminate, {}};
    std::vector<double> plain;
    std::vector<double> upper;
    std::vector<double> lower;
    for (double t : t_probe) {
        const double a = sched.offset_fn(t);
        if (!std::isfinite(a)) fail(ErrorCategory::domain, "schedule is not finite at t=" + std::to_string(t));
        const double lt = std::log(t);
        const double llt = std::log(lt);
        const double drift = std::abs(a) - len * lt;
        FrontSample s{t, a, drift, drift + g_c * llt, std::numeric_limits<double>::quiet_NaN()};
        try {
            s.log_lambda_t = detail::log_lambda0_at(m, a) + lt;
        } catch (const Error&) {
        }
        out.samples.push_back(s);
        plain.push_back(drift / len);
        upper.push_back(s.corrected_drift / len);
        lower.push_back((drift + gamma * llt) / len);
    }
    if (m.d == 1) {
        const int dir = detail::divergence(plain, opt.threshold);
        out.regime = dir < 0 ? FrontRegime::sub_front : dir > 0 ? FrontRegime::super_front : FrontRegime::indeterminate;
        return out;
    }
    if (detail::divergence(upper, opt.threshold) > 0) {
        out.regime = detail::divergence(plain, opt.threshold) > 0 ? FrontRegime::super_front
                                                                   : FrontRegime::log_log_corrected;
    } else if (detail::divergence(lower, opt.threshold) < 0) {
        out.regime = FrontRegime::sub_front;
    }
    return out;
}

inline FrontClassification classify_schedule(const FrontSchedule& sched, const FrontModel& m,
                                             const ClassifyOptions& opt = {}) {
    const auto grid = default_front_grid();
    return classify_schedule(sched, m, grid, opt);
}

/// Monte Carlo P(tau_{a_t} > t) in d = 1 for each probe time, one independent run per time.
inline std::vector<SurvivalEstimate> front_survival_mc_1d(const FrontSchedule& sched, const FrontModel& m,
                                                          std::span<const double> ts, SimConfig cfg) {
    require(m.d == 1, "Monte Carlo front check is one-dimensional");
    std::vector<SurvivalEstimate> out;
    for (double t : ts) {
        const double a = std::abs(sched.offset_fn(t));
        cfg.t_max = t;
        const std::array<double, 1> at{t};
        out.push_back(simulate_survival_1d({m.D, m.r, a}, cfg, at).front());
    }
    return out;
}

} // namespace resetting
