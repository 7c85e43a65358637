#pragma once

/// Monte Carlo simulation of diffusive search with Poissonian resetting.
///
/// 1-d: event driven and exact. Between resets the searcher is a Brownian
/// motion, whose first passage time to a level at distance h is distributed as
/// h^2 / (D Z^2) with Z standard normal. Positions at checkpoints are drawn
/// from the law of the motion conditioned not to have hit the target
/// (Gaussian proposal, accepted with the reflection-principle bridge
/// probability).
///
/// Radial (d >= 2): the radius of a d-dimensional Brownian motion is advanced
/// with the exact transition |y e_1 + sqrt(D dt) Z_d|, with steps that shrink
/// near the target sphere, and absorption inside a step is decided with the
/// one-dimensional Brownian bridge crossing probability. A fixed-step
/// Euler-Maruyama scheme on the Bessel SDE is available for comparison.
///
/// Trajectories are processed in fixed-size chunks whose partial sums are
/// merged in chunk order, so results are bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "resetting/eigen1d.hpp"
#include "resetting/eigen_radial.hpp"
#include "resetting/error.hpp"
#include "resetting/rng.hpp"

namespace resetting {

enum class RadialScheme {
    exact_adaptive, ///< exact radial transition, adaptive steps, bridge correction
    euler_maruyama, ///< fixed dt on the Bessel SDE, bridge correction
};

struct SimConfig {
    std::uint64_t n_trajectories = 100000;
    double t_max = 100.0;
    double dt = 1e-3;       ///< radial only: the smallest step (the fixed step for Euler-Maruyama)
    std::uint64_t seed = 1;
    bool antithetic = false;
    unsigned threads = 0;   ///< 0: RESETTING_THREADS, else hardware concurrency
    RadialScheme scheme = RadialScheme::exact_adaptive;
};

struct SurvivalEstimate {
    double t;
    double p_hat;
    double half_width_95;
    std::uint64_t n;
    std::uint64_t seed;
};

/// Survivor statistics of a functional f at a checkpoint: sums of
/// f(X_t) 1{tau > t} and its square.
struct CheckpointSums {
    std::uint64_t survivors = 0;
    double sum_f = 0.0;
    double sum_f2 = 0.0;
};

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("RESETTING_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline constexpr std::uint64_t mc_chunk = 4096;

// Runs body(trajectory, stream, partial) over all trajectories. Partial
// results are combined with merge(total, partial) in chunk order.
template <class Partial, class Body, class Merge>
Partial run_chunked(const SimConfig& cfg, const Partial& zero, Body body, Merge merge) {
    const std::uint64_t n = cfg.n_trajectories;
    const std::uint64_t chunks = (n + mc_chunk - 1) / mc_chunk;
    std::vector<Partial> partials(chunks, zero);
    const auto work = [&](std::uint64_t c) {
        Partial& part = partials[c];
        const std::uint64_t end = std::min(n, (c + 1) * mc_chunk);
        for (std::uint64_t i = c * mc_chunk; i < end; ++i) {
            // Antithetic pairs share the stream of index i/2.
            TrajectoryStream stream(cfg.seed, cfg.antithetic ? i / 2 : i, cfg.antithetic && (i % 2 == 1));
            body(stream, part);
        }
    };
    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads ? cfg.threads : default_thread_count(), chunks));
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) work(c);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < chunks; c += threads) work(c);
            });
        }
    }
    Partial total = zero;
    for (const auto& part : partials) merge(total, part);
    return total;
}

inline void check_config(const SimConfig& cfg) {
    require(cfg.n_trajectories >= 1, "n_trajectories must be at least 1");
    require(cfg.t_max > 0.0 && std::isfinite(cfg.t_max), "t_max must be positive and finite");
}

inline void check_times(std::span<const double> ts, double t_max) {
    require(!ts.empty(), "need at least one time");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        require(ts[i] > 0.0 && ts[i] <= t_max, "times must lie in (0, t_max]");
        if (i > 0) require(ts[i] > ts[i - 1], "times must be strictly increasing");
    }
}

inline void merge_sums(std::vector<CheckpointSums>& total, const std::vector<CheckpointSums>& part) {
    for (std::size_t k = 0; k < total.size(); ++k) {
        total[k].survivors += part[k].survivors;
        total[k].sum_f += part[k].sum_f;
        total[k].sum_f2 += part[k].sum_f2;
    }
}

inline std::vector<SurvivalEstimate> to_estimates(std::span<const double> ts, const std::vector<CheckpointSums>& sums,
                                                  const SimConfig& cfg) {
    std::vector<SurvivalEstimate> out;
    out.reserve(ts.size());
    const double n = static_cast<double>(cfg.n_trajectories);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double p = sums[k].survivors / n;
        out.push_back({ts[k], p, 1.96 * std::sqrt(p * (1.0 - p) / n), cfg.n_trajectories, cfg.seed});
    }
    return out;
}

// Position at time dt of a Brownian motion from x < a, conditioned on not
// reaching a before dt.
inline double conditioned_position(TrajectoryStream& rng, double x, double a, double D, double dt) {
    const double s = std::sqrt(D * dt);
    for (;;) {
        const double y = x + s * rng.standard_normal();
        if (y >= a) continue;
        const double no_cross = -std::expm1(-2.0 * (a - x) * (a - y) / (D * dt));
        if (rng.uniform() < no_cross) return y;
    }
}

// One exact 1-d path. record(k, x) is called at each checkpoint the path
// survives to (x is NaN when positions are not tracked). Returns tau, or
// +inf if the target is not reached by horizon.
template <class Record>
double simulate_path_1d(TrajectoryStream& rng, const Params1D& p, std::span<const double> checkpoints,
                        bool track_positions, double horizon, Record&& record) {
    double time = 0.0;
    double x = 0.0;
    double next_reset = rng.exponential(p.r);
    std::size_t k = 0;
    for (;;) {
        const double checkpoint = (track_positions && k < checkpoints.size()) ? checkpoints[k]
                                                                              : std::numeric_limits<double>::infinity();
        const double stop = std::min({next_reset, checkpoint, horizon});
        const double z = rng.standard_normal();
        const double hit = time + (p.a - x) * (p.a - x) / (p.D * z * z);
        if (hit < stop) {
            if (!track_positions) {
                while (k < checkpoints.size() && checkpoints[k] < hit) record(k++, std::nan(""));
            }
            return hit;
        }
        if (stop == horizon) {
            if (!track_positions) {
                while (k < checkpoints.size()) record(k++, std::nan(""));
            } else if (checkpoint == horizon && k < checkpoints.size()) {
                record(k++, conditioned_position(rng, x, p.a, p.D, horizon - time));
            }
            return std::numeric_limits<double>::infinity();
        }
        if (stop == checkpoint) {
            x = conditioned_position(rng, x, p.a, p.D, checkpoint - time);
            time = checkpoint;
            record(k++, x);
        } else {
            x = 0.0;
            time = next_reset;
            next_reset = time + rng.exponential(p.r);
        }
    }
}

} // namespace detail

/// P(tau_a > u) for Brownian motion without resetting: erf(a / sqrt(2 D u)).
inline double bm_no_reset_survival_cdf(double D, double a, double u) {
    require(D > 0.0 && a > 0.0 && u > 0.0, "D, a and u must be positive");
    return std::erf(a / std::sqrt(2.0 * D * u));
}

/// Survival estimates at each time in ts (strictly increasing, <= t_max).
inline std::vector<SurvivalEstimate> simulate_survival_1d(const Params1D& params, const SimConfig& cfg,
                                                          std::span<const double> ts) {
    const auto p = checked(params);
    detail::check_config(cfg);
    detail::check_times(ts, cfg.t_max);
    const std::vector<CheckpointSums> zero(ts.size());
    const auto sums = detail::run_chunked(
        cfg, zero,
        [&](TrajectoryStream& rng, std::vector<CheckpointSums>& part) {
            detail::simulate_path_1d(rng, p, ts, false, ts.back(), [&](std::size_t k, double) {
                ++part[k].survivors;
            });
        },
        detail::merge_sums);
    return detail::to_estimates(ts, sums, cfg);
}

struct FirstPassageMoments {
    double mean;
    double standard_error;
    std::uint64_t n;
};

/// Mean of tau_a from uncensored exact paths.
inline FirstPassageMoments simulate_first_passage_1d(const Params1D& params, const SimConfig& cfg) {
    const auto p = checked(params);
    detail::check_config(cfg);
    struct Sums {
        double s1 = 0.0;
        double s2 = 0.0;
    };
    const auto sums = detail::run_chunked(
        cfg, Sums{},
        [&](TrajectoryStream& rng, Sums& part) {
            const double tau = detail::simulate_path_1d(rng, p, {}, false, std::numeric_limits<double>::infinity(),
                                                        [](std::size_t, double) {});
            part.s1 += tau;
            part.s2 += tau * tau;
        },
        [](Sums& total, const Sums& part) {
            total.s1 += part.s1;
            total.s2 += part.s2;
        });
    const double n = static_cast<double>(cfg.n_trajectories);
    const double mean = sums.s1 / n;
    const double var = std::max(0.0, sums.s2 / n - mean * mean) * n / std::max(1.0, n - 1.0);
    return {mean, std::sqrt(var / n), cfg.n_trajectories};
}

struct ConditionedEstimate {
    double t;
    double p_hat;               ///< P(tau > t)
    double conditional_mean;    ///< E[f(X_t) | tau > t]
    double product;             ///< E[f(X_t); tau > t] = p_hat * conditional_mean
    double product_std_error;
    std::uint64_t survivors;
    std::uint64_t n;
};

namespace detail {

inline std::vector<ConditionedEstimate> to_conditioned(std::span<const double> ts,
                                                       const std::vector<CheckpointSums>& sums,
                                                       std::uint64_t n_total) {
    std::vector<ConditionedEstimate> out;
    const double n = static_cast<double>(n_total);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto& s = sums[k];
        if (s.survivors < 100) {
            fail(ErrorCategory::non_convergence, "only " + std::to_string(s.survivors) +
                                                     " surviving trajectories at t=" + std::to_string(ts[k]));
        }
        const double prod = s.sum_f / n;
        const double var = std::max(0.0, s.sum_f2 / n - prod * prod) * n / (n - 1.0);
        out.push_back({ts[k], s.survivors / n, s.sum_f / s.survivors, prod, std::sqrt(var / n), s.survivors, n_total});
    }
    return out;
}

} // namespace detail

/// E[u(X_t) | tau_a > t] and the companion estimates at each checkpoint.
inline std::vector<ConditionedEstimate> conditioned_u_expectation(const Params1D& params, const EigenSolution1D& sol,
                                                                  const SimConfig& cfg, std::span<const double> ts) {
    const auto p = checked(params);
    detail::check_config(cfg);
    detail::check_times(ts, cfg.t_max);
    const std::vector<CheckpointSums> zero(ts.size());
    const auto sums = detail::run_chunked(
        cfg, zero,
        [&](TrajectoryStream& rng, std::vector<CheckpointSums>& part) {
            detail::simulate_path_1d(rng, p, ts, true, ts.back(), [&](std::size_t k, double x) {
                const double u = eigenfunction_u(p, sol, x);
                ++part[k].survivors;
                part[k].sum_f += u;
                part[k].sum_f2 += u * u;
            });
        },
        detail::merge_sums);
    return detail::to_conditioned(ts, sums, cfg.n_trajectories);
}

inline ConditionedEstimate conditioned_u_expectation(const Params1D& params, const EigenSolution1D& sol,
                                                     const SimConfig& cfg, double t) {
    const double ts[] = {t};
    return conditioned_u_expectation(params, sol, cfg, std::span<const double>(ts)).front();
}

namespace detail {

inline constexpr double adaptive_step_factor = 5.0;

// Radial path; record(k, y) at each surviving checkpoint. r = 0 disables resets.
template <class Record>
void simulate_path_radial(TrajectoryStream& rng, const ParamsRadial& p, const SimConfig& cfg,
                          std::span<const double> checkpoints, Record&& record) {
    const double horizon = checkpoints.back();
    double time = 0.0;
    double y = p.A;
    double next_reset = p.r > 0.0 ? rng.exponential(p.r) : std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    const double drift_coeff = 0.5 * p.D * (p.d - 1);
    while (k < checkpoints.size()) {
        const double gap = y - p.eps0;
        double step = cfg.dt;
        if (cfg.scheme == RadialScheme::exact_adaptive) {
            const double room = gap / adaptive_step_factor;
            step = std::max(cfg.dt, room * room / p.D);
        }
        const double limit = std::min({next_reset, checkpoints[k], horizon});
        bool at_limit = false;
        if (time + step >= limit) {
            step = limit - time;
            at_limit = true;
        }
        double y_new;
        const double s = std::sqrt(p.D * step);
        if (cfg.scheme == RadialScheme::exact_adaptive) {
            const double x1 = y + s * rng.standard_normal();
            double rest = 0.0;
            for (int i = 1; i < p.d; ++i) {
                const double z = rng.standard_normal();
                rest += z * z;
            }
            y_new = std::sqrt(x1 * x1 + s * s * rest);
        } else {
            y_new = y + drift_coeff / y * step + s * rng.standard_normal();
        }
        if (y_new <= p.eps0) return;
        const double cross = std::exp(-2.0 * gap * (y_new - p.eps0) / (p.D * step));
        if (rng.uniform() < cross) return;
        y = y_new;
        time = at_limit ? limit : time + step;
        if (!at_limit) continue;
        while (k < checkpoints.size() && checkpoints[k] <= time) record(k++, y);
        if (time == next_reset) {
            y = p.A;
            next_reset = time + rng.exponential(p.r);
        }
    }
}

inline void check_radial_config(const ParamsRadial& p, const SimConfig& cfg) {
    check_config(cfg);
    require(cfg.dt > 0.0, "dt must be positive");
    require(cfg.dt <= cfg.t_max / 100.0, "dt must not exceed t_max/100");
    if (std::sqrt(p.D * cfg.dt) > p.eps0 / 4.0) {
        fail(ErrorCategory::domain, "dt too large: sqrt(D dt) exceeds eps0/4");
    }
}

} // namespace detail

/// Survival estimates for the radial process started (and reset) at A.
inline std::vector<SurvivalEstimate> simulate_survival_radial(const ParamsRadial& params, const SimConfig& cfg,
                                                              std::span<const double> ts) {
    require(params.d >= 2, "radial simulation needs d >= 2; use simulate_survival_1d for d = 1");
    const auto& p = checked(params);
    detail::check_radial_config(p, cfg);
    detail::check_times(ts, cfg.t_max);
    const std::vector<CheckpointSums> zero(ts.size());
    const auto sums = detail::run_chunked(
        cfg, zero,
        [&](TrajectoryStream& rng, std::vector<CheckpointSums>& part) {
            detail::simulate_path_radial(rng, p, cfg, ts, [&](std::size_t k, double) { ++part[k].survivors; });
        },
        detail::merge_sums);
    return detail::to_estimates(ts, sums, cfg);
}

/// E[U(Y_t) | tau > t] for the radial process.
inline std::vector<ConditionedEstimate> conditioned_U_expectation(const ParamsRadial& params,
                                                                  const EigenSolutionRadial& sol,
                                                                  const SimConfig& cfg, std::span<const double> ts) {
    const auto& p = checked(params);
    detail::check_radial_config(p, cfg);
    detail::check_times(ts, cfg.t_max);
    const std::vector<CheckpointSums> zero(ts.size());
    const auto sums = detail::run_chunked(
        cfg, zero,
        [&](TrajectoryStream& rng, std::vector<CheckpointSums>& part) {
            detail::simulate_path_radial(rng, p, cfg, ts, [&](std::size_t k, double y) {
                const double u = eigenfunction_U(p, sol, y);
                ++part[k].survivors;
                part[k].sum_f += u;
                part[k].sum_f2 += u * u;
            });
        },
        detail::merge_sums);
    return detail::to_conditioned(ts, sums, cfg.n_trajectories);
}

/// P(tau > t) for planar Brownian motion without resetting, started at
/// distance a from the centre of a target disc of radius eps0.
inline SurvivalEstimate simulate_2d_no_reset_survival(double D, double eps0, double a, double t, SimConfig cfg) {
    require(D > 0.0 && eps0 > 0.0, "D and eps0 must be positive");
    require(a > eps0, "start radius must exceed eps0");
    require(t >= 2.0, "t must be at least 2");
    cfg.t_max = std::max(cfg.t_max, t);
    ParamsRadial p{D, 1.0, 2, eps0, a};
    detail::check_radial_config(p, cfg);
    p.r = 0.0;
    const double ts[] = {t};
    const std::vector<CheckpointSums> zero(1);
    const auto sums = detail::run_chunked(
        cfg, zero,
        [&](TrajectoryStream& rng, std::vector<CheckpointSums>& part) {
            detail::simulate_path_radial(rng, p, cfg, ts, [&](std::size_t k, double) { ++part[k].survivors; });
        },
        detail::merge_sums);
    return detail::to_estimates(ts, sums, cfg).front();
}

/// 1 ^ 2 log(a/eps0) / log t, the order of magnitude of the planar survival probability.
inline double planar_survival_scale(double eps0, double a, double t) {
    return std::min(1.0, 2.0 * std::log(a / eps0) / std::log(t));
}

} // namespace resetting
