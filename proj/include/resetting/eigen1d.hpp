#pragma once

/// One-dimensional search with resetting: Brownian motion with diffusion
/// coefficient D started at 0, reset to 0 at rate r, target at a.
///
/// The principal eigenvalue solves lambda = r exp(-a sqrt(2(r - lambda)/D)).
/// Writing q = sqrt(2(r - lambda)/D) turns this into
///     r (1 - e^{-aq}) / q = D q / 2,
/// whose left side decreases and right side increases in q, so the root is
/// bracketed by (0, sqrt(2r/D)] and lambda = r e^{-aq} follows without
/// cancellation even when lambda underflows.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resetting/error.hpp"
#include "resetting/quadrature.hpp"
#include "resetting/roots.hpp"

namespace resetting {

struct Params1D {
    double D;
    double r;
    double a;
};

/// Validated copy with the target folded onto the positive half-line.
inline Params1D checked(const Params1D& p) {
    require(p.D > 0.0 && std::isfinite(p.D), "D must be positive and finite");
    require(p.r > 0.0 && std::isfinite(p.r), "r must be positive and finite");
    require(p.a != 0.0 && std::isfinite(p.a), "a must be nonzero and finite");
    return {p.D, p.r, std::abs(p.a)};
}

struct EigenSolution1D {
    double lambda0;     ///< may underflow to 0 for very distant targets; see log_lambda0
    double log_lambda0;
    double q;
    double residual;    ///< |lambda0 - r exp(-a sqrt(2(r - lambda0)/D))|
    double prefactor_M;
    int iterations;
};

/// psi(lambda) = r exp(-a sqrt(2(r - lambda)/D)) - lambda; one sign change on (0, r).
inline double eigen_residual_1d(const Params1D& params, double lambda) {
    const auto p = checked(params);
    return p.r * std::exp(-p.a * std::sqrt(2.0 * (p.r - lambda) / p.D)) - lambda;
}

/// r exp(-sqrt(2r/D) a), the lower eigenvalue bound.
inline double eigenvalue_lower_bound_1d(const Params1D& params) {
    const auto p = checked(params);
    return p.r * std::exp(-std::sqrt(2.0 * p.r / p.D) * p.a);
}

/// M as a function of x = q a:
///     (2e^x - 2 - x) / (2 e^x (1 - e^{-x})^2)
/// rearranged to avoid cancellation for small x.
inline double prefactor_from_qa(double x) {
    const double em = std::expm1(-x);
    return (-2.0 * em - x * std::exp(-x)) / (2.0 * em * em);
}

inline double prefactor_M(const Params1D& params, const EigenSolution1D& sol) {
    const auto p = checked(params);
    return prefactor_from_qa(sol.q * p.a);
}

inline EigenSolution1D solve_lambda0(const Params1D& params, double tol = 1e-14) {
    const auto p = checked(params);
    require(tol > 0.0, "tolerance must be positive");
    if (tol < 4.0 * std::numeric_limits<double>::epsilon() * p.r) {
        fail(ErrorCategory::non_convergence,
             "tolerance " + std::to_string(tol) + " is below double resolution for r=" + std::to_string(p.r));
    }
    const double q_max = std::sqrt(2.0 * p.r / p.D);
    const auto g = [&](double q) { return p.r * (-std::expm1(-p.a * q)) / q - 0.5 * p.D * q; };
    const auto root = brent_root(g, 1e-150 * q_max, q_max);

    EigenSolution1D sol{};
    sol.q = root.root;
    sol.log_lambda0 = std::log(p.r) - p.a * sol.q;
    sol.lambda0 = std::exp(sol.log_lambda0);
    sol.iterations = root.iterations;
    sol.residual = std::abs(eigen_residual_1d(p, sol.lambda0));
    if (sol.residual > tol) {
        fail(ErrorCategory::non_convergence, "eigenvalue residual " + std::to_string(sol.residual) +
                                                 " exceeds tolerance " + std::to_string(tol));
    }
    sol.prefactor_M = prefactor_from_qa(sol.q * p.a);
    return sol;
}

/// u(x) = (r/(r - lambda0)) (1 - e^{-q(a - x)}), normalized so u(0) = 1.
inline double eigenfunction_u(const Params1D& params, const EigenSolution1D& sol, double x) {
    const auto p = checked(params);
    require(x <= p.a, "eigenfunction_u: x must not exceed a");
    const double scale = 2.0 * p.r / (p.D * sol.q * sol.q);
    return scale * -std::expm1(-sol.q * (p.a - x));
}

/// Adjoint eigenfunction: e^{qy} for y < 0, sinh(q(a - y))/sinh(qa) on [0, a].
inline double adjoint_eigenfunction_v(const Params1D& params, const EigenSolution1D& sol, double y) {
    const auto p = checked(params);
    require(y <= p.a, "adjoint_eigenfunction_v: y must not exceed a");
    if (y < 0.0) return std::exp(sol.q * y);
    return std::exp(-sol.q * y) * std::expm1(-2.0 * sol.q * (p.a - y)) / std::expm1(-2.0 * sol.q * p.a);
}

/// Integral of v over (-inf, a].
inline double integral_v(const Params1D& params, const EigenSolution1D& sol) {
    const auto p = checked(params);
    return -sol.q * p.D / (p.r * std::expm1(-2.0 * sol.q * p.a));
}

/// Integral of u v over (-inf, a].
inline double integral_uv(const Params1D& params, const EigenSolution1D& sol) {
    return prefactor_M(params, sol) * integral_v(params, sol);
}

struct PrefactorQuadrature {
    double integral_uv;
    double integral_v;
    double M;
    double left_cutoff; ///< L in the truncated domain [-L, a]
};

/// (int u v)/(int v) by adaptive Simpson on [-L, 0] and [0, a], doubling L
/// until two successive ratios agree to agreement_tol.
inline PrefactorQuadrature prefactor_M_quadrature(const Params1D& params, const EigenSolution1D& sol,
                                                  double agreement_tol = 1e-10) {
    const auto p = checked(params);
    const auto u = [&](double x) { return eigenfunction_u(p, sol, x); };
    const auto v = [&](double y) { return adjoint_eigenfunction_v(p, sol, y); };
    const auto uv = [&](double x) { return u(x) * v(x); };

    // Tolerances are scaled by the size of the integrals.
    const double scale_v = integral_v(p, sol);
    const double scale_uv = scale_v * 2.0 * p.r / (p.D * sol.q * sol.q);
    const double inner_uv = adaptive_simpson(uv, 0.0, p.a, 1e-13 * scale_uv);
    const double inner_v = adaptive_simpson(v, 0.0, p.a, 1e-13 * scale_v);
    double L = std::log(1e16) / sol.q;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < 40; ++k, L *= 2.0) {
        const double iuv = inner_uv + adaptive_simpson(uv, -L, 0.0, 1e-13 * scale_uv);
        const double iv = inner_v + adaptive_simpson(v, -L, 0.0, 1e-13 * scale_v);
        const double m = iuv / iv;
        if (std::abs(m - prev) <= agreement_tol * std::abs(m)) return {iuv, iv, m, L};
        prev = m;
    }
    fail(ErrorCategory::non_convergence, "prefactor quadrature did not stabilise");
}

/// (1/M) e^{-lambda0 t}. Approximates P(tau_a > t) for large t only; it is
/// not a probability bound and exceeds 1 near t = 0 whenever M < 1.
inline double survival_asymptote_1d(const Params1D& params, const EigenSolution1D& sol, double t) {
    require(t > 0.0, "t must be positive");
    return std::exp(-sol.lambda0 * t) / prefactor_M(params, sol);
}

inline double log_survival_asymptote_1d(const Params1D& params, const EigenSolution1D& sol, double t) {
    require(t > 0.0, "t must be positive");
    return -sol.lambda0 * t - std::log(prefactor_M(params, sol));
}

/// E tau_a = (e^{sqrt(2r/D)|a|} - 1) / r.
inline double mean_time_to_locate_1d(const Params1D& params) {
    require(params.D > 0.0 && params.r > 0.0, "D and r must be positive");
    const double v = std::expm1(std::sqrt(2.0 * params.r / params.D) * std::abs(params.a)) / params.r;
    if (!std::isfinite(v)) fail(ErrorCategory::overflow, "mean time to locate overflows");
    return v;
}

} // namespace resetting
