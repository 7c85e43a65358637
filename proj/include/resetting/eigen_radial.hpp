#pragma once

/// Radial search with resetting in dimension d >= 2: a Bessel process of
/// order d started at radius A, reset to A at rate r and killed on reaching
/// the target radius eps0 < A.
///
/// The eigenvalue equation
///     lambda = r (eps0/A)^nu K_nu(qA) / K_nu(q eps0),  nu = (d-2)/2,
///     q = sqrt(2(r - lambda)/D)
/// is solved in q, with the Bessel ratio formed from scaled values in log
/// space so that A may be large enough for lambda to underflow.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "resetting/error.hpp"
#include "resetting/quadrature.hpp"
#include "resetting/roots.hpp"
#include "resetting/special.hpp"

namespace resetting {

struct ParamsRadial {
    double D;
    double r;
    int d;
    double eps0;
    double A;
};

inline const ParamsRadial& checked(const ParamsRadial& p) {
    require(p.D > 0.0 && std::isfinite(p.D), "D must be positive and finite");
    require(p.r > 0.0 && std::isfinite(p.r), "r must be positive and finite");
    require(p.d >= 2, "radial problem needs dimension d >= 2");
    require(p.eps0 > 0.0 && std::isfinite(p.eps0), "eps0 must be positive and finite");
    require(p.A > p.eps0 && std::isfinite(p.A), "A must exceed eps0");
    return p;
}

struct EigenSolutionRadial {
    double lambda0;
    double log_lambda0;
    double q;
    double residual;
    double prefactor_M;
    int iterations;
};

namespace detail {

// log( (eps0/x)^nu K_nu(qx) / K_nu(q eps0) ) for x >= eps0.
inline double log_k_ratio(const ParamsRadial& p, double q, double x) {
    const auto nu = BesselOrder::from_dimension(p.d);
    return nu.value() * std::log(p.eps0 / x) + std::log(bessel_k_scaled(nu, q * x)) -
           std::log(bessel_k_scaled(nu, q * p.eps0)) - q * (x - p.eps0);
}

} // namespace detail

/// Right side minus left side of the eigenvalue equation, as a function of lambda.
inline double eigen_residual_radial(const ParamsRadial& params, double lambda) {
    const auto& p = checked(params);
    const double q = std::sqrt(2.0 * (p.r - lambda) / p.D);
    return p.r * std::exp(detail::log_k_ratio(p, q, p.A)) - lambda;
}

/// C(r, eps0, D) = r^{3/4} eps0^nu (pi^2 D / 8)^{1/4} / K_nu(sqrt(2r/D) eps0),
/// the limit of lambda0 A^{(d-1)/2} e^{sqrt(2r/D) A} as A grows.
inline double radial_limit_constant(double D, double r, int d, double eps0) {
    const auto nu = BesselOrder::from_dimension(d);
    const double k = std::sqrt(2.0 * r / D);
    const double log_c = 0.75 * std::log(r) + nu.value() * std::log(eps0) +
                         0.25 * std::log(std::numbers::pi * std::numbers::pi * D / 8.0) -
                         log_bessel_k(nu, k * eps0);
    return std::exp(log_c);
}

/// log of C A^{(1-d)/2} e^{-sqrt(2r/D) A}, the large-A form of lambda0.
inline double log_eigenvalue_asymptote_radial(const ParamsRadial& params) {
    const auto& p = checked(params);
    return std::log(radial_limit_constant(p.D, p.r, p.d, p.eps0)) + 0.5 * (1.0 - p.d) * std::log(p.A) -
           std::sqrt(2.0 * p.r / p.D) * p.A;
}

/// U(x) = (r/(r - lambda0)) (1 - (x/eps0)^{-nu} K_nu(qx)/K_nu(q eps0)), x >= eps0; U(A) = 1.
inline double eigenfunction_U(const ParamsRadial& params, const EigenSolutionRadial& sol, double x) {
    const auto& p = checked(params);
    require(x >= p.eps0, "eigenfunction_U: x must be at least eps0");
    const double scale = 2.0 * p.r / (p.D * sol.q * sol.q);
    return scale * -std::expm1(detail::log_k_ratio(p, sol.q, x));
}

/// e^{qA} V(y): the adjoint eigenfunction rescaled so that it stays
/// representable for large A. Any positive multiple of V is an eigenfunction.
inline double adjoint_eigenfunction_V_scaled(const ParamsRadial& params, const EigenSolutionRadial& sol,
                                             double y) {
    const auto& p = checked(params);
    require(y >= p.eps0, "adjoint_eigenfunction_V: y must be at least eps0");
    const auto nu = BesselOrder::from_dimension(p.d);
    const double q = sol.q;
    const double power = std::pow(y, 0.5 * p.d);
    if (y >= p.A) return power * bessel_k_scaled(nu, q * y) * std::exp(-q * (y - p.A));
    const double is_e = bessel_i_scaled(nu, q * p.eps0);
    const double ks_e = bessel_k_scaled(nu, q * p.eps0);
    const double num = is_e * bessel_k_scaled(nu, q * y) * std::exp(-2.0 * q * (y - p.eps0)) -
                       bessel_i_scaled(nu, q * y) * ks_e;
    const double ks_a = bessel_k_scaled(nu, q * p.A);
    const double den = is_e * ks_a * std::exp(-2.0 * q * (p.A - p.eps0)) - bessel_i_scaled(nu, q * p.A) * ks_e;
    return power * ks_a * std::exp(q * (y - p.A)) * num / den;
}

/// V(y) with the normalization V = y^{d/2} K_nu(qy) for y >= A.
inline double adjoint_eigenfunction_V(const ParamsRadial& params, const EigenSolutionRadial& sol, double y) {
    return adjoint_eigenfunction_V_scaled(params, sol, y) * std::exp(-sol.q * checked(params).A);
}

struct RadialPrefactor {
    double integral_UV; ///< with V scaled by e^{qA}
    double integral_V;  ///< with V scaled by e^{qA}
    double M;
    double upper_cutoff;
};

/// (int U V)/(int V) over [eps0, inf), truncated where V < 1e-18 max V.
inline RadialPrefactor prefactor_M_radial_detail(const ParamsRadial& params, const EigenSolutionRadial& sol,
                                                double rel_tol = 1e-10) {
    const auto& p = checked(params);
    const double q = sol.q;
    // Beyond A, V decays like y^{(d-1)/2} e^{-q(y - A)}.
    const double drop = std::log(1e18);
    double cutoff = p.A + drop / q;
    for (int k = 0; k < 50; ++k) cutoff = p.A + (drop + 0.5 * (p.d - 1) * std::log(cutoff / p.A)) / q;

    const auto v = [&](double y) { return adjoint_eigenfunction_V_scaled(p, sol, y); };
    const auto uv = [&](double y) { return eigenfunction_U(p, sol, y) * v(y); };
    const double decay = 1.0 / q;
    const std::array<double, 5> pts{p.eps0, 0.5 * (p.eps0 + p.A), p.A, std::min(cutoff, p.A + 4.0 * decay), cutoff};
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    const auto iv = integrate(v, std::span<const double>(pts), opt);
    const auto iuv = integrate(uv, std::span<const double>(pts), opt);
    return {iuv.value, iv.value, iuv.value / iv.value, cutoff};
}

inline double prefactor_M_radial(const ParamsRadial& params, const EigenSolutionRadial& sol) {
    return prefactor_M_radial_detail(params, sol).M;
}

inline EigenSolutionRadial solve_lambda0_radial(const ParamsRadial& params, double tol = 1e-13) {
    const auto& p = checked(params);
    require(tol > 0.0, "tolerance must be positive");
    if (tol < 4.0 * std::numeric_limits<double>::epsilon() * p.r) {
        fail(ErrorCategory::non_convergence,
             "tolerance " + std::to_string(tol) + " is below double resolution for r=" + std::to_string(p.r));
    }
    const double q_max = std::sqrt(2.0 * p.r / p.D);
    const auto h = [&](double q) {
        return p.r * -std::expm1(detail::log_k_ratio(p, q, p.A)) - 0.5 * p.D * q * q;
    };
    // d = 2 has the spurious root q = 0; start where h is clearly positive.
    double q_lo = 1e-3 * q_max;
    while (h(q_lo) <= 0.0) {
        q_lo *= 1e-3;
        if (q_lo < 1e-200 * q_max) fail(ErrorCategory::non_convergence, "radial eigenvalue: no bracket");
    }
    const auto root = brent_root(h, q_lo, q_max);

    EigenSolutionRadial sol{};
    sol.q = root.root;
    sol.log_lambda0 = std::log(p.r) + detail::log_k_ratio(p, sol.q, p.A);
    sol.lambda0 = std::exp(sol.log_lambda0);
    sol.iterations = root.iterations;
    sol.residual = std::abs(eigen_residual_radial(p, sol.lambda0));
    if (sol.residual > tol) {
        fail(ErrorCategory::non_convergence, "radial eigenvalue residual " + std::to_string(sol.residual) +
                                                 " exceeds tolerance " + std::to_string(tol));
    }
    sol.prefactor_M = prefactor_M_radial(p, sol);
    return sol;
}

/// (1/M) e^{-lambda0 t}; a large-t approximation to the survival probability.
inline double survival_asymptote_radial(const ParamsRadial& params, const EigenSolutionRadial& sol, double t) {
    checked(params);
    require(t > 0.0, "t must be positive");
    return std::exp(-sol.lambda0 * t) / sol.prefactor_M;
}

} // namespace resetting
