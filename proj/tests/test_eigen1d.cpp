#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "resetting/eigen1d.hpp"

using namespace resetting;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Independent oracle: bisection in lambda on psi.
double bisection_lambda(const Params1D& p) {
    return bisect_root([&](double l) { return eigen_residual_1d(p, l); }, 0.0, p.r, 400);
}

std::vector<Params1D> grid() {
    std::vector<Params1D> out;
    for (double D : {0.25, 1.0, 4.0})
        for (double r : {0.5, 1.0, 2.0})
            for (double a : {0.5, 1.0, 2.0, 5.0, 10.0}) out.push_back({D, r, a});
    return out;
}

// Fourth-order one-sided derivative; h > 0 looks right, h < 0 looks left.
template <class F>
double one_sided_d1(F f, double x, double h) {
    return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2 * h) + 16.0 * f(x + 3 * h) - 3.0 * f(x + 4 * h)) /
           (12.0 * h);
}

template <class F>
double d2(F f, double x, double h) {
    const auto c = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
    return (4.0 * c(0.5 * h) - c(h)) / 3.0;
}

} // namespace

TEST(Eigen1D, HighPrecisionValues) {
    struct Ref {
        Params1D p;
        double lambda;
        double M;
    };
    const std::vector<Ref> refs = {
        {{1, 1, 1}, 0.308509715845244941722, 1.06677166178611913049},
        {{1, 1, 2}, 0.0648858425547047674271, 0.967911062786892003799},
        {{1, 1, 5}, 0.000851888174256444642, 0.997836882203121626},
        {{0.25, 2, 10}, 8.4967085105831787126e-18, 0.99999999999999991928},
        {{4, 0.5, 0.5}, 0.47057975105964323521, 8.7526016981730497187},
        {{1, 1, 30}, 3.7535794161285597344e-19, 0.99999999999999999241},
    };
    for (const auto& ref : refs) {
        const auto sol = solve_lambda0(ref.p);
        EXPECT_LT(rel_err(sol.lambda0, ref.lambda), 1e-12) << ref.p.a;
        EXPECT_LT(rel_err(sol.prefactor_M, ref.M), 1e-12) << ref.p.a;
    }
}

TEST(Eigen1D, TinyTargetDistanceKeepsPrefactorAccurate) {
    const auto sol = solve_lambda0({1, 1, 1e-8});
    EXPECT_LT(rel_err(sol.prefactor_M, 2500000000000000.6454), 1e-6);
    EXPECT_LT(sol.lambda0, 1.0);
}

TEST(Eigen1D, AgreesWithBisectionOracle) {
    for (const auto& p : grid()) {
        const auto sol = solve_lambda0(p);
        const double oracle = bisection_lambda(p);
        EXPECT_LT(rel_err(sol.lambda0, oracle), 1e-11) << p.D << " " << p.r << " " << p.a;
        EXPECT_LE(sol.residual, 1e-12 * p.r);
        EXPECT_GE(sol.lambda0, eigenvalue_lower_bound_1d(p));
        EXPECT_LT(sol.lambda0, p.r);
        EXPECT_GT(sol.lambda0, 0.0);
        EXPECT_NEAR(sol.q, std::sqrt(2.0 * (p.r - sol.lambda0) / p.D), 1e-12 * sol.q);
    }
}

TEST(Eigen1D, SingleSignChange) {
    for (const auto& p : grid()) {
        int changes = 0;
        double prev = eigen_residual_1d(p, 0.0);
        for (int k = 1; k <= 10000; ++k) {
            const double cur = eigen_residual_1d(p, p.r * k / 10000.0);
            if ((cur > 0.0) != (prev > 0.0)) ++changes;
            prev = cur;
        }
        EXPECT_EQ(changes, 1) << p.D << " " << p.r << " " << p.a;
    }
}

TEST(Eigen1D, DecreasingInTarget) {
    double prev = solve_lambda0({1, 1, 0.01}).lambda0;
    for (double a = 0.02; a < 30.0; a *= 1.2) {
        const double cur = solve_lambda0({1, 1, a}).lambda0;
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(Eigen1D, LowerBoundIsSharpForDistantTargets) {
    double prev = 1e9;
    for (double a : {2.0, 5.0, 10.0, 20.0, 40.0}) {
        const Params1D p{1, 1, a};
        const double c = solve_lambda0(p).lambda0 / eigenvalue_lower_bound_1d(p);
        EXPECT_GE(c, 1.0);
        EXPECT_LT(c, prev);
        prev = c;
    }
    EXPECT_NEAR(prev, 1.0, 1e-12);
}

TEST(Eigen1D, NegativeTargetIsFolded) {
    const auto pos = solve_lambda0({1, 2, 1.5});
    const auto neg = solve_lambda0({1, 2, -1.5});
    EXPECT_EQ(pos.lambda0, neg.lambda0);
    EXPECT_EQ(pos.prefactor_M, neg.prefactor_M);
}

TEST(Eigen1D, InvalidInputs) {
    for (const Params1D& bad : {Params1D{0, 1, 1}, Params1D{1, -1, 1}, Params1D{1, 1, 0}, Params1D{1, 1, NAN}}) {
        try {
            solve_lambda0(bad);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::domain);
        }
    }
    try {
        solve_lambda0({1, 1, 1}, 1e-30);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::non_convergence);
    }
}

TEST(Eigenfunction, BoundaryValuesAndLimits) {
    const Params1D p{1, 1, 2};
    const auto sol = solve_lambda0(p);
    EXPECT_EQ(eigenfunction_u(p, sol, p.a), 0.0);
    EXPECT_NEAR(eigenfunction_u(p, sol, 0.0), 1.0, 1e-13);
    EXPECT_NEAR(eigenfunction_u(p, sol, -200.0), p.r / (p.r - sol.lambda0), 1e-13);
    for (double x = -5.0; x < p.a; x += 0.1) EXPECT_GT(eigenfunction_u(p, sol, x), 0.0);
    EXPECT_THROW(eigenfunction_u(p, sol, 2.5), Error);

    EXPECT_EQ(adjoint_eigenfunction_v(p, sol, p.a), 0.0);
    EXPECT_NEAR(adjoint_eigenfunction_v(p, sol, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(adjoint_eigenfunction_v(p, sol, -1e-300), 1.0, 1e-15);
    EXPECT_THROW(adjoint_eigenfunction_v(p, sol, 2.5), Error);
}

TEST(Eigenfunction, OdeResiduals) {
    for (const auto& p : grid()) {
        const auto sol = solve_lambda0(p);
        const auto u = [&](double x) { return eigenfunction_u(p, sol, x); };
        const auto v = [&](double y) { return adjoint_eigenfunction_v(p, sol, y); };
        const double u0 = u(0.0);
        const double h = 1e-3 / sol.q;
        for (double frac : {-3.0, -1.0, -0.3, 0.2, 0.5, 0.8}) {
            const double x = frac * p.a;
            const double res_u = 0.5 * p.D * d2(u, x, h) + p.r * (u0 - u(x)) + sol.lambda0 * u(x);
            EXPECT_LT(std::abs(res_u), 1e-7 * (p.r / (p.r - sol.lambda0)) * p.r) << p.D << " " << p.r << " " << p.a << " " << x;
            const double hv = std::min(h, 0.2 * std::abs(x));
            const double res_v = 0.5 * p.D * d2(v, x, hv) - (p.r - sol.lambda0) * v(x);
            EXPECT_LT(std::abs(res_v), 1e-7 * p.r) << p.D << " " << p.r << " " << p.a << " " << x;
        }
    }
}

TEST(Eigenfunction, JumpConditionAtResetPoint) {
    for (const auto& p : grid()) {
        const auto sol = solve_lambda0(p);
        const auto v = [&](double y) { return adjoint_eigenfunction_v(p, sol, y); };
        const double h = std::min(1e-3 / sol.q, p.a / 8.0);
        const double right = one_sided_d1(v, 0.0, h);
        const double left = one_sided_d1(v, -1e-300, -h);
        const double expected = -(2.0 * p.r / p.D) * integral_v(p, sol);
        EXPECT_LT(rel_err(right - left, expected), 1e-9) << p.D << " " << p.r << " " << p.a;
    }
}

TEST(Eigenfunction, ClosedFormIntegrals) {
    for (const auto& p : grid()) {
        const auto sol = solve_lambda0(p);
        const double q = sol.q;
        const double ea = std::exp(q * p.a);
        const double ema = std::exp(-q * p.a);
        const double printed_v = q * p.D * ea / (p.r * (ea - ema));
        const double generic_v = (2.0 / q) * (ea - 1.0) / (ea - ema);
        EXPECT_LT(rel_err(integral_v(p, sol), printed_v), 1e-12);
        EXPECT_LT(rel_err(integral_v(p, sol), generic_v), 1e-11);
        const double k = p.r / (p.r - sol.lambda0);
        const double printed_uv = k * (1.0 / q - ema / (2.0 * q)) +
                                  k / (2.0 * q) / (ea - ema) *
                                      (2.0 * ea + 2.0 * ema - std::exp(-2.0 * q * p.a) - 3.0 - 2.0 * q * p.a);
        EXPECT_LT(rel_err(integral_uv(p, sol), printed_uv), 1e-9) << p.D << " " << p.r << " " << p.a;
    }
}

TEST(Prefactor, ClosedFormMatchesQuadrature) {
    for (const auto& p : grid()) {
        const auto sol = solve_lambda0(p);
        const auto quad = prefactor_M_quadrature(p, sol);
        EXPECT_LT(rel_err(sol.prefactor_M, quad.M), 1e-9) << p.D << " " << p.r << " " << p.a;
        EXPECT_LT(rel_err(quad.integral_v, integral_v(p, sol)), 1e-9);
    }
}

TEST(Prefactor, PositiveAndTendsToOne) {
    for (const auto& p : grid()) EXPECT_GT(solve_lambda0(p).prefactor_M, 0.0);
    EXPECT_NEAR(solve_lambda0({1, 1, 40}).prefactor_M, 1.0, 1e-15);
    EXPECT_NEAR(prefactor_from_qa(1e-6), 0.5 / 1e-6, 1.0);
}

TEST(Survival, AsymptoteAtSmallAndLargeTimes) {
    const Params1D p{1, 1, 2};
    const auto sol = solve_lambda0(p);
    EXPECT_NEAR(survival_asymptote_1d(p, sol, 1e-12), 1.0 / sol.prefactor_M, 1e-12);
    EXPECT_NEAR(survival_asymptote_1d(p, sol, 10.0), std::exp(-10.0 * sol.lambda0) / sol.prefactor_M, 1e-15);
    EXPECT_NEAR(log_survival_asymptote_1d(p, sol, 1e4), std::log(survival_asymptote_1d(p, sol, 1e4)), 1e-10);
    EXPECT_THROW(survival_asymptote_1d(p, sol, 0.0), Error);
}

TEST(MeanTime, Formula) {
    EXPECT_NEAR(mean_time_to_locate_1d({1, 1, 1}), std::exp(std::numbers::sqrt2) - 1.0, 1e-14);
    EXPECT_NEAR(mean_time_to_locate_1d({1, 1, 1}), 3.1132503787829275, 1e-14);
    EXPECT_EQ(mean_time_to_locate_1d({1, 1, 0}), 0.0);
    for (double a : {0.3, 1.0, 2.5}) {
        const Params1D p{2, 0.7, a};
        const Params1D p2{2, 0.7, 2 * a};
        const double one = 1.0 + p.r * mean_time_to_locate_1d(p);
        EXPECT_LT(rel_err(1.0 + p2.r * mean_time_to_locate_1d(p2), one * one), 1e-13);
    }
    try {
        mean_time_to_locate_1d({1, 1, 1e4});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::overflow);
    }
}
