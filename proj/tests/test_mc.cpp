#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "resetting/mc.hpp"

using namespace resetting;

TEST(Philox, KnownAnswerVectors) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, UniformAndNormalMoments) {
    TrajectoryStream rng(7, 3);
    double su = 0, sz = 0, sz2 = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.standard_normal();
        sz += z;
        sz2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sz / n, 0.0, 4 / std::sqrt(double(n)));
    EXPECT_NEAR(sz2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Stream, AntitheticMirrorsDraws) {
    TrajectoryStream plain(11, 5);
    TrajectoryStream mirror(11, 5, true);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(plain.uniform() + mirror.uniform(), 1.0);
        EXPECT_EQ(plain.standard_normal(), -mirror.standard_normal());
    }
}

TEST(Stream, DistinctTrajectoriesAndSeedsDiffer) {
    TrajectoryStream a(1, 0), b(1, 1), c(2, 0);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(NoResetCdf, ReflectionPrinciple) {
    EXPECT_NEAR(bm_no_reset_survival_cdf(1, 1, 1), 0.68268949213708589717, 1e-15);
    EXPECT_NEAR(bm_no_reset_survival_cdf(1, 1, 1e-12), 1.0, 1e-15);
    EXPECT_LT(bm_no_reset_survival_cdf(1, 1, 1e12), 1e-5);
    EXPECT_THROW(bm_no_reset_survival_cdf(1, -1, 1), Error);
}

TEST(Simulate1D, ThreadCountDoesNotChangeResults) {
    SimConfig cfg;
    cfg.n_trajectories = 30000;
    cfg.t_max = 20;
    cfg.seed = 99;
    const std::vector<double> ts{1, 5, 20};
    cfg.threads = 1;
    const auto one = simulate_survival_1d({1, 1, 1}, cfg, ts);
    cfg.threads = 3;
    const auto three = simulate_survival_1d({1, 1, 1}, cfg, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_EQ(one[k].p_hat, three[k].p_hat);
    cfg.antithetic = true;
    const auto anti1 = simulate_survival_1d({1, 1, 1}, cfg, ts);
    cfg.threads = 1;
    const auto anti2 = simulate_survival_1d({1, 1, 1}, cfg, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_EQ(anti1[k].p_hat, anti2[k].p_hat);
}

TEST(Simulate1D, EstimateInvariants) {
    SimConfig cfg;
    cfg.n_trajectories = 20000;
    cfg.t_max = 50;
    const std::vector<double> ts{0.5, 1, 2, 4, 8, 16, 32, 50};
    const auto est = simulate_survival_1d({1, 1, 1}, cfg, ts);
    for (std::size_t k = 0; k < est.size(); ++k) {
        EXPECT_GE(est[k].p_hat, 0.0);
        EXPECT_LE(est[k].p_hat, 1.0);
        EXPECT_DOUBLE_EQ(est[k].half_width_95, 1.96 * std::sqrt(est[k].p_hat * (1 - est[k].p_hat) / est[k].n));
        if (k > 0) {
            EXPECT_LE(est[k].p_hat, est[k - 1].p_hat);
        }
    }
}

TEST(Simulate1D, VanishingResetMatchesReflectionPrinciple) {
    SimConfig cfg;
    cfg.n_trajectories = 200000;
    cfg.t_max = 10;
    const std::vector<double> ts{0.25, 1, 4, 10};
    const auto est = simulate_survival_1d({1, 1e-9, 1}, cfg, ts);
    for (const auto& e : est) {
        const double exact = bm_no_reset_survival_cdf(1, 1, e.t);
        EXPECT_NEAR(e.p_hat, exact, 4 * std::sqrt(exact * (1 - exact) / e.n)) << e.t;
    }
}

TEST(Simulate1D, MeanTimeToLocate) {
    SimConfig cfg;
    cfg.n_trajectories = 200000;
    cfg.seed = 3;
    const auto m = simulate_first_passage_1d({1, 1, 1}, cfg);
    EXPECT_NEAR(m.mean, mean_time_to_locate_1d({1, 1, 1}), 4 * m.standard_error);
}

TEST(Simulate1D, LogSlopeMatchesEigenvalue) {
    const Params1D p{1, 1, 1};
    const auto sol = solve_lambda0(p);
    SimConfig cfg;
    cfg.n_trajectories = 200000;
    cfg.t_max = 12;
    std::vector<double> ts;
    for (double t = 3; t <= 12.0001; t += 1) ts.push_back(t);
    const auto est = simulate_survival_1d(p, cfg, ts);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : est) {
        const double y = std::log(e.p_hat);
        sx += e.t;
        sy += y;
        sxx += e.t * e.t;
        sxy += e.t * y;
    }
    const double n = est.size();
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(-slope / sol.lambda0, 1.0, 0.02);
}

TEST(Simulate1D, MartingaleIdentity) {
    const Params1D p{1, 1, 2};
    const auto sol = solve_lambda0(p);
    SimConfig cfg;
    cfg.n_trajectories = 200000;
    cfg.t_max = 10;
    const std::vector<double> ts{1, 3, 10};
    for (const auto& e : conditioned_u_expectation(p, sol, cfg, ts)) {
        EXPECT_NEAR(e.product, std::exp(-sol.lambda0 * e.t), 4 * e.product_std_error) << e.t;
        EXPECT_NEAR(e.product, e.p_hat * e.conditional_mean, 1e-12);
    }
}

TEST(Simulate1D, ConditionedExpectationNearOneForDistantTarget) {
    const Params1D p{1, 1, 10 / std::sqrt(2.0)};
    const auto sol = solve_lambda0(p);
    SimConfig cfg;
    cfg.n_trajectories = 20000;
    cfg.t_max = 40;
    const std::vector<double> ts{0.5, 2, 10, 40};
    for (const auto& e : conditioned_u_expectation(p, sol, cfg, ts)) EXPECT_NEAR(e.conditional_mean, 1.0, 0.01);
}

TEST(Simulate1D, TooFewSurvivors) {
    const Params1D p{1, 1, 0.1};
    const auto sol = solve_lambda0(p);
    SimConfig cfg;
    cfg.n_trajectories = 1000;
    cfg.t_max = 50;
    try {
        conditioned_u_expectation(p, sol, cfg, 50.0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::non_convergence);
    }
}

TEST(Simulate1D, InvalidConfig) {
    SimConfig cfg;
    cfg.t_max = 10;
    const std::vector<double> unsorted{2, 1};
    EXPECT_THROW(simulate_survival_1d({1, 1, 1}, cfg, unsorted), Error);
    const std::vector<double> beyond{20};
    EXPECT_THROW(simulate_survival_1d({1, 1, 1}, cfg, beyond), Error);
    cfg.n_trajectories = 0;
    const std::vector<double> ok{1};
    EXPECT_THROW(simulate_survival_1d({1, 1, 1}, cfg, ok), Error);
}

TEST(SimulateRadial, Validation) {
    SimConfig cfg;
    cfg.t_max = 10;
    cfg.dt = 1e-3;
    const std::vector<double> ts{1};
    try {
        simulate_survival_radial({1, 1, 1, 0.5, 3}, cfg, ts);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::domain);
    }
    cfg.dt = 0.05;
    EXPECT_THROW(simulate_survival_radial({1, 1, 2, 0.5, 3}, cfg, ts), Error);
    cfg.dt = 0.2;
    cfg.t_max = 10;
    EXPECT_THROW(simulate_survival_radial({1, 1, 2, 5, 6}, cfg, ts), Error);
}

TEST(SimulateRadial, TransienceWithoutResetInThreeDimensions) {
    SimConfig cfg;
    cfg.n_trajectories = 40000;
    cfg.t_max = 400;
    const std::vector<double> ts{25, 100, 400};
    const auto est = simulate_survival_radial({1, 1e-9, 3, 0.5, 3}, cfg, ts);
    const double never_hit = 1.0 - 0.5 / 3.0;
    for (const auto& e : est) EXPECT_GT(e.p_hat, never_hit - 0.01);
    EXPECT_LT(est.back().p_hat, never_hit + 0.04);
    EXPECT_GT(est.front().p_hat - est.back().p_hat, 0.0);
}

TEST(SimulateRadial, AgreesWithEigenvalueSlope) {
    const ParamsRadial p{1, 1, 3, 0.5, 1.5};
    const auto sol = solve_lambda0_radial(p);
    SimConfig cfg;
    cfg.n_trajectories = 100000;
    cfg.t_max = 20;
    const std::vector<double> ts{5, 10, 15, 20};
    const auto est = simulate_survival_radial(p, cfg, ts);
    const double slope = (std::log(est.back().p_hat) - std::log(est.front().p_hat)) / 15.0;
    EXPECT_NEAR(-slope / sol.lambda0, 1.0, 0.05);
}

TEST(SimulateRadial, MartingaleIdentity) {
    const ParamsRadial p{1, 1, 2, 0.5, 1.5};
    const auto sol = solve_lambda0_radial(p);
    SimConfig cfg;
    cfg.n_trajectories = 100000;
    cfg.t_max = 10;
    const std::vector<double> ts{2, 10};
    for (const auto& e : conditioned_U_expectation(p, sol, cfg, ts)) {
        EXPECT_NEAR(e.product, std::exp(-sol.lambda0 * e.t), 4 * e.product_std_error + 2e-3) << e.t;
    }
}

TEST(SimulateRadial, HalvingStepIsWithinNoise) {
    const ParamsRadial p{1, 1, 2, 0.5, 1.5};
    SimConfig cfg;
    cfg.n_trajectories = 100000;
    cfg.t_max = 5;
    cfg.dt = 2e-3;
    const std::vector<double> ts{5};
    const auto coarse = simulate_survival_radial(p, cfg, ts).front();
    cfg.dt = 1e-3;
    cfg.seed = 2;
    const auto fine = simulate_survival_radial(p, cfg, ts).front();
    EXPECT_LT(std::abs(coarse.p_hat - fine.p_hat), coarse.half_width_95 + fine.half_width_95);
}

TEST(SimulateRadial, EulerSchemeAgreesWithExactTransition) {
    const ParamsRadial p{1, 1, 2, 0.5, 1.0};
    SimConfig cfg;
    cfg.n_trajectories = 20000;
    cfg.t_max = 2;
    cfg.dt = 1e-3;
    const std::vector<double> ts{2};
    const auto exact = simulate_survival_radial(p, cfg, ts).front();
    cfg.scheme = RadialScheme::euler_maruyama;
    const auto euler = simulate_survival_radial(p, cfg, ts).front();
    EXPECT_LT(std::abs(exact.p_hat - euler.p_hat), 1.5 * (exact.half_width_95 + euler.half_width_95));
}

TEST(Planar, StartNearTargetIsLocatedQuickly) {
    SimConfig cfg;
    cfg.n_trajectories = 20000;
    cfg.dt = 1e-4;
    const auto e = simulate_2d_no_reset_survival(1, 1, 1.001, 100, cfg);
    EXPECT_LT(e.p_hat, 0.01);
    EXPECT_THROW(simulate_2d_no_reset_survival(1, 1, 0.5, 100, cfg), Error);
    EXPECT_THROW(simulate_2d_no_reset_survival(1, 1, 2, 1, cfg), Error);
}

TEST(Planar, FarStartRarelyLocated) {
    SimConfig cfg;
    cfg.n_trajectories = 20000;
    const double t = 100;
    const auto e = simulate_2d_no_reset_survival(1, 1, 10 * std::sqrt(t) * 3, t, cfg);
    EXPECT_GT(e.p_hat, 0.98);
}
