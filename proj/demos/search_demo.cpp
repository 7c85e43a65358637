// Walk-through of the library on one configuration: eigenvalue, survival
// asymptote against simulation, a random Gaussian target and a moving target.

#include <cmath>
#include <cstdio>
#include <vector>

#include "resetting/resetting.hpp"

using namespace resetting;

int main() {
    const Params1D p{1.0, 1.0, 2.0};
    const auto sol = solve_lambda0(p);
    std::printf("D=%g r=%g a=%g: lambda0=%.12g M=%.12g mean time to locate=%.6g\n", p.D, p.r, p.a, sol.lambda0,
                sol.prefactor_M, mean_time_to_locate_1d(p));

    SimConfig cfg;
    cfg.n_trajectories = 200000;
    cfg.seed = 7;
    const std::vector<double> ts{5, 10, 20, 40};
    cfg.t_max = ts.back();
    std::printf("\n%8s %12s %12s %10s\n", "t", "simulated", "asymptote", "ratio");
    for (const auto& e : simulate_survival_1d(p, cfg, ts)) {
        const double a = survival_asymptote_1d(p, sol, e.t);
        std::printf("%8g %12.6f %12.6f %10.4f\n", e.t, e.p_hat, a, e.p_hat / a);
    }

    const auto target = TargetDistribution::gaussian(1.0, 1);
    const SurvivalLayer layer({p.D, p.r, 1});
    std::printf("\nGaussian target, sigma=1: limit of log P(fail) / (log t)^2 is %g\n",
                scaling_limit(target, layer.model()));
    for (double t : {1e3, 1e6, 1e9}) {
        const auto f = failure_probability(target, layer, t);
        std::printf("  t=%-6g P(fail)=%-12.6g scaled log=%.5f\n", t, f.probability,
                    f.log_probability / std::pow(std::log(t), 2));
    }

    const double len = std::sqrt(p.D / (2.0 * p.r));
    for (double c : {-1.0, 1.0}) {
        const FrontSchedule s{[=](double t) { return len * std::log(t) + c * std::log(std::log(t)); }, ""};
        const auto res = classify_schedule(s, {p.D, p.r, 1});
        std::printf("\na_t = sqrt(D/2r) log t %+g log log t: %s\n", c, std::string(regime_name(res.regime)).c_str());
    }
}
