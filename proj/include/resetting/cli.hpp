#pragma once

/// Command-line front end. Every command produces a table written as CSV
/// (with '#' metadata lines) or JSON ({meta, rows}). The metadata carries the
/// resolved parameters and an argv line that reproduces the run.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resetting/eigen1d.hpp"
#include "resetting/eigen_radial.hpp"
#include "resetting/error.hpp"
#include "resetting/mc.hpp"
#include "resetting/speed.hpp"
#include "resetting/target.hpp"

namespace resetting::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, usage = 2, domain = 3, io = 4, numerical = 5 };

inline int exit_code(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::usage: return usage;
    case ErrorCategory::domain: return domain;
    case ErrorCategory::io: return io;
    case ErrorCategory::overflow:
    case ErrorCategory::non_convergence: return numerical;
    }
    return numerical;
}

/// Shortest text that reads back to the same double.
inline std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fixed17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline double grid_number(const std::string& s, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        fail(ErrorCategory::usage, "bad number '" + s + "' in grid '" + text + "'");
    }
    return v;
}

} // namespace detail

/// Comma-separated segments, each a number, a geometric range t0:t1:n
/// (optionally suffixed :geom) or a linear range t0:t1:n:lin.
inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    for (const auto& seg : detail::split(text, ',')) {
        if (seg.find(':') == std::string::npos) {
            out.push_back(detail::grid_number(seg, text));
            continue;
        }
        const auto parts = detail::split(seg, ':');
        if (parts.size() < 3 || parts.size() > 4) {
            fail(ErrorCategory::usage, "grid range must be t0:t1:n[:lin|:geom], got '" + seg + "'");
        }
        const double t0 = detail::grid_number(parts[0], text);
        const double t1 = detail::grid_number(parts[1], text);
        const double nd = detail::grid_number(parts[2], text);
        if (nd < 1 || nd != std::floor(nd) || nd > 1e7) {
            fail(ErrorCategory::usage, "grid point count must be a positive integer in '" + seg + "'");
        }
        const auto n = static_cast<int>(nd);
        const std::string kind = parts.size() == 4 ? parts[3] : "geom";
        if (kind != "geom" && kind != "lin") fail(ErrorCategory::usage, "grid kind must be lin or geom in '" + seg + "'");
        if (kind == "geom" && (t0 <= 0.0 || t1 <= 0.0)) {
            fail(ErrorCategory::usage, "geometric grid needs positive endpoints in '" + seg + "'");
        }
        for (int i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            double v = kind == "lin" ? t0 + (t1 - t0) * f : std::pow(10.0, std::log10(t0) + (std::log10(t1) - std::log10(t0)) * f);
            if (i == 0) v = t0;
            if (i == n - 1 && n > 1) v = t1;
            out.push_back(v);
        }
    }
    return out;
}

using Cell = std::variant<double, std::int64_t, std::string>;

struct Column {
    std::string name;
    std::string unit;
};

/// A computed table with its provenance.
class Artifact {
public:
    explicit Artifact(std::string command) : command_(std::move(command)) { replay_.push_back("resetting " + command_); }

    void param(const std::string& name, double v) {
        params_.emplace_back(name, v);
        replay_.push_back("--" + name + " " + shortest(v));
    }
    void param(const std::string& name, std::int64_t v) {
        params_.emplace_back(name, v);
        replay_.push_back("--" + name + " " + std::to_string(v));
    }
    void param(const std::string& name, const std::string& v) {
        params_.emplace_back(name, v);
        replay_.push_back("--" + name + " " + v);
    }
    void flag(const std::string& name, bool v) {
        params_.emplace_back(name, v);
        if (v) replay_.push_back("--" + name);
    }
    /// Result-level metadata (not part of the replay line).
    void info(const std::string& name, const std::string& v) { info_.emplace_back(name, v); }

    void columns(std::vector<Column> cols) { columns_ = std::move(cols); }
    void row(std::vector<Cell> cells) {
        if (cells.size() != columns_.size()) fail(ErrorCategory::domain, "internal: row width mismatch");
        rows_.push_back(std::move(cells));
    }

    std::string replay_line(const std::string& format) const {
        std::string line;
        for (const auto& part : replay_) line += (line.empty() ? "" : " ") + part;
        return line + " --format " + format;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "# command: " << command_ << '\n';
        for (const auto& [k, v] : params_) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : scalar_text(v)) << '\n';
        for (const auto& [k, v] : info_) os << "# " << k << ": " << v << '\n';
        os << "# argv: " << replay_line("csv") << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            os << (i ? "," : "") << columns_[i].name << '[' << columns_[i].unit << ']';
        }
        os << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) os << ',';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>) os << fixed17(v);
                        else os << v;
                    },
                    r[i]);
            }
            os << '\n';
        }
        return os.str();
    }

    std::string to_json() const {
        Json meta;
        meta["command"] = command_;
        Json params = Json::object();
        for (const auto& [k, v] : params_) params[k] = v;
        meta["params"] = params;
        for (const auto& [k, v] : info_) meta[k] = v;
        Json cols = Json::array();
        for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"unit", c.unit}});
        meta["columns"] = cols;
        meta["argv"] = replay_line("json");
        Json rows = Json::array();
        for (const auto& r : rows_) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < r.size(); ++i) {
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>) obj[columns_[i].name] = std::isfinite(v) ? Json(v) : Json(nullptr);
                        else obj[columns_[i].name] = v;
                    },
                    r[i]);
            }
            rows.push_back(std::move(obj));
        }
        Json doc;
        doc["meta"] = meta;
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }

private:
    static std::string scalar_text(const Json& v) {
        if (v.is_number_float()) return shortest(v.get<double>());
        return v.dump();
    }

    std::string command_;
    std::vector<std::pair<std::string, Json>> params_;
    std::vector<std::pair<std::string, std::string>> info_;
    std::vector<std::string> replay_;
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

namespace detail {

struct Grid {
    std::string text;
    std::vector<double> values;
};

inline Grid grid_param(Artifact& art, const std::string& name, const std::string& text) {
    Grid g{text, parse_grid(text)};
    art.param(name, text);
    return g;
}

inline void require_increasing(const std::vector<double>& ts, const std::string& name) {
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1])) fail(ErrorCategory::domain, name + " grid must be strictly increasing");
    }
}

inline SimConfig sim_config(Artifact& art, std::int64_t n, std::int64_t seed, bool antithetic, unsigned threads) {
    require(n > 0, "n must be positive");
    require(seed >= 0, "seed must be non-negative");
    art.param("n", n);
    art.param("seed", seed);
    art.flag("antithetic", antithetic);
    SimConfig cfg;
    cfg.n_trajectories = static_cast<std::uint64_t>(n);
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.antithetic = antithetic;
    cfg.threads = threads;
    return cfg;
}

} // namespace detail

/// Parsed values for every command; unused fields keep their defaults.
struct Options {
    double D = 1.0;
    double r = 1.0;
    std::string a = "1";
    std::string A = "3";
    int d = 1;
    double eps0 = 0.5;
    std::string t = "10";
    double tol = 1e-13;
    std::int64_t n = 100000;
    std::int64_t seed = 1;
    bool antithetic = false;
    unsigned threads = 0;
    double dt = 1e-3;
    std::string scheme = "exact";
    std::string dist = "gaussian";
    double sigma = 1.0;
    double B = 1.0;
    std::optional<double> l;
    double quad_tol = 1e-8;
    double kappa = 1.0;
    double R = 1.0;
    double epsilon = 0.1;
    double alpha = 1.0;
    std::optional<double> coef_log;
    double coef_loglog = 0.0;
    double shift = 0.0;
    double threshold = 5.0;
    std::string format = "csv";
    std::string output = "-";
};

inline Artifact run_eig1d(const Options& o) {
    Artifact art("eig1d");
    art.param("D", o.D);
    art.param("r", o.r);
    const auto as = detail::grid_param(art, "a", o.a);
    art.param("tol", o.tol);
    for (double a : as.values) checked(Params1D{o.D, o.r, a});
    art.columns({{"a", "length"}, {"lambda0", "1/time"}, {"log_lambda0", "1"}, {"q", "1/length"}, {"M", "1"},
                 {"residual", "1/time"}, {"lower_bound", "1/time"}});
    for (double a : as.values) {
        const Params1D p{o.D, o.r, a};
        const auto s = solve_lambda0(p, o.tol);
        art.row({a, s.lambda0, s.log_lambda0, s.q, s.prefactor_M, s.residual, eigenvalue_lower_bound_1d(p)});
    }
    return art;
}

inline Artifact run_eig_radial(const Options& o) {
    Artifact art("eig-radial");
    art.param("D", o.D);
    art.param("r", o.r);
    art.param("d", std::int64_t{o.d});
    art.param("eps0", o.eps0);
    const auto As = detail::grid_param(art, "A", o.A);
    art.param("tol", o.tol);
    for (double A : As.values) checked(ParamsRadial{o.D, o.r, o.d, o.eps0, A});
    art.columns({{"A", "length"}, {"lambda0", "1/time"}, {"log_lambda0", "1"}, {"q", "1/length"}, {"M", "1"},
                 {"residual", "1/time"}, {"log_lambda0_asymptote", "1"}});
    for (double A : As.values) {
        const ParamsRadial p{o.D, o.r, o.d, o.eps0, A};
        const auto s = solve_lambda0_radial(p, o.tol);
        art.row({A, s.lambda0, s.log_lambda0, s.q, s.prefactor_M, s.residual, log_eigenvalue_asymptote_radial(p)});
    }
    return art;
}

inline Artifact run_survival(const Options& o) {
    Artifact art("survival");
    art.param("D", o.D);
    art.param("r", o.r);
    art.param("d", std::int64_t{o.d});
    const auto as = detail::grid_param(art, "a", o.a);
    if (o.d >= 2) art.param("eps0", o.eps0);
    const auto ts = detail::grid_param(art, "t", o.t);
    for (double t : ts.values) require(t > 0.0, "t must be positive");
    for (double a : as.values) {
        if (o.d == 1) checked(Params1D{o.D, o.r, a});
        else checked(ParamsRadial{o.D, o.r, o.d, o.eps0, a});
    }
    art.columns({{"a", "length"}, {"t", "time"}, {"survival", "1"}, {"log_survival", "1"}, {"lambda0", "1/time"}, {"M", "1"}});
    for (double a : as.values) {
        double lambda = 0.0;
        double M = 1.0;
        if (o.d == 1) {
            const auto s = solve_lambda0({o.D, o.r, a});
            lambda = s.lambda0;
            M = s.prefactor_M;
        } else {
            const auto s = solve_lambda0_radial({o.D, o.r, o.d, o.eps0, a});
            lambda = s.lambda0;
            M = s.prefactor_M;
        }
        for (double t : ts.values) {
            const double log_s = -lambda * t - std::log(M);
            art.row({a, t, std::exp(log_s), log_s, lambda, M});
        }
    }
    return art;
}

inline Artifact run_simulate(const Options& o) {
    Artifact art("simulate");
    art.param("D", o.D);
    art.param("r", o.r);
    art.param("d", std::int64_t{o.d});
    const auto as = detail::grid_param(art, "a", o.a);
    if (as.values.size() != 1) fail(ErrorCategory::usage, "simulate takes a single distance a");
    const double a = as.values.front();
    if (o.d >= 2) {
        art.param("eps0", o.eps0);
        art.param("dt", o.dt);
        art.param("scheme", o.scheme);
    }
    const auto ts = detail::grid_param(art, "t", o.t);
    detail::require_increasing(ts.values, "t");
    auto cfg = detail::sim_config(art, o.n, o.seed, o.antithetic, o.threads);
    cfg.t_max = ts.values.back();
    cfg.dt = o.dt;
    if (o.scheme == "euler") cfg.scheme = RadialScheme::euler_maruyama;
    else if (o.scheme != "exact") fail(ErrorCategory::usage, "scheme must be exact or euler");
    std::vector<SurvivalEstimate> est;
    if (o.d == 1) {
        est = simulate_survival_1d({o.D, o.r, a}, cfg, ts.values);
    } else {
        est = simulate_survival_radial({o.D, o.r, o.d, o.eps0, a}, cfg, ts.values);
    }
    art.columns({{"t", "time"}, {"p_hat", "1"}, {"half_width_95", "1"}, {"n", "count"}});
    for (const auto& e : est) art.row({e.t, e.p_hat, e.half_width_95, static_cast<std::int64_t>(e.n)});
    return art;
}

inline Artifact run_compare(const Options& o) {
    Artifact art("compare");
    art.param("D", o.D);
    art.param("r", o.r);
    const auto as = detail::grid_param(art, "a", o.a);
    if (as.values.size() != 1) fail(ErrorCategory::usage, "compare takes a single distance a");
    const Params1D p{o.D, o.r, as.values.front()};
    checked(p);
    const auto ts = detail::grid_param(art, "t", o.t);
    detail::require_increasing(ts.values, "t");
    auto cfg = detail::sim_config(art, o.n, o.seed, o.antithetic, o.threads);
    cfg.t_max = ts.values.back();
    const auto sol = solve_lambda0(p);
    const auto est = simulate_survival_1d(p, cfg, ts.values);
    art.info("lambda0", shortest(sol.lambda0));
    art.info("M", shortest(sol.prefactor_M));
    art.columns({{"t", "time"}, {"mc_p", "1"}, {"mc_ci", "1"}, {"analytic_p", "1"}, {"ratio", "1"}});
    for (const auto& e : est) {
        const double analytic = survival_asymptote_1d(p, sol, e.t);
        art.row({e.t, e.p_hat, e.half_width_95, analytic, e.p_hat / analytic});
    }
    return art;
}

inline Artifact run_target_fail(const Options& o) {
    Artifact art("target-fail");
    art.param("dist", o.dist);
    std::optional<TargetDistribution> dist;
    if (o.dist == "gaussian") {
        if (o.l && *o.l != 2.0) fail(ErrorCategory::domain, "a gaussian target has l = 2");
        art.param("sigma", o.sigma);
        art.param("d", std::int64_t{o.d});
        dist.emplace(TargetDistribution::gaussian(o.sigma, o.d));
    } else if (o.dist == "exponential") {
        if (o.l && *o.l != 1.0) fail(ErrorCategory::domain, "an exponential target has l = 1");
        if (o.d != 1) fail(ErrorCategory::domain, "the two-sided exponential target is one-dimensional");
        art.param("B", o.B);
        dist.emplace(TargetDistribution::two_sided_exponential(o.B));
    } else if (o.dist == "stretched") {
        if (!o.l) fail(ErrorCategory::usage, "stretched target needs --l");
        art.param("B", o.B);
        art.param("l", *o.l);
        art.param("d", std::int64_t{o.d});
        dist.emplace(o.B, *o.l, o.d);
    } else {
        fail(ErrorCategory::usage, "dist must be gaussian, exponential or stretched");
    }
    art.param("D", o.D);
    art.param("r", o.r);
    const SearchModel model{o.D, o.r, o.d, o.d >= 2 ? o.eps0 : 0.0};
    if (o.d >= 2) art.param("eps0", o.eps0);
    check_model(model);
    const auto ts = detail::grid_param(art, "t", o.t);
    art.param("quad-tol", o.quad_tol);
    require(o.quad_tol > 0.0, "quad-tol must be positive");
    for (double t : ts.values) require(t > std::numbers::e, "t must exceed e");
    const SurvivalLayer layer(model);
    const double limit = scaling_limit(*dist, model);
    art.info("scaling_limit", shortest(limit));
    art.columns({{"t", "time"}, {"failure_probability", "1"}, {"log_failure_probability", "1"},
                 {"scaling_functional", "1"}, {"scaling_limit", "1"}});
    for (double t : ts.values) {
        const auto f = failure_probability(*dist, layer, t, o.quad_tol);
        art.row({t, f.probability, f.log_probability, f.log_probability / std::pow(std::log(t), dist->l()), limit});
    }
    return art;
}

inline Artifact run_laplace(const Options& o) {
    Artifact art("laplace");
    const double l = o.l.value_or(1.0);
    art.param("B", o.B);
    art.param("l", l);
    art.param("kappa", o.kappa);
    art.param("R", o.R);
    const auto ts = detail::grid_param(art, "t", o.t);
    art.param("epsilon", o.epsilon);
    art.param("alpha", o.alpha);
    require(o.B > 0.0 && l > 0.0 && o.kappa > 0.0 && o.R > 0.0, "B, l, kappa, R must be positive");
    for (double t : ts.values) require(t > std::numbers::e, "t must exceed e");
    const double limit = -o.B / std::pow(o.kappa, l);
    art.info("scaling_limit", shortest(limit));
    art.columns({{"t", "time"}, {"status", "label"}, {"a_star", "length"}, {"a_star_scaled", "1"}, {"gamma_at_star", "1"},
                 {"log_integral", "1"}, {"lower_log", "1"}, {"upper_log", "1"}, {"bracketed", "bool"},
                 {"scaled_log_integral", "1"}});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double t : ts.values) {
        std::string status = "ok";
        double a_star = nan;
        double g = nan;
        try {
            const auto p = laplace_minimize(o.B, l, o.kappa, o.R, t);
            a_star = p.a_star;
            g = p.gamma_at_star;
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::domain) throw;
            status = "pre-asymptotic";
        }
        const auto b = laplace_bound_check(o.B, l, o.kappa, o.R, t, o.epsilon, o.alpha);
        const double L = std::log(t);
        art.row({t, status, a_star, a_star * o.kappa / L, g, b.log_integral, b.lower_log, b.upper_log,
                 std::int64_t{b.bracketed}, b.log_integral / std::pow(L, l)});
    }
    return art;
}

inline Artifact run_speed_classify(const Options& o) {
    Artifact art("speed-classify");
    art.param("D", o.D);
    art.param("r", o.r);
    art.param("d", std::int64_t{o.d});
    if (o.d >= 2) art.param("eps0", o.eps0);
    require(o.D > 0.0 && o.r > 0.0, "D and r must be positive");
    const double c1 = o.coef_log.value_or(std::sqrt(o.D / (2.0 * o.r)));
    art.param("coef-log", c1);
    art.param("coef-loglog", o.coef_loglog);
    art.param("shift", o.shift);
    art.param("threshold", o.threshold);
    std::vector<double> ts;
    if (o.t == "default") {
        ts = default_front_grid();
        art.param("t", std::string("default"));
    } else {
        ts = detail::grid_param(art, "t", o.t).values;
    }
    const FrontSchedule sched{[&](double t) { return c1 * std::log(t) + o.coef_loglog * std::log(std::log(t)) + o.shift; },
                              ""};
    ClassifyOptions copt;
    copt.threshold = o.threshold;
    const auto res = classify_schedule(sched, {o.D, o.r, o.d, o.d >= 2 ? o.eps0 : 0.0}, ts, copt);
    art.info("regime", std::string(regime_name(res.regime)));
    art.columns({{"t", "time"}, {"a_t", "length"}, {"drift", "length"}, {"corrected_drift", "length"},
                 {"log_lambda0_t", "1"}});
    for (const auto& s : res.samples) art.row({s.t, s.a_t, s.drift, s.corrected_drift, s.log_lambda_t});
    return art;
}

inline void emit_error(std::ostream& err, const std::string& category, const std::string& message) {
    Json j;
    j["error"] = {{"category", category}, {"message", message}};
    err << j.dump() << '\n';
}

/// Runs one command. args excludes the program name.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app("Search with stochastic resetting: eigenvalues, survival, Monte Carlo, target and front analysis",
                 "resetting");
    app.require_subcommand(1, 1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("-o,--output", o.output, "output file, '-' for standard output");
    };
    const auto model = [&](CLI::App* sub) {
        sub->add_option("--D", o.D, "diffusion coefficient [length^2/time]");
        sub->add_option("--r", o.r, "reset rate [1/time]");
    };
    const auto sim = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "number of trajectories");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_flag("--antithetic", o.antithetic, "antithetic pairs");
        sub->add_option("--threads", o.threads, "worker threads (default: RESETTING_THREADS or all cores)");
    };
    const std::string grid_help = "comma list, t0:t1:n (geometric) or t0:t1:n:lin";

    auto* eig1d = app.add_subcommand("eig1d", "principal eigenvalue on the line");
    model(eig1d);
    eig1d->add_option("--a", o.a, "target distance [length]; " + grid_help);
    eig1d->add_option("--tol", o.tol, "residual tolerance [1/time]");
    common(eig1d);

    auto* eigr = app.add_subcommand("eig-radial", "principal eigenvalue for the radial problem, d >= 2");
    model(eigr);
    eigr->add_option("--d", o.d, "dimension");
    eigr->add_option("--eps0", o.eps0, "target radius [length]");
    eigr->add_option("--A", o.A, "start radius [length]; " + grid_help);
    eigr->add_option("--tol", o.tol, "residual tolerance [1/time]");
    common(eigr);

    auto* surv = app.add_subcommand("survival", "large-t survival (1/M) exp(-lambda0 t)");
    model(surv);
    surv->add_option("--d", o.d, "dimension");
    surv->add_option("--eps0", o.eps0, "target radius for d >= 2 [length]");
    surv->add_option("--a", o.a, "target distance [length]; " + grid_help);
    surv->add_option("--t", o.t, "times [time]; " + grid_help);
    common(surv);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo survival probability");
    model(simulate);
    simulate->add_option("--d", o.d, "dimension");
    simulate->add_option("--eps0", o.eps0, "target radius for d >= 2 [length]");
    simulate->add_option("--a", o.a, "target distance [length]");
    simulate->add_option("--t", o.t, "times [time]; " + grid_help);
    simulate->add_option("--dt", o.dt, "smallest radial step [time]");
    simulate->add_option("--scheme", o.scheme, "radial scheme: exact or euler");
    sim(simulate);
    common(simulate);

    auto* compare = app.add_subcommand("compare", "Monte Carlo survival against the large-t asymptote on the line");
    model(compare);
    compare->add_option("--a", o.a, "target distance [length]");
    compare->add_option("--t", o.t, "times [time]; " + grid_help);
    sim(compare);
    common(compare);

    auto* target = app.add_subcommand("target-fail", "failure probability for a random target");
    model(target);
    target->add_option("--dist", o.dist, "gaussian, exponential or stretched");
    target->add_option("--sigma", o.sigma, "gaussian scale [length]");
    target->add_option("--B", o.B, "tail coefficient");
    target->add_option("--l", o.l, "stretch exponent");
    target->add_option("--d", o.d, "dimension");
    target->add_option("--eps0", o.eps0, "target radius for d >= 2 [length]");
    target->add_option("--t", o.t, "times [time]; " + grid_help);
    target->add_option("--quad-tol", o.quad_tol, "relative quadrature tolerance");
    common(target);

    auto* laplace = app.add_subcommand("laplace", "minimiser and bounds for int exp(-R t e^{-kappa a} - B a^l) da");
    laplace->add_option("--B", o.B, "tail coefficient");
    laplace->add_option("--l", o.l, "stretch exponent");
    laplace->add_option("--kappa", o.kappa, "decay rate [1/length]");
    laplace->add_option("--R", o.R, "eigenvalue prefactor [1/time]");
    laplace->add_option("--t", o.t, "times [time]; " + grid_help);
    laplace->add_option("--epsilon", o.epsilon, "bound slack");
    laplace->add_option("--alpha", o.alpha, "lower-bound constant");
    common(laplace);

    auto* speed = app.add_subcommand("speed-classify", "classify a_t = c1 log t + c2 log log t + shift against the front");
    model(speed);
    speed->add_option("--d", o.d, "dimension");
    speed->add_option("--eps0", o.eps0, "target radius for d >= 2 [length]");
    speed->add_option("--coef-log", o.coef_log, "c1 [length], default sqrt(D/2r)");
    speed->add_option("--coef-loglog", o.coef_loglog, "c2 [length]");
    speed->add_option("--shift", o.shift, "shift [length]");
    speed->add_option("--threshold", o.threshold, "divergence threshold in units of sqrt(D/2r)");
    speed->add_option("--t", o.t, "probe times [time]; default: uniform in log log t up to 1e300, or " + grid_help);
    common(speed);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "usage", e.what());
        return usage;
    }
    if (speed->parsed() && speed->count("--t") == 0) o.t = "default";

    try {
        std::optional<Artifact> art;
        if (eig1d->parsed()) art = run_eig1d(o);
        else if (eigr->parsed()) art = run_eig_radial(o);
        else if (surv->parsed()) art = run_survival(o);
        else if (simulate->parsed()) art = run_simulate(o);
        else if (compare->parsed()) art = run_compare(o);
        else if (target->parsed()) art = run_target_fail(o);
        else if (laplace->parsed()) art = run_laplace(o);
        else art = run_speed_classify(o);

        const std::string text = o.format == "json" ? art->to_json() : art->to_csv();
        if (o.output == "-") {
            out << text;
        } else {
            std::ofstream file(o.output, std::ios::binary);
            if (!file) fail(ErrorCategory::io, "cannot open '" + o.output + "' for writing");
            file << text;
            file.close();
            if (!file) fail(ErrorCategory::io, "write to '" + o.output + "' failed");
        }
        return ok;
    } catch (const Error& e) {
        emit_error(err, std::string(category_name(e.category())), e.what());
        return exit_code(e.category());
    } catch (const std::exception& e) {
        emit_error(err, "numerical", e.what());
        return numerical;
    }
}

} // namespace resetting::cli
