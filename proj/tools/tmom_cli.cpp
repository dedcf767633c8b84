// Command-line surface over the library: skewness term structures (exact and
// simulated), hybrid constraint reports, spectral and MGF diagnostics,
// empirical backtests and deterministic scenario comparisons. Outputs are
// plot-ready delimited text plus a JSON run manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmom/config.hpp"
#include "tmom/linear_moments.hpp"
#include "tmom/mgf.hpp"
#include "tmom/nonlinear_moments.hpp"
#include "tmom/simulate.hpp"
#include "tmom/spectral.hpp"
#include "tmom/term_structure.hpp"
#include "tmom/version.hpp"

namespace {

using tmom::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
    cmd->add_option("--seed", args.seed, "override sim.seed from the config");
    cmd->add_option("--workers", args.workers, "override sim.workers from the config");
}

json load_config(const CommonArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw tmom::DataError("cannot open config file " + args.config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw tmom::ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw tmom::ConfigError("config root must be an object");
    return cfg;
}

void forbid_extra_keys(const json& cfg, std::initializer_list<const char*> allowed) {
    tmom::detail::check_keys(cfg, "<root>", allowed);
}

struct RunWriter {
    std::string command;
    std::filesystem::path out_dir;
    json resolved_config;
    std::uint64_t seed_used = 0;
    bool has_seed = false;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    std::ofstream open(const std::string& name) {
        std::filesystem::create_directories(out_dir);
        outputs.push_back(name);
        std::ofstream os(out_dir / name, std::ios::binary);
        if (!os) throw tmom::DataError("cannot write " + (out_dir / name).string());
        return os;
    }

    void finish() {
        json manifest;
        manifest["command"] = command;
        manifest["config"] = resolved_config;
        manifest["tool_version"] = tmom::version_string;
        if (has_seed) manifest["seed"] = seed_used;
        manifest["outputs"] = outputs;
        manifest["wall_clock_sec"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        manifest["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now).count() / 1e3;
        std::filesystem::create_directories(out_dir);
        std::ofstream os(out_dir / "manifest.json", std::ios::binary);
        os << manifest.dump(2) << "\n";
    }
};

int cmd_skew_linear(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"filter", "pmax"});
    const tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    const long pmax = tmom::detail::require<long>(cfg, "<root>", "pmax");
    const tmom::MomentTermStructure ts = tmom::skew_term_structure(f, pmax);
    RunWriter run{"skew-linear", args.out_dir, cfg, 0, false, {}};
    auto os = run.open("skew_linear.csv");
    tmom::write_delimited(os, ts);
    run.finish();
    return 0;
}

int cmd_skew_nonlinear(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"filter", "activation", "pmax"});
    tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    if (!f.normalized) f = tmom::normalize(f);
    const tmom::ActivationSpec spec = tmom::parse_activation(cfg.at("activation"));
    const long pmax = tmom::detail::require<long>(cfg, "<root>", "pmax");
    const tmom::NonlinearTermStructure r =
        tmom::nonlinear_term_structure(f, spec, pmax);
    RunWriter run{"skew-nonlinear", args.out_dir, cfg, 0, false, {}};
    auto os = run.open("skew_nonlinear.csv");
    tmom::write_delimited(os, r.ts);
    run.finish();
    return 0;
}

int cmd_hybrid(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"fast", "slow", "lambda_fast", "lambda_slow"});
    const auto fast_n = tmom::detail::require<std::vector<double>>(cfg, "<root>", "fast");
    const auto slow_n = tmom::detail::require<std::vector<double>>(cfg, "<root>", "slow");
    if (fast_n.size() != 2 || slow_n.size() != 2)
        throw tmom::ConfigError("config: fast/slow must be [N_fast, N_slow] pairs");
    const tmom::LinearFilter fast = tmom::make_ema_crossover(fast_n[0], fast_n[1]);
    const tmom::LinearFilter slow = tmom::make_ema_crossover(slow_n[0], slow_n[1]);
    const tmom::HybridConstraint hc = tmom::hybrid_roots(fast, slow);

    RunWriter run{"hybrid", args.out_dir, cfg, 0, false, {}};
    auto os = run.open("hybrid_report.txt");
    os << "command: hybrid\n";
    os << "fast: EMA crossover N = (" << fast_n[0] << ", " << fast_n[1] << ")\n";
    os << "slow: EMA crossover N = (" << slow_n[0] << ", " << slow_n[1] << ")\n";
    os << "cubic_coefficients:";
    for (double c : hc.coefficients) os << " " << tmom::format_double(c);
    os << "\n";
    if (hc.degenerate) {
        os << "degenerate: true (leading coefficient vanished; no factorisation)\n";
    } else {
        for (const auto& z : hc.zetas)
            os << "root: " << tmom::format_double(z.real()) << " "
               << (z.imag() < 0 ? "- " : "+ ")
               << tmom::format_double(std::abs(z.imag())) << "i\n";
        if (hc.unique_real_root) {
            os << "zeta1: " << tmom::format_double(hc.zeta1) << "\n";
            os << "positivity_constraint: lambda_F "
               << (hc.zeta1 <= 0 ? "+ " : "- ")
               << tmom::format_double(std::abs(hc.zeta1)) << " * lambda_S > 0\n";
        } else {
            os << "all_roots_real: constraint is the sign of the full cubic; "
                  "no single linear inequality\n";
        }
    }
    if (cfg.contains("lambda_fast") && cfg.contains("lambda_slow")) {
        const double lf = cfg.at("lambda_fast").get<double>();
        const double ls = cfg.at("lambda_slow").get<double>();
        os << "P(" << lf << ", " << ls
           << "): " << tmom::format_double(tmom::hybrid_cubic(lf, ls, fast, slow))
           << "\n";
        os << "asymptotic_skew_coefficient: "
           << tmom::format_double(tmom::asymptotic_skew_coefficient(
                  tmom::combine({fast, slow}, {lf, ls})))
           << "\n";
    }
    run.finish();
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"filter", "activation", "sim"});
    tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    const tmom::ActivationSpec spec = tmom::parse_activation(cfg.at("activation"));
    if (spec.kind != tmom::ActivationSpec::Kind::linear && !f.normalized)
        f = tmom::normalize(f);
    tmom::SimConfig sim = tmom::parse_sim_config(cfg.at("sim"));
    if (args.seed) sim.seed = *args.seed;
    if (args.workers) sim.workers = *args.workers;
    cfg["sim"]["seed"] = sim.seed;
    cfg["sim"]["workers"] = sim.workers;
    const tmom::SimTermStructure r = tmom::simulate_term_structure(sim, f, spec);
    RunWriter run{"simulate", args.out_dir, cfg, sim.seed, true, {}};
    auto os = run.open("sim_term_structure.csv");
    tmom::write_delimited(os, r.ts);
    if (r.nonlinear_nongaussian_warning)
        std::cerr << "warning: nonlinear activation with non-gaussian returns; "
                     "closed-form comparisons do not apply\n";
    run.finish();
    return 0;
}

int cmd_backtest(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"filter", "activation", "backtest"});
    tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    if (!f.normalized) f = tmom::normalize(f);
    const tmom::ActivationSpec spec = tmom::parse_activation(cfg.at("activation"));
    const tmom::BacktestConfig bt = tmom::parse_backtest_config(cfg.at("backtest"));
    const tmom::PriceSeries prices = tmom::load_prices(bt.prices_path);
    tmom::StrategyOptions opts;
    opts.n_vol = bt.n_vol;
    opts.return_kind = bt.return_kind;
    opts.u_cap = bt.u_cap;
    const tmom::StrategyRun sr = tmom::run_strategy(prices, f, spec, opts);
    const tmom::EmpiricalTermStructure ets =
        tmom::empirical_term_structure(sr.pnl, bt.pmax, bt.mode, bt.window);
    const tmom::PerformanceSummary ps =
        tmom::performance_summary(sr.pnl, bt.summary_period);

    RunWriter run{"backtest", args.out_dir, cfg, 0, false, {}};
    {
        auto os = run.open("backtest_term_structure.csv");
        tmom::write_delimited(os, ets.ts);
    }
    {
        auto os = run.open("backtest_summary.txt");
        os << "instrument: " << prices.meta << "\n";
        os << "rows: " << prices.size() << "\n";
        os << "sorted_on_load: " << (prices.sorted_on_load ? "true" : "false") << "\n";
        os << "non_canonical_u_cap: " << (sr.non_canonical ? "true" : "false") << "\n";
        os << "skew_mode: "
           << (bt.mode == tmom::SkewMode::central ? "central" : "noncentral") << "\n";
        os << "windows: "
           << (bt.window == tmom::WindowMode::overlapping ? "overlapping" : "disjoint")
           << "\n";
        os << "summary_period: " << ps.period << "\n";
        os << "sharpe: "
           << (ps.sharpe_defined ? tmom::format_double(ps.sharpe) : "undefined")
           << "\n";
        os << "kappa3: " << tmom::format_double(ps.kappa3) << "\n";
        os << "win_fraction: " << tmom::format_double(ps.win_fraction) << "\n";
        os << "gram_charlier_prob: " << tmom::format_double(ps.gram_charlier) << "\n";
        if (!ets.omitted.empty()) {
            os << "omitted_periods:";
            for (long p : ets.omitted) os << " " << p;
            os << "\n";
        }
    }
    run.finish();
    return 0;
}

int cmd_spectral(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"filter", "P", "tol", "mgf_cumulants"});
    const tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    const long period = tmom::detail::require<long>(cfg, "<root>", "P");
    const double tol = tmom::detail::optional<double>(cfg, "<root>", "tol", 1e-12);
    const bool with_mgf =
        tmom::detail::optional<bool>(cfg, "<root>", "mgf_cumulants", true);
    const tmom::GammaOperator g = tmom::gamma_matrix(f, period, tol);
    const tmom::TraceMoments tm = tmom::trace_moments(g);
    const tmom::EigenSummary es = tmom::eigen_summary(g);

    RunWriter run{"spectral", args.out_dir, cfg, 0, false, {}};
    auto os = run.open("spectral_report.txt");
    os << "P: " << period << "\n";
    os << "truncation_lag: " << g.history << "\n";
    os << "truncation_tol: " << tmom::format_double(g.tol) << "\n";
    os << "dimension: " << g.matrix.rows() << "\n";
    os << "trace: " << tmom::format_double(tm.m1) << "\n";
    os << "m2_trace: " << tmom::format_double(tm.m2) << "\n";
    os << "m2_closed: " << tmom::format_double(tmom::second_moment(f, period)) << "\n";
    os << "m3_trace: " << tmom::format_double(tm.m3) << "\n";
    os << "m3_closed: " << tmom::format_double(tmom::third_moment_closed(f, period))
       << "\n";
    os << "rank: " << es.rank << "\n";
    os << "rank_bound_2P: " << 2 * period << "\n";
    os << "n_positive: " << es.n_positive << "\n";
    os << "n_negative: " << es.n_negative << "\n";
    os << "top_eigenvalues:";
    for (long i = 0; i < std::min<long>(8, es.eigenvalues.size()); ++i)
        os << " " << tmom::format_double(es.eigenvalues(i));
    os << "\n";
    os << "bottom_eigenvalues:";
    for (long i = std::max<long>(0, es.eigenvalues.size() - 8);
         i < es.eigenvalues.size(); ++i)
        os << " " << tmom::format_double(es.eigenvalues(i));
    os << "\n";
    if (with_mgf) {
        const tmom::Cumulants c = tmom::cumulants_from_mgf(f, period);
        os << "mgf_kappa1: " << tmom::format_double(c.k1) << "\n";
        os << "mgf_kappa2: " << tmom::format_double(c.k2) << "\n";
        os << "mgf_kappa3: " << tmom::format_double(c.k3) << "\n";
    }
    const tmom::SprzReport rep = tmom::sprz_check(f);
    os << "sprz_pass: " << (rep.pass ? "true" : "false") << "\n";
    if (!rep.message.empty()) os << "sprz_notes: " << rep.message << "\n";
    run.finish();
    return 0;
}

int cmd_scenario(const CommonArgs& args) {
    json cfg = load_config(args);
    forbid_extra_keys(cfg, {"prices", "filter", "activations", "n_vol"});
    tmom::LinearFilter f = tmom::parse_filter(cfg.at("filter"));
    if (!f.normalized) f = tmom::normalize(f);
    const std::string prices_path =
        tmom::detail::require<std::string>(cfg, "<root>", "prices");
    const tmom::PriceSeries prices = tmom::load_prices(prices_path);
    tmom::StrategyOptions opts;
    opts.n_vol = tmom::detail::optional<double>(cfg, "<root>", "n_vol", 20.0);
    if (!cfg.contains("activations") || !cfg.at("activations").is_array() ||
        cfg.at("activations").empty())
        throw tmom::ConfigError("config: scenario needs activations[]");
    std::vector<tmom::ActivationSpec> specs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < cfg.at("activations").size(); ++i) {
        const json& a = cfg.at("activations")[i];
        specs.push_back(
            tmom::parse_activation(a, "activations[" + std::to_string(i) + "]"));
        names.push_back(a.value("type", "activation") + "_" + std::to_string(i));
    }
    std::vector<tmom::ScenarioResult> results;
    for (const auto& s : specs)
        results.push_back(tmom::scenario_run(prices, f, s, opts));

    RunWriter run{"scenario", args.out_dir, cfg, 0, false, {}};
    auto os = run.open("scenario_pnl.csv");
    os << "date";
    for (const auto& n : names) os << ",cum_pnl_" << n;
    os << "\n";
    for (std::size_t i = 0; i < results[0].cumulative_pnl.size(); ++i) {
        os << results[0].dates[i];
        for (const auto& r : results)
            os << "," << tmom::format_double(r.cumulative_pnl[i]);
        os << "\n";
    }
    run.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"moment and skewness analytics for EMA momentum strategies"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;

    struct Command {
        const char* name;
        const char* desc;
        int (*fn)(const CommonArgs&);
    };
    const std::vector<Command> commands = {
        {"skew-linear", "exact skewness term structure of a linear strategy",
         cmd_skew_linear},
        {"skew-nonlinear", "skewness term structure under an activation function",
         cmd_skew_nonlinear},
        {"hybrid", "fast/slow mixture positivity constraint (cubic roots)",
         cmd_hybrid},
        {"simulate", "Monte Carlo term structure with standard errors",
         cmd_simulate},
        {"backtest", "empirical term structure and summary from a price file",
         cmd_backtest},
        {"spectral", "trading-return quadratic form: traces, spectrum, cumulants",
         cmd_spectral},
        {"scenario", "deterministic price-path comparison of activations",
         cmd_scenario}};
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.desc);
        add_common(sub, args);
        sub->callback([&handler, fn = c.fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return handler(args);
    } catch (const tmom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tmom::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}
