#pragma once

/// JSON configuration schema shared by every command: filters, activations,
/// simulation settings and backtest settings. Parsing is strict: unknown keys
/// are errors that name the key and its path.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmom/activation.hpp"
#include "tmom/backtest.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/rng.hpp"
#include "tmom/simulate.hpp"

namespace tmom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw ConfigError("config " + path + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) ok = true;
        if (!ok)
            throw ConfigError("config " + path + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
T require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key))
        throw ConfigError("config " + path + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config " + path + ": bad value for '" + key + "'");
    }
}

template <class T>
T optional(const json& obj, const std::string& path, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config " + path + ": bad value for '" + key + "'");
    }
}

} // namespace detail

/// {"type":"ema1","N":20,"normalized":true}
/// {"type":"ema2","N":[20,40],"normalized":true}
/// {"type":"combo","components":[...],"weights":[...],"normalized":false}
inline LinearFilter parse_filter(const json& obj, const std::string& path = "filter") {
    const std::string type = detail::require<std::string>(obj, path, "type");
    try {
        if (type == "ema1") {
            detail::check_keys(obj, path, {"type", "N", "normalized"});
            return make_ema1(detail::require<double>(obj, path, "N"),
                             detail::optional<bool>(obj, path, "normalized", false));
        }
        if (type == "ema2") {
            detail::check_keys(obj, path, {"type", "N", "normalized"});
            const auto n = detail::require<std::vector<double>>(obj, path, "N");
            if (n.size() != 2)
                throw ConfigError("config " + path + ": ema2 needs N = [Na, Nb]");
            return make_ema2(n[0], n[1],
                             detail::optional<bool>(obj, path, "normalized", false));
        }
        if (type == "combo") {
            detail::check_keys(obj, path, {"type", "components", "weights", "normalized"});
            if (!obj.contains("components") || !obj.at("components").is_array())
                throw ConfigError("config " + path + ": combo needs components[]");
            std::vector<LinearFilter> parts;
            for (std::size_t i = 0; i < obj.at("components").size(); ++i)
                parts.push_back(parse_filter(obj.at("components")[i],
                                             path + ".components[" +
                                                 std::to_string(i) + "]"));
            const auto w = detail::require<std::vector<double>>(obj, path, "weights");
            if (w.size() != parts.size())
                throw ConfigError("config " + path +
                                  ": weights size must match components");
            LinearFilter f = combine(parts, w);
            if (detail::optional<bool>(obj, path, "normalized", false))
                f = normalize(f);
            return f;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    throw ConfigError("config " + path + ": unknown filter type '" + type + "'");
}

/// {"type":"linear"} | {"type":"sigmoid","lambda":1.0}
/// {"type":"reverting","lambda":1.5} | {"type":"double_step","epsilon":0.6}
/// {"type":"compound","lambda":0.75,"ratio":2.4}
inline ActivationSpec parse_activation(const json& obj,
                                       const std::string& path = "activation") {
    const std::string type = detail::require<std::string>(obj, path, "type");
    try {
        if (type == "linear") {
            detail::check_keys(obj, path, {"type"});
            return activation_linear();
        }
        if (type == "sigmoid") {
            detail::check_keys(obj, path, {"type", "lambda"});
            return activation_simple_sigmoid(detail::require<double>(obj, path, "lambda"));
        }
        if (type == "reverting") {
            detail::check_keys(obj, path, {"type", "lambda"});
            return activation_reverting_sigmoid(
                detail::require<double>(obj, path, "lambda"));
        }
        if (type == "double_step") {
            detail::check_keys(obj, path, {"type", "epsilon"});
            return activation_double_step(detail::require<double>(obj, path, "epsilon"));
        }
        if (type == "compound") {
            detail::check_keys(obj, path, {"type", "lambda", "ratio"});
            const json& r = obj.contains("ratio") ? obj.at("ratio") : json();
            double ratio;
            if (r.is_string() && (r.get<std::string>() == "inf" ||
                                  r.get<std::string>() == "infinity"))
                ratio = std::numeric_limits<double>::infinity();
            else
                ratio = detail::require<double>(obj, path, "ratio");
            return compound_sigmoid_make(ratio,
                                         detail::require<double>(obj, path, "lambda"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    throw ConfigError("config " + path + ": unknown activation type '" + type + "'");
}

inline ReturnDistribution parse_distribution(const std::string& name,
                                             const std::string& path) {
    if (name == "gaussian") return ReturnDistribution::gaussian;
    if (name == "rademacher") return ReturnDistribution::rademacher;
    if (name == "uniform_scaled") return ReturnDistribution::uniform_scaled;
    if (name == "student_t") return ReturnDistribution::student_t;
    throw ConfigError("config " + path + ": unknown distribution '" + name + "'");
}

/// {"seed":1,"n_paths":256,"horizon":4000,"burn_in":500,"distribution":"gaussian",
///  "t_dof":8,"pmax":200,"workers":2,"bootstrap_reps":200,"stationary_init":true}
inline SimConfig parse_sim_config(const json& obj, const std::string& path = "sim") {
    detail::check_keys(obj, path,
                       {"seed", "n_paths", "horizon", "burn_in", "distribution",
                        "t_dof", "pmax", "workers", "bootstrap_reps",
                        "stationary_init"});
    SimConfig cfg;
    cfg.seed = detail::optional<std::uint64_t>(obj, path, "seed", 1);
    cfg.n_paths = detail::require<long>(obj, path, "n_paths");
    cfg.horizon = detail::require<long>(obj, path, "horizon");
    cfg.burn_in = detail::optional<long>(obj, path, "burn_in", -1);
    cfg.distribution = parse_distribution(
        detail::optional<std::string>(obj, path, "distribution", "gaussian"), path);
    cfg.student_dof = detail::optional<int>(obj, path, "t_dof", 8);
    cfg.pmax = detail::optional<long>(obj, path, "pmax", 0);
    cfg.workers = detail::optional<int>(obj, path, "workers", 1);
    cfg.bootstrap_reps = detail::optional<int>(obj, path, "bootstrap_reps", 200);
    cfg.stationary_init = detail::optional<bool>(obj, path, "stationary_init", true);
    return cfg;
}

struct BacktestConfig {
    std::string prices_path;
    double n_vol = 20.0;
    ReturnKind return_kind = ReturnKind::absolute;
    double u_cap = 0.0;
    SkewMode mode = SkewMode::central;
    WindowMode window = WindowMode::overlapping;
    long pmax = 100;
    long summary_period = 100;
};

inline BacktestConfig parse_backtest_config(const json& obj,
                                            const std::string& path = "backtest") {
    detail::check_keys(obj, path,
                       {"prices", "n_vol", "returns", "u_cap", "mode", "window",
                        "pmax", "summary_period"});
    BacktestConfig cfg;
    cfg.prices_path = detail::require<std::string>(obj, path, "prices");
    cfg.n_vol = detail::optional<double>(obj, path, "n_vol", 20.0);
    const std::string rk =
        detail::optional<std::string>(obj, path, "returns", "absolute");
    if (rk == "absolute") cfg.return_kind = ReturnKind::absolute;
    else if (rk == "relative") cfg.return_kind = ReturnKind::relative;
    else throw ConfigError("config " + path + ": unknown returns mode '" + rk + "'");
    cfg.u_cap = detail::optional<double>(obj, path, "u_cap", 0.0);
    const std::string mode = detail::optional<std::string>(obj, path, "mode", "central");
    if (mode == "central") cfg.mode = SkewMode::central;
    else if (mode == "noncentral") cfg.mode = SkewMode::noncentral;
    else throw ConfigError("config " + path + ": unknown skew mode '" + mode + "'");
    const std::string win =
        detail::optional<std::string>(obj, path, "window", "overlapping");
    if (win == "overlapping") cfg.window = WindowMode::overlapping;
    else if (win == "disjoint") cfg.window = WindowMode::disjoint;
    else throw ConfigError("config " + path + ": unknown window mode '" + win + "'");
    cfg.pmax = detail::optional<long>(obj, path, "pmax", 100);
    cfg.summary_period = detail::optional<long>(obj, path, "summary_period", 100);
    return cfg;
}

} // namespace tmom
