#pragma once

/// Empirical pipeline: volatility normalisation of a price series, strategy
/// P&L, central and non-central skewness term structures on real data, and a
/// performance summary with the Gram-Charlier comparison.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tmom/activation.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/mgf.hpp"
#include "tmom/price_series.hpp"
#include "tmom/term_structure.hpp"

namespace tmom {

enum class ReturnKind { absolute, relative };

struct RiskAdjustedSeries {
    // aligned with the price index; entries before start_index are unset (0)
    std::vector<double> sigma_hat; // valid from index start_index
    std::vector<double> u;         // valid from index start_index + 1
    long start_index = 0;          // vol warm-up length, ceil(N_vol)
};

/// EMA of squared price changes: v_n = (1 - 1/N) v_{n-1} + (1/N) dx_n^2,
/// seeded with the mean of the first ceil(N) squared changes; sigma = sqrt(v).
inline RiskAdjustedSeries vol_estimate(const PriceSeries& p, double n_vol = 20.0,
                                       ReturnKind kind = ReturnKind::absolute) {
    if (!(n_vol >= 1.0)) throw std::invalid_argument("vol_estimate: N_vol must be >= 1");
    const long t = long(p.size());
    const long warm = long(std::ceil(n_vol));
    if (t <= warm + 1)
        throw DataError("vol_estimate: series too short for the vol warm-up");
    std::vector<double> dx(std::size_t(t), 0.0);
    for (long n = 1; n < t; ++n) {
        const double prev = p.prices[std::size_t(n - 1)];
        const double cur = p.prices[std::size_t(n)];
        if (kind == ReturnKind::relative) {
            if (!(prev > 0.0))
                throw DataError("vol_estimate: relative returns need positive prices");
            dx[std::size_t(n)] = (cur - prev) / prev;
        } else {
            dx[std::size_t(n)] = cur - prev;
        }
    }
    RiskAdjustedSeries out;
    out.start_index = warm;
    out.sigma_hat.assign(std::size_t(t), 0.0);
    out.u.assign(std::size_t(t), 0.0);
    double v = 0.0;
    for (long n = 1; n <= warm; ++n) v += dx[std::size_t(n)] * dx[std::size_t(n)];
    v /= double(warm);
    if (!(v > 0.0))
        throw DataError("vol_estimate: zero variance over the seed window "
                        "(constant prices)");
    out.sigma_hat[std::size_t(warm)] = std::sqrt(v);
    for (long n = warm + 1; n < t; ++n) {
        v = (1.0 - 1.0 / n_vol) * v + dx[std::size_t(n)] * dx[std::size_t(n)] / n_vol;
        out.sigma_hat[std::size_t(n)] = std::sqrt(v);
        out.u[std::size_t(n)] = dx[std::size_t(n)] / out.sigma_hat[std::size_t(n - 1)];
    }
    return out;
}

struct StrategyOptions {
    double n_vol = 20.0;
    ReturnKind return_kind = ReturnKind::absolute;
    double u_cap = 0.0; // > 0 caps |U|; output is then marked non-canonical
};

struct StrategyRun {
    RiskAdjustedSeries ras;
    std::vector<double> pnl;      // risk-adjusted daily P&L psi(V_n) U_{n+1}
    std::vector<double> position; // psi(V_n) / sigma_n (price units)
    std::vector<double> signal;   // V_n
    long first_day = 0;           // price index of the first decision day
    bool non_canonical = false;   // U capping was applied
};

/// Runs the full pipeline on a price series. The position on day n uses only
/// data through day n; the day-n P&L entry is psi(V_n) U_{n+1}.
inline StrategyRun run_strategy(const PriceSeries& p, const LinearFilter& f,
                                const ActivationSpec& spec,
                                const StrategyOptions& opts = {}) {
    if (!f.normalized)
        throw std::invalid_argument("run_strategy: filter must be normalised");
    StrategyRun run;
    run.ras = vol_estimate(p, opts.n_vol, opts.return_kind);
    const long t = long(p.size());
    const long start = run.ras.start_index + 1; // first index with U defined
    run.first_day = start;
    if (opts.u_cap > 0.0) {
        run.non_canonical = true;
        for (double& x : run.ras.u)
            x = std::clamp(x, -opts.u_cap, opts.u_cap);
    }
    // pole-residue recursion over U
    const std::size_t m = f.poles.size();
    std::vector<cdouble> s_state(m, cdouble{});
    std::vector<cdouble> t_state(m, cdouble{});
    for (long n = start; n < t; ++n) {
        const double u_now = run.ras.u[std::size_t(n)];
        cdouble acc{f.a0 * u_now, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            acc += f.residues[k] * s_state[k];
            if (k < f.residues2.size()) acc += f.residues2[k] * t_state[k];
        }
        const double v = f.gain * acc.real();
        const double sig = spec(v);
        run.signal.push_back(v);
        run.position.push_back(sig / run.ras.sigma_hat[std::size_t(n)]);
        if (n + 1 < t) run.pnl.push_back(sig * run.ras.u[std::size_t(n + 1)]);
        for (std::size_t k = 0; k < m; ++k) {
            if (k < f.residues2.size())
                t_state[k] = f.poles[k] * t_state[k] + s_state[k];
            s_state[k] = f.poles[k] * s_state[k] + u_now;
        }
    }
    return run;
}

enum class SkewMode { central, noncentral };
enum class WindowMode { overlapping, disjoint };

struct EmpiricalTermStructure {
    MomentTermStructure ts;
    std::vector<long> omitted; // periods with too few windows
    SkewMode mode;
    WindowMode window;
};

/// Term structure of P-period moments from a daily P&L series. Overlapping
/// windows are the data-scarce default; standard errors (window bootstrap)
/// are only attached in disjoint mode where windows are independent.
inline EmpiricalTermStructure empirical_term_structure(
    const std::vector<double>& pnl, long pmax,
    SkewMode mode = SkewMode::central, WindowMode window = WindowMode::overlapping,
    int bootstrap_reps = 200) {
    if (pmax < 1) throw std::invalid_argument("empirical_term_structure: Pmax >= 1");
    if (long(pnl.size()) < 3 * pmax)
        throw std::invalid_argument(
            "empirical_term_structure: need at least 3*Pmax observations");
    EmpiricalTermStructure out;
    out.mode = mode;
    out.window = window;
    std::vector<double> prefix(pnl.size() + 1, 0.0);
    for (std::size_t i = 0; i < pnl.size(); ++i) prefix[i + 1] = prefix[i] + pnl[i];
    const bool disjoint = window == WindowMode::disjoint;
    std::mt19937_64 boot_rng(0x7465726d73ULL);
    for (long period = 1; period <= pmax; ++period) {
        std::vector<double> y;
        const long stride = disjoint ? period : 1;
        for (long s = 0; s + period <= long(pnl.size()); s += stride)
            y.push_back(prefix[std::size_t(s + period)] - prefix[std::size_t(s)]);
        if (long(y.size()) < 3) {
            out.omitted.push_back(period);
            continue;
        }
        auto stats = [&](const std::vector<double>& v) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= double(v.size());
            const double about = mode == SkewMode::central ? m : 0.0;
            double m2 = 0.0, m3 = 0.0;
            for (double x : v) {
                const double d = x - about;
                m2 += d * d;
                m3 += d * d * d;
            }
            m2 /= double(v.size());
            m3 /= double(v.size());
            return std::pair{m2, m3};
        };
        const auto [m2, m3] = stats(y);
        out.ts.periods.push_back(period);
        out.ts.mu2.push_back(m2);
        out.ts.mu3.push_back(m3);
        out.ts.kappa3.push_back(m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0);
        out.ts.n_samples.push_back(long(y.size()));
        if (disjoint) {
            std::vector<double> reps;
            std::vector<double> resample(y.size());
            for (int b = 0; b < bootstrap_reps; ++b) {
                for (std::size_t i = 0; i < y.size(); ++i)
                    resample[i] = y[boot_rng() % y.size()];
                const auto [b2, b3] = stats(resample);
                if (b2 > 0.0) reps.push_back(b3 / std::pow(b2, 1.5));
            }
            double mean = 0.0;
            for (double r : reps) mean += r;
            mean /= double(reps.size());
            double var = 0.0;
            for (double r : reps) var += (r - mean) * (r - mean);
            var /= double(reps.size() > 1 ? reps.size() - 1 : 1);
            out.ts.se_kappa3.push_back(std::sqrt(var));
        }
    }
    return out;
}

struct PerformanceSummary {
    long period = 0;
    double sharpe = 0.0;        // kappa_1 / sqrt(kappa_2) at the given period
    bool sharpe_defined = false;
    double kappa3 = 0.0;        // central skewness of P-period returns
    double win_fraction = 0.0;  // empirical P(Y > 0)
    double gram_charlier = 0.0; // Phi(sharpe) - kappa3/(6 sqrt(2 pi))
    long n_windows = 0;
};

inline PerformanceSummary performance_summary(const std::vector<double>& pnl,
                                              long period) {
    if (period < 1 || long(pnl.size()) < period)
        throw std::invalid_argument("performance_summary: need at least P observations");
    PerformanceSummary out;
    out.period = period;
    std::vector<double> y;
    std::vector<double> prefix(pnl.size() + 1, 0.0);
    for (std::size_t i = 0; i < pnl.size(); ++i) prefix[i + 1] = prefix[i] + pnl[i];
    for (long s = 0; s + period <= long(pnl.size()); ++s)
        y.push_back(prefix[std::size_t(s + period)] - prefix[std::size_t(s)]);
    out.n_windows = long(y.size());
    double mean = 0.0;
    for (double x : y) mean += x;
    mean /= double(y.size());
    double var = 0.0, m3 = 0.0;
    long wins = 0;
    for (double x : y) {
        var += (x - mean) * (x - mean);
        m3 += (x - mean) * (x - mean) * (x - mean);
        if (x > 0.0) ++wins;
    }
    var /= double(y.size());
    m3 /= double(y.size());
    out.win_fraction = double(wins) / double(y.size());
    if (var > 0.0) {
        out.sharpe_defined = true;
        out.sharpe = mean / std::sqrt(var);
        out.kappa3 = m3 / std::pow(var, 1.5);
        out.gram_charlier = gram_charlier_prob(out.kappa3, out.sharpe).p;
    }
    return out;
}

} // namespace tmom
