#pragma once

/// Seeded Monte Carlo engine: i.i.d. risk-adjusted returns through a linear
/// filter and activation function, with per-path substreams (worker-count
/// invariant), exact stationary filter-state initialisation for Gaussian
/// returns, non-overlapping P-window moment estimates and path-bootstrap
/// standard errors, plus deterministic scenario runs on explicit price paths.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tmom/activation.hpp"
#include "tmom/backtest.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/price_series.hpp"
#include "tmom/rng.hpp"
#include "tmom/term_structure.hpp"

namespace tmom {

struct SimConfig {
    std::uint64_t seed = 1;
    long n_paths = 64;
    long horizon = 0;  // simulated days per path, burn-in included
    long burn_in = -1; // -1: auto, 20x the slowest filter period
    ReturnDistribution distribution = ReturnDistribution::gaussian;
    int student_dof = 8;
    long pmax = 0;
    int workers = 1;
    int bootstrap_reps = 200;
    bool stationary_init = true; // exact stationary start (Gaussian only)
};

inline long resolved_burn_in(const SimConfig& cfg, const LinearFilter& f) {
    if (cfg.burn_in >= 0) return cfg.burn_in;
    return long(std::ceil(20.0 * slowest_period(f)));
}

namespace detail {

/// Recursion state for V_n = a0 U_n + sum_k rho_k s_k + sum_k rho2_k t_k.
struct FilterState {
    const LinearFilter* f;
    std::vector<cdouble> s, t;

    explicit FilterState(const LinearFilter& filter)
        : f(&filter), s(filter.poles.size()), t(filter.poles.size()) {}

    double evaluate(double u_now) const {
        cdouble acc{f->a0 * u_now, 0.0};
        for (std::size_t k = 0; k < s.size(); ++k) {
            acc += f->residues[k] * s[k];
            if (k < f->residues2.size()) acc += f->residues2[k] * t[k];
        }
        return f->gain * acc.real();
    }

    void advance(double u_now) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k < f->residues2.size()) t[k] = f->poles[k] * t[k] + s[k];
            s[k] = f->poles[k] * s[k] + u_now;
        }
    }
};

/// Factor of the exact stationary covariance of the recursion state under
/// unit-variance i.i.d. returns. State components are stacked as
/// [Re s_0, Im s_0, ..., Re t_0, Im t_0, ...] for the poles that carry them;
/// conjugate-pair constraints live in the (singular) covariance itself, so
/// sampling preserves them automatically.
class StationaryStateFactor {
public:
    explicit StationaryStateFactor(const LinearFilter& f) {
        struct Comp {
            cdouble alpha;
            bool second; // t-state (j-1) alpha^{j-2} profile
            std::size_t pole;
        };
        std::vector<Comp> comps;
        for (std::size_t k = 0; k < f.poles.size(); ++k)
            comps.push_back({f.poles[k], false, k});
        for (std::size_t k = 0; k < f.residues2.size(); ++k)
            if (std::abs(f.residues2[k]) != 0.0)
                comps.push_back({f.poles[k], true, k});
        n_poles_ = f.poles.size();
        t_offset_.assign(f.poles.size(), std::size_t(-1));
        for (std::size_t c = 0; c < comps.size(); ++c)
            if (comps[c].second) t_offset_[comps[c].pole] = c;

        // sum over j >= 1 of the profile products:
        //   S(A) S(B) = 1/(1-AB);  S(A) T(B) = A/(1-AB)^2;  T(A) T(B) = (1+AB)/(1-AB)^3
        // with S(a): a^{j-1} and T(a): (j-1) a^{j-2}
        auto pair_sum = [](const Comp& a, const Comp& b, bool conj_b) {
            const cdouble bb = conj_b ? std::conj(b.alpha) : b.alpha;
            const cdouble x = a.alpha * bb;
            const cdouble one{1.0, 0.0};
            if (!a.second && !b.second) return one / (one - x);
            if (a.second && b.second)
                return (one + x) / ((one - x) * (one - x) * (one - x));
            const cdouble first = a.second ? bb : a.alpha;
            return first / ((one - x) * (one - x));
        };

        const long n = 2 * long(comps.size());
        Eigen::MatrixXd cov(n, n);
        for (std::size_t p = 0; p < comps.size(); ++p) {
            for (std::size_t q = 0; q < comps.size(); ++q) {
                const cdouble c1 = pair_sum(comps[p], comps[q], false);
                const cdouble c2 = pair_sum(comps[p], comps[q], true);
                cov(2 * p, 2 * q) = 0.5 * (c1.real() + c2.real());
                cov(2 * p + 1, 2 * q + 1) = 0.5 * (c2.real() - c1.real());
                cov(2 * p, 2 * q + 1) = 0.5 * (c1.imag() - c2.imag());
                cov(2 * p + 1, 2 * q) = 0.5 * (c1.imag() + c2.imag());
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        factor_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
    }

    /// Draws one stationary state; consumes exactly 2 * n_components normals.
    void sample(std::mt19937_64& rng, NormalSampler& normal, FilterState& st) const {
        Eigen::VectorXd z(factor_.cols());
        for (long i = 0; i < z.size(); ++i) z(i) = normal(rng);
        const Eigen::VectorXd x = factor_ * z;
        std::size_t c = 0;
        for (std::size_t k = 0; k < n_poles_; ++k, ++c)
            st.s[k] = cdouble(x(2 * c), x(2 * c + 1));
        for (std::size_t k = 0; k < n_poles_; ++k)
            if (t_offset_[k] != std::size_t(-1)) {
                const std::size_t off = t_offset_[k];
                st.t[k] = cdouble(x(2 * off), x(2 * off + 1));
            }
    }

private:
    Eigen::MatrixXd factor_;
    std::size_t n_poles_ = 0;
    std::vector<std::size_t> t_offset_;
};

} // namespace detail

struct PnlPaths {
    long n_paths = 0;
    long days = 0; // post-burn-in daily P&L entries per path
    std::vector<double> data; // row-major paths x days
    bool nonlinear_nongaussian_warning = false;

    double at(long path, long day) const {
        return data[std::size_t(path) * std::size_t(days) + std::size_t(day)];
    }
};

/// Simulates daily strategy P&L per path. The post-burn-in series has
/// horizon - burn_in - 1 entries (each P&L day consumes the next return);
/// horizon <= burn_in + 1 yields an explicitly empty result. Output is a
/// pure function of (seed, config, filter, activation): per-path substreams
/// make it independent of the worker count.
inline PnlPaths simulate_pnl_paths(const SimConfig& cfg, const LinearFilter& f,
                                   const ActivationSpec& spec) {
    if (cfg.n_paths < 1) throw std::invalid_argument("simulate: n_paths must be >= 1");
    if (cfg.horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
    const long burn = resolved_burn_in(cfg, f);
    const long usable = std::max<long>(0, cfg.horizon - burn - 1);
    PnlPaths out;
    out.n_paths = cfg.n_paths;
    out.days = usable;
    out.nonlinear_nongaussian_warning =
        spec.kind != ActivationSpec::Kind::linear &&
        cfg.distribution != ReturnDistribution::gaussian;
    out.data.assign(std::size_t(cfg.n_paths) * std::size_t(usable), 0.0);
    if (usable == 0) return out;

    const bool stationary =
        cfg.stationary_init && cfg.distribution == ReturnDistribution::gaussian;
    const detail::StationaryStateFactor* factor = nullptr;
    detail::StationaryStateFactor factor_storage(f);
    if (stationary) factor = &factor_storage;

    // day n draws U_n; the P&L entry sigma_{n-1} U_n is kept once n-1 >= burn.
    // Stationary start replaces the burn-in simulation: the state at day
    // `burn` is drawn from its exact distribution and days before it are
    // never simulated.
    auto run_range = [&](long path_begin, long path_end) {
        for (long p = path_begin; p < path_end; ++p) {
            std::mt19937_64 rng = make_path_rng(cfg.seed, std::uint64_t(p));
            NormalSampler normal;
            ReturnSampler draw(cfg.distribution, cfg.student_dof);
            detail::FilterState state(f);
            double sigma_prev = 0.0;
            long start = 0;
            if (stationary) {
                factor->sample(rng, normal, state);
                start = burn;
            }
            double* row = out.data.data() + std::size_t(p) * std::size_t(usable);
            long written = 0;
            for (long n = start; n < cfg.horizon && written < usable; ++n) {
                const double u = draw(rng);
                if (n > burn) row[written++] = sigma_prev * u;
                if (n >= burn) sigma_prev = spec(state.evaluate(u));
                state.advance(u);
            }
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1 || cfg.n_paths == 1) {
        run_range(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (cfg.n_paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long lo = w * chunk;
            const long hi = std::min<long>(cfg.n_paths, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

struct SimTermStructure {
    MomentTermStructure ts;
    bool nonlinear_nongaussian_warning = false;
    long burn_in = 0;
    long usable_days = 0;
};

/// Pooled non-overlapping P-window moments across paths with path-bootstrap
/// standard errors on kappa_3.
inline SimTermStructure simulate_term_structure(const SimConfig& cfg,
                                                const LinearFilter& f,
                                                const ActivationSpec& spec) {
    if (cfg.pmax < 1) throw std::invalid_argument("simulate: pmax must be >= 1");
    if (spec.kind != ActivationSpec::Kind::linear && !f.normalized)
        throw std::invalid_argument(
            "simulate: nonlinear activations need a normalised filter");
    const PnlPaths paths = simulate_pnl_paths(cfg, f, spec);
    if (paths.days < cfg.pmax)
        throw std::invalid_argument("simulate: horizon too short for pmax");
    SimTermStructure out;
    out.nonlinear_nongaussian_warning = paths.nonlinear_nongaussian_warning;
    out.burn_in = resolved_burn_in(cfg, f);
    out.usable_days = paths.days;

    const long np = paths.n_paths;
    const std::size_t nper = std::size_t(cfg.pmax);
    // per-path window sums of Y^2 and Y^3 per period
    std::vector<double> s2(std::size_t(np) * nper, 0.0);
    std::vector<double> s3(std::size_t(np) * nper, 0.0);
    std::vector<long> cnt(nper, 0);
    std::vector<double> prefix(std::size_t(paths.days) + 1, 0.0);
    for (long p = 0; p < np; ++p) {
        for (long d = 0; d < paths.days; ++d)
            prefix[std::size_t(d + 1)] = prefix[std::size_t(d)] + paths.at(p, d);
        for (long period = 1; period <= cfg.pmax; ++period) {
            double a2 = 0.0, a3 = 0.0;
            const long nw = paths.days / period;
            for (long w = 0; w < nw; ++w) {
                const double y = prefix[std::size_t((w + 1) * period)] -
                                 prefix[std::size_t(w * period)];
                a2 += y * y;
                a3 += y * y * y;
            }
            s2[std::size_t(p) * nper + std::size_t(period - 1)] = a2;
            s3[std::size_t(p) * nper + std::size_t(period - 1)] = a3;
            if (p == 0) cnt[std::size_t(period - 1)] = nw;
        }
    }
    // pooled point estimates
    for (long period = 1; period <= cfg.pmax; ++period) {
        const std::size_t j = std::size_t(period - 1);
        double t2 = 0.0, t3 = 0.0;
        for (long p = 0; p < np; ++p) {
            t2 += s2[std::size_t(p) * nper + j];
            t3 += s3[std::size_t(p) * nper + j];
        }
        const double n = double(cnt[j]) * double(np);
        const double mu2 = t2 / n, mu3 = t3 / n;
        out.ts.periods.push_back(period);
        out.ts.mu2.push_back(mu2);
        out.ts.mu3.push_back(mu3);
        out.ts.kappa3.push_back(mu3 / std::pow(mu2, 1.5));
        out.ts.n_samples.push_back(long(n));
    }
    // path-block bootstrap for the kappa_3 standard errors
    std::mt19937_64 boot(substream_seed(cfg.seed, 0x626f6f74ULL));
    std::vector<std::vector<double>> reps(nper);
    std::vector<long> pick(static_cast<std::size_t>(np), 0L);
    for (int b = 0; b < cfg.bootstrap_reps; ++b) {
        for (long& x : pick) x = long(boot() % std::uint64_t(np));
        for (long period = 1; period <= cfg.pmax; ++period) {
            const std::size_t j = std::size_t(period - 1);
            double t2 = 0.0, t3 = 0.0;
            for (long p : pick) {
                t2 += s2[std::size_t(p) * nper + j];
                t3 += s3[std::size_t(p) * nper + j];
            }
            if (t2 > 0.0) {
                const double n = double(cnt[j]) * double(np);
                reps[j].push_back((t3 / n) / std::pow(t2 / n, 1.5));
            }
        }
    }
    for (std::size_t j = 0; j < nper; ++j) {
        double mean = 0.0;
        for (double r : reps[j]) mean += r;
        mean /= double(reps[j].empty() ? 1 : reps[j].size());
        double var = 0.0;
        for (double r : reps[j]) var += (r - mean) * (r - mean);
        if (reps[j].size() > 1) var /= double(reps[j].size() - 1);
        out.ts.se_kappa3.push_back(std::sqrt(var));
    }
    return out;
}

struct ScenarioResult {
    std::vector<std::string> dates; // decision days
    std::vector<double> cumulative_pnl;
    long first_day = 0;
};

/// Full pipeline (vol estimate, signal, position, P&L) on an explicit price
/// path; deterministic, for comparing activations on identical scenarios.
inline ScenarioResult scenario_run(const PriceSeries& prices, const LinearFilter& f,
                                   const ActivationSpec& spec,
                                   const StrategyOptions& opts = {}) {
    const StrategyRun run = run_strategy(prices, f, spec, opts);
    ScenarioResult out;
    out.first_day = run.first_day;
    double acc = 0.0;
    for (std::size_t i = 0; i < run.pnl.size(); ++i) {
        acc += run.pnl[i];
        out.cumulative_pnl.push_back(acc);
        out.dates.push_back(prices.dates[std::size_t(run.first_day) + i + 1]);
    }
    return out;
}

} // namespace tmom
