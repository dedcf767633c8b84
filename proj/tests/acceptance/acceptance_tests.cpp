// Acceptance suite: one test per criterion, each printing a PASS/FAIL line
// with the measured quantities. Tolerances are pinned here, in code.
//
// Criterion 2 is implemented exactly as stated — the maximum of the exact
// single-EMA skew formula at N = 20 against 2.41 +- 0.05 at P = 21 +- 2 —
// and is expected to fail: those figures belong to the large-N scaling
// limit of the curve (which peaks at 2.4104 near x = 1.07, checked here
// alongside), while the exact N = 20 curve peaks at 2.2696 at P = 24.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "../test_util.hpp"
#include "tmom/backtest.hpp"
#include "tmom/linear_moments.hpp"
#include "tmom/mgf.hpp"
#include "tmom/nonlinear_moments.hpp"
#include "tmom/simulate.hpp"
#include "tmom/spectral.hpp"

using namespace tmom;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[ACCEPT] criterion %2d (%s): %s — %s\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

} // namespace

TEST(Acceptance, C01_OracleEquivalenceOnRandomFilters) {
    Timer timer;
    std::mt19937_64 rng(20250809);
    double worst = 0.0;
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        const LinearFilter f = tmom::testing::random_sprz_filter(rng);
        const std::vector<double> w = tmom::testing::long_weights(f);
        for (long p : {1L, 2L, 5L, 20L, 100L, 500L}) {
            const double direct = tmom::testing::direct_third_moment(w, p);
            const double closed = third_moment_closed(f, p);
            const double scale =
                std::max(std::abs(direct), std::pow(second_moment(f, p), 1.5));
            worst = std::max(worst, std::abs(closed - direct) / scale);
            ++checked;
        }
    }
    const double elapsed = timer.seconds();
    const bool pass = worst <= 1e-9 && elapsed < 10.0;
    report(1, "closed vs direct third moment", pass,
           "50 filters x 6 periods (" + std::to_string(checked) +
               " cases), worst scaled error " + fmt(worst) + ", " + fmt(elapsed) +
               " s");
    EXPECT_LE(worst, 1e-9);
    EXPECT_LT(elapsed, 10.0);
}

TEST(Acceptance, C02_Ema1SkewPeakAsStated) {
    // As stated: max over P of the exact formula at N = 20 equals 2.41 +- 0.05
    // at P = 21 +- 2.
    double best = 0.0;
    long argmax = 0;
    for (long p = 1; p <= 1000; ++p) {
        const double v = ema1_skew_exact(20.0, p);
        if (v > best) { best = v; argmax = p; }
    }
    // The scaling-limit curve the quoted numbers describe:
    double sl_best = 0.0, sl_arg = 0.0;
    for (double x = 0.2; x <= 4.0; x += 1e-4) {
        const double v = ema1_skew_scaling_limit(x);
        if (v > sl_best) { sl_best = v; sl_arg = x; }
    }
    const bool value_ok = std::abs(best - 2.41) <= 0.05;
    const bool place_ok = std::labs(argmax - 21) <= 2;
    report(2, "EMA1 skew curve peak", value_ok && place_ok,
           "exact N=20 curve peaks at " + fmt(best) + " at P = " +
               std::to_string(argmax) + " (criterion expects 2.41±0.05 at 21±2); "
               "the scaling-limit curve peaks at " + fmt(sl_best) + " at x = " +
               fmt(sl_arg) + " — the criterion's figures describe the latter");
    EXPECT_NEAR(best, 2.41, 0.05)
        << "exact-formula peak; see the decisions ledger: the quoted 2.41 at "
           "x~1.07 is the large-N scaling limit (measured here: "
        << sl_best << " at x = " << sl_arg << "), not the exact N=20 curve";
    EXPECT_NEAR(double(argmax), 21.0, 2.0);
    // the scaling-limit facts themselves hold
    EXPECT_NEAR(sl_best, 2.41, 0.005);
    EXPECT_NEAR(sl_arg, 1.07, 0.01);
}

TEST(Acceptance, C03_Ema2SkewPeak) {
    double best = 0.0;
    long argmax = 0;
    for (long p = 1; p <= 500; ++p) {
        const double k = ema2_moments_exact(20.0, 40.0, p).kappa3;
        if (k > best) { best = k; argmax = p; }
    }
    const double target_p = 1.7 * 60.0;
    const bool value_ok = std::abs(best - 2.1) <= 0.1;
    const bool place_ok = std::abs(double(argmax) - target_p) <= 0.15 * target_p;
    report(3, "EMA2 (20,40) skew curve peak", value_ok && place_ok,
           "peak " + fmt(best) + " at P = " + std::to_string(argmax) +
               " (expect 2.1±0.1 at " + fmt(target_p) + "±15%)");
    EXPECT_NEAR(best, 2.1, 0.1);
    EXPECT_NEAR(double(argmax), target_p, 0.15 * target_p);
}

TEST(Acceptance, C04_HybridConstraint) {
    const LinearFilter fast = make_ema_crossover(5.0, 10.0);
    const LinearFilter slow = make_ema_crossover(20.0, 40.0);
    const HybridConstraint hc = hybrid_roots(fast, slow);
    const bool root_ok = hc.unique_real_root && std::abs(hc.zeta1 + 1.476) <= 0.001;
    // sign of the asymptotic skew coefficient flips across the line
    const double above =
        asymptotic_skew_coefficient(combine({fast, slow}, {hc.zeta1 + 0.03, 1.0}));
    const double below =
        asymptotic_skew_coefficient(combine({fast, slow}, {hc.zeta1 - 0.03, 1.0}));
    const bool sign_ok = above > 0.0 && below < 0.0;
    report(4, "hybrid positivity constraint", root_ok && sign_ok,
           "zeta1 = " + fmt(hc.zeta1) + " (expect -1.476±0.001); coefficient " +
               fmt(below) + " below line, " + fmt(above) + " above");
    EXPECT_TRUE(hc.unique_real_root);
    EXPECT_NEAR(hc.zeta1, -1.476, 0.001);
    EXPECT_GT(above, 0.0);
    EXPECT_LT(below, 0.0);
}

TEST(Acceptance, C05_NonlinearClosedFormsVsQuadrature) {
    Timer timer;
    const double a_prev = 0.37;
    double worst = 0.0;
    int cases = 0;
    for (double rho : {-0.8, -0.2, 0.2, 0.8}) {
        for (double lambda : {0.5, 1.0, 1.5}) {
            for (const ActivationSpec& s : {activation_simple_sigmoid(lambda),
                                            activation_reverting_sigmoid(lambda)}) {
                const double c = h_k_closed(s, {a_prev, rho});
                const double q = h_k_quadrature(s, {a_prev, rho});
                worst = std::max(worst, std::abs(c - q));
                ++cases;
            }
        }
        for (double eps : {0.3, 0.6, 0.9}) {
            const ActivationSpec s = activation_double_step(eps);
            const double c = h_k_closed(s, {a_prev, rho});
            const double q = h_k_quadrature(s, {a_prev, rho});
            worst = std::max(worst, std::abs(c - q));
            ++cases;
        }
    }
    const double elapsed = timer.seconds();
    const bool pass = worst <= 1e-8 && elapsed < 30.0;
    report(5, "H_k closed forms vs quadrature", pass,
           std::to_string(cases) + " grid cases, worst |diff| " + fmt(worst) +
               ", " + fmt(elapsed) + " s");
    EXPECT_LE(worst, 1e-8);
    EXPECT_LT(elapsed, 30.0);
}

TEST(Acceptance, C06_DegenerateNonlinearCases) {
    // sign-function activation: exactly zero skewness, closed form
    const LinearFilter f = make_ema2(20.0, 40.0, true);
    const NonlinearTermStructure sgn =
        nonlinear_term_structure(f, activation_double_step(0.0), 200);
    double max_abs = 0.0;
    for (double k : sgn.ts.kappa3) max_abs = std::max(max_abs, std::abs(k));
    // and within 3 SE of zero by simulation
    SimConfig cfg;
    cfg.seed = 60601;
    cfg.n_paths = 200;
    cfg.horizon = 3000;
    cfg.burn_in = 500;
    cfg.pmax = 100;
    cfg.workers = 2;
    const SimTermStructure mc =
        simulate_term_structure(cfg, f, activation_double_step(0.0));
    bool mc_ok = true;
    for (long p : {10L, 50L, 100L}) {
        const std::size_t i = std::size_t(p - 1);
        if (std::abs(mc.ts.kappa3[i]) > 3.0 * mc.ts.se_kappa3[i]) mc_ok = false;
    }
    // small-lambda sigmoid reduces to the linear curve
    const NonlinearTermStructure small =
        nonlinear_term_structure(f, activation_simple_sigmoid(1e-4), 200);
    const MomentTermStructure lin = skew_term_structure(f, 200);
    double worst_lin = 0.0;
    for (std::size_t i = 0; i < lin.size(); ++i)
        worst_lin = std::max(worst_lin, std::abs(small.ts.kappa3[i] - lin.kappa3[i]));
    const bool pass = max_abs == 0.0 && mc_ok && worst_lin <= 1e-6;
    report(6, "degenerate nonlinear cases", pass,
           "sign-function |kappa3| max " + fmt(max_abs) + " (exact), MC within 3 SE: " +
               (mc_ok ? "yes" : "no") + ", lambda->0 vs linear worst " +
               fmt(worst_lin));
    EXPECT_EQ(max_abs, 0.0);
    EXPECT_TRUE(mc_ok);
    EXPECT_LE(worst_lin, 1e-6);
}

TEST(Acceptance, C07_RevertingPositivityThreshold) {
    const double lstar = reverting_positivity_threshold();
    const double x = lstar * lstar;
    const bool root_ok = std::abs(x - 1.65) <= 0.01;
    // direct summation of H_k for a slow EMA1 flips sign inside [1.2, 1.4]
    const double n_days = 100.0;
    const double alpha = 1.0 - 1.0 / n_days;
    auto sum_hk = [&](double lambda) {
        const ActivationSpec s = activation_reverting_sigmoid(lambda);
        const double a0w = std::sqrt(1.0 - alpha * alpha);
        double acc = 0.0;
        for (long k = 1; k <= 6000; ++k)
            acc += h_k_closed(s, {a0w * std::pow(alpha, double(k - 1)),
                                  std::pow(alpha, double(k))});
        return acc;
    };
    const double at12 = sum_hk(1.2), at14 = sum_hk(1.4);
    const bool flip_ok = at12 > 0.0 && at14 < 0.0;
    report(7, "reverting-sigmoid threshold", root_ok && flip_ok,
           "lambda*^2 = " + fmt(x) + " (expect 1.65±0.01); sum H_k at 1.2: " +
               fmt(at12) + ", at 1.4: " + fmt(at14));
    EXPECT_NEAR(x, 1.65, 0.01);
    EXPECT_GT(at12, 0.0);
    EXPECT_LT(at14, 0.0);
}

TEST(Acceptance, C08_SpectralIdentities) {
    bool all_ok = true;
    std::string detail;
    // trace identities at truncation tolerance 1e-12
    for (auto [f, p] : {std::pair{make_ema1(20.0), 10L},
                        {make_ema2(20.0, 40.0), 50L}}) {
        const GammaOperator g = gamma_matrix(f, p, 1e-12);
        const TraceMoments tm = trace_moments(g);
        const double mu2 = second_moment(f, p);
        const double mu3 = third_moment_closed(f, p);
        const double e2 = std::abs(tm.m2 - mu2) / mu2;
        const double e3 = std::abs(tm.m3 - mu3) / std::abs(mu3);
        if (tm.m1 != 0.0 || e2 > 1e-8 || e3 > 1e-8) all_ok = false;
        detail += "P=" + std::to_string(p) + ": trace " + fmt(tm.m1) + ", m2 err " +
                  fmt(e2) + ", m3 err " + fmt(e3) + "; ";
        EXPECT_EQ(tm.m1, 0.0);
        EXPECT_LE(e2, 1e-8);
        EXPECT_LE(e3, 1e-8);
    }
    // rank: P+1 for EMA1, <= 2P always
    const EigenSummary ema1_rank = eigen_summary(gamma_matrix(make_ema1(20.0), 10));
    const EigenSummary ema2_rank =
        eigen_summary(gamma_matrix(make_ema2(20.0, 40.0), 20));
    const LinearFilter hybrid = combine(
        {make_ema_crossover(5.0, 10.0), make_ema_crossover(20.0, 40.0)}, {1.0, 0.7});
    const EigenSummary hybrid_rank = eigen_summary(gamma_matrix(hybrid, 3));
    const bool rank_ok =
        ema1_rank.rank == 11 && ema2_rank.rank <= 40 && hybrid_rank.rank <= 6;
    if (!rank_ok) all_ok = false;
    detail += "rank(EMA1,P=10) = " + std::to_string(ema1_rank.rank) +
              ", rank(EMA2,P=20) = " + std::to_string(ema2_rank.rank) +
              ", rank(4-pole,P=3) = " + std::to_string(hybrid_rank.rank);
    report(8, "spectral identities", all_ok, detail);
    EXPECT_EQ(ema1_rank.rank, 11);
    EXPECT_LE(ema2_rank.rank, 40);
    EXPECT_LE(hybrid_rank.rank, 6);
}

TEST(Acceptance, C09_MgfCumulants) {
    double worst2 = 0.0, worst3 = 0.0;
    for (auto [na, nb] : {std::pair{10.0, 0.0}, {10.0, 20.0}}) {
        const LinearFilter f = nb == 0.0 ? make_ema1(na) : make_ema2(na, nb);
        for (long p : {5L, 20L}) {
            const Cumulants c = cumulants_from_mgf(f, p);
            const double mu2 = second_moment(f, p);
            const double mu3 = third_moment_closed(f, p);
            worst2 = std::max(worst2, std::abs(c.k2 - mu2) / mu2);
            worst3 = std::max(worst3, std::abs(c.k3 - mu3) / std::abs(mu3));
        }
    }
    const bool pass = worst2 <= 1e-5 && worst3 <= 1e-5;
    report(9, "MGF cumulants vs closed forms", pass,
           "worst kappa2 rel err " + fmt(worst2) + ", kappa3 rel err " + fmt(worst3));
    EXPECT_LE(worst2, 1e-5);
    EXPECT_LE(worst3, 1e-5);
}

TEST(Acceptance, C10_MonteCarloValidation) {
    Timer timer;
    SimConfig cfg;
    cfg.n_paths = 260;
    cfg.horizon = 4800;
    cfg.burn_in = 700; // ~10^6 effective path-days per configuration
    cfg.pmax = 200;
    cfg.workers = 2;

    struct Case {
        const char* name;
        LinearFilter filter;
        ActivationSpec spec;
        ReturnDistribution dist;
        std::uint64_t seed;
    };
    const LinearFilter ema1 = make_ema1(20.0, true);
    const LinearFilter ema2 = make_ema2(20.0, 40.0, true);
    const std::vector<Case> cases = {
        {"linear EMA1(20) gaussian", ema1, activation_linear(),
         ReturnDistribution::gaussian, 101},
        {"linear EMA1(20) rademacher", ema1, activation_linear(),
         ReturnDistribution::rademacher, 102},
        {"linear EMA2(20,40) gaussian", ema2, activation_linear(),
         ReturnDistribution::gaussian, 103},
        {"linear EMA2(20,40) rademacher", ema2, activation_linear(),
         ReturnDistribution::rademacher, 104},
        {"sigmoid(1) EMA2(20,40) gaussian", ema2, activation_simple_sigmoid(1.0),
         ReturnDistribution::gaussian, 105},
        {"double-step(0.6) EMA2(20,40) gaussian", ema2, activation_double_step(0.6),
         ReturnDistribution::gaussian, 106},
    };
    const std::vector<long> periods = {10, 50, 100, 200};

    bool all_ok = true;
    std::string detail;
    std::vector<SimTermStructure> results;
    for (const Case& c : cases) {
        SimConfig run_cfg = cfg;
        run_cfg.seed = c.seed;
        run_cfg.distribution = c.dist;
        const SimTermStructure mc = simulate_term_structure(run_cfg, c.filter, c.spec);
        results.push_back(mc);
        // analytic curve for this configuration
        const NonlinearTermStructure ana =
            nonlinear_term_structure(c.filter, c.spec, cfg.pmax);
        double worst_z = 0.0;
        for (long p : periods) {
            const std::size_t i = std::size_t(p - 1);
            const double z =
                std::abs(mc.ts.kappa3[i] - ana.ts.kappa3[i]) / mc.ts.se_kappa3[i];
            worst_z = std::max(worst_z, z);
            EXPECT_LE(z, 3.0) << c.name << " at P = " << p;
        }
        if (worst_z > 3.0) all_ok = false;
        detail += std::string(c.name) + " worst |z| " + fmt(worst_z) + "; ";
    }
    // distribution-freeness: gaussian vs rademacher agree for the linear cases
    for (int pair : {0, 2}) {
        double worst_z = 0.0;
        for (long p : periods) {
            const std::size_t i = std::size_t(p - 1);
            const double se = std::hypot(results[pair].ts.se_kappa3[i],
                                         results[pair + 1].ts.se_kappa3[i]);
            const double z = std::abs(results[pair].ts.kappa3[i] -
                                      results[pair + 1].ts.kappa3[i]) / se;
            worst_z = std::max(worst_z, z);
            EXPECT_LE(z, 3.0) << "distribution pair " << pair << " P = " << p;
        }
        if (worst_z > 3.0) all_ok = false;
        detail += "dist-free pair " + std::to_string(pair) + " worst |z| " +
                  fmt(worst_z) + "; ";
    }
    const double elapsed = timer.seconds();
    const long path_days = cfg.n_paths * (cfg.horizon - cfg.burn_in - 1);
    detail += std::to_string(path_days) + " path-days/config, " + fmt(elapsed) + " s";
    if (elapsed >= 300.0) all_ok = false;
    report(10, "Monte Carlo validation", all_ok, detail);
    EXPECT_GE(path_days, 1000000);
    EXPECT_LT(elapsed, 300.0);
}

TEST(Acceptance, C11_GramCharlierSanity) {
    const double p0 = gram_charlier_prob(2.0, 0.0).p;
    const double p2 = gram_charlier_prob(2.0, 0.2).p;
    const double exact_exp = std::exp(-1.0);
    const bool pass = std::abs(p0 - 0.367) <= 0.0005 &&
                      std::abs(p0 - exact_exp) <= 0.002 &&
                      std::abs(p2 - 0.45) <= 0.01;
    report(11, "Gram-Charlier sanity", pass,
           "GC(2,0) = " + fmt(p0) + " vs exact " + fmt(exact_exp) + "; GC(2,0.2) = " +
               fmt(p2) + " (expect ~0.45)");
    EXPECT_NEAR(p0, 0.367, 0.0005);
    EXPECT_NEAR(p0, exact_exp, 0.002);
    EXPECT_NEAR(p2, 0.45, 0.01);
}

TEST(Acceptance, C12_EmpiricalPipelineEquivalence) {
    // backtest on synthetic constant-volatility gaussian prices reproduces the
    // simulation-module term structure within 3 combined standard errors
    PriceSeries prices;
    {
        std::mt19937_64 rng(121212);
        NormalSampler normal;
        double x = 2000.0;
        for (long i = 0; i < 150000; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%04ld-%02ld-%02ld", 2000 + i / 336,
                          1 + (i / 28) % 12, 1 + i % 28);
            prices.dates.push_back(buf);
            prices.prices.push_back(x);
            x += 2.0 * normal(rng);
        }
    }
    const LinearFilter f = make_ema2(20.0, 40.0, true);
    const StrategyRun run = run_strategy(prices, f, activation_linear());
    const EmpiricalTermStructure emp = empirical_term_structure(
        run.pnl, 100, SkewMode::central, WindowMode::disjoint);

    SimConfig cfg;
    cfg.seed = 240101;
    cfg.n_paths = 300;
    cfg.horizon = 4000;
    cfg.burn_in = 600;
    cfg.pmax = 100;
    cfg.workers = 2;
    const SimTermStructure sim = simulate_term_structure(cfg, f, activation_linear());

    bool stats_ok = true;
    std::string detail;
    for (long p : {10L, 50L, 100L}) {
        const std::size_t i = std::size_t(p - 1);
        const double se = std::hypot(emp.ts.se_kappa3[i], sim.ts.se_kappa3[i]);
        const double z = std::abs(emp.ts.kappa3[i] - sim.ts.kappa3[i]) / se;
        if (z > 3.0) stats_ok = false;
        detail += "P=" + std::to_string(p) + " |z| " + fmt(z) + "; ";
        EXPECT_LE(z, 3.0) << "P = " << p;
    }
    // causality: positions invariant to truncating away the future
    std::mt19937_64 rng(777);
    bool causal_ok = true;
    for (int t = 0; t < 100; ++t) {
        const long cut =
            run.first_day + long(rng() % std::uint64_t(run.position.size()));
        PriceSeries trunc;
        trunc.dates.assign(prices.dates.begin(), prices.dates.begin() + cut + 1);
        trunc.prices.assign(prices.prices.begin(), prices.prices.begin() + cut + 1);
        const StrategyRun part = run_strategy(trunc, f, activation_linear());
        if (part.position.back() !=
            run.position[std::size_t(cut - run.first_day)]) {
            causal_ok = false;
            break;
        }
    }
    detail += std::string("causality at 100 truncation points: ") +
              (causal_ok ? "exact" : "VIOLATED");
    report(12, "empirical pipeline equivalence", stats_ok && causal_ok, detail);
    EXPECT_TRUE(causal_ok);
}

TEST(Acceptance, C13_ScenarioSubstituteForProprietaryFigures) {
    // The published CHFUSD/S&P futures panels, the cross-asset Sharpe table
    // and the oil study use data not distributed with the paper; the suite
    // substitutes the synthetic checks of criteria 10 and 12 plus this
    // qualitative inequality: on a sustained synthetic trend the saturating
    // sigmoid ends above the reverting sigmoid.
    PriceSeries trend;
    for (long i = 0; i < 900; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04ld-%02ld-%02ld", 2005 + i / 336,
                      1 + (i / 28) % 12, 1 + i % 28);
        trend.dates.push_back(buf);
        trend.prices.push_back(80.0 + 0.6 * i);
    }
    const LinearFilter f = make_ema2(10.0, 20.0, true);
    const ScenarioResult sig = scenario_run(trend, f, activation_simple_sigmoid(0.75));
    const ScenarioResult rev =
        scenario_run(trend, f, activation_reverting_sigmoid(0.75));
    const bool pass = sig.cumulative_pnl.back() > rev.cumulative_pnl.back();
    report(13, "scenario inequality (figure substitute)", pass,
           "terminal cum P&L: sigmoid " + fmt(sig.cumulative_pnl.back()) +
               " vs reverting " + fmt(rev.cumulative_pnl.back()));
    EXPECT_GT(sig.cumulative_pnl.back(), rev.cumulative_pnl.back());
}
