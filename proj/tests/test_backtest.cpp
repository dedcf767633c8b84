#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tmom/backtest.hpp"
#include "tmom/linear_moments.hpp"
#include "tmom/simulate.hpp"

using namespace tmom;

namespace {

std::string iso_date(long i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld-%02ld-%02ld", 2000 + i / 336,
                  1 + (i / 28) % 12, 1 + i % 28);
    return buf;
}

/// Gaussian random walk with constant true volatility.
PriceSeries synthetic_walk(long days, double sigma, std::uint64_t seed,
                           double drift = 0.0) {
    PriceSeries p;
    std::mt19937_64 rng(seed);
    NormalSampler normal;
    double x = 1000.0;
    for (long i = 0; i < days; ++i) {
        p.dates.push_back(iso_date(i));
        p.prices.push_back(x);
        x += drift + sigma * normal(rng);
    }
    return p;
}

} // namespace

TEST(LoadPrices, ValidTinyFileAndErrors) {
    std::istringstream ok("date,price\n2020-01-02,100.5\n2020-01-03,101.25\n");
    const PriceSeries p = load_prices(ok);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_FALSE(p.sorted_on_load);
    EXPECT_DOUBLE_EQ(p.prices[1], 101.25);

    std::istringstream dup("date,price\n2020-01-02,1\n2020-01-02,2\n");
    try {
        load_prices(dup);
        FAIL() << "duplicate date accepted";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("2020-01-02"), std::string::npos);
    }

    std::istringstream bad("date,price\n2020-01-02,1\n2020-01-03,oops\n");
    try {
        load_prices(bad);
        FAIL() << "unparseable price accepted";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }

    std::istringstream empty("date,price\n");
    EXPECT_THROW(load_prices(empty), DataError);
}

TEST(LoadPrices, OutOfOrderRowsAreSortedWithWarning) {
    std::istringstream in(
        "date,price\n2020-01-05,3\n2020-01-02,1\n2020-01-03,2\n");
    const PriceSeries p = load_prices(in);
    EXPECT_TRUE(p.sorted_on_load);
    EXPECT_EQ(p.dates.front(), "2020-01-02");
    EXPECT_DOUBLE_EQ(p.prices.back(), 3.0);
}

TEST(VolEstimate, ConstantIncrementsConvergeToAbsoluteChange) {
    PriceSeries p;
    const double d = 0.75;
    for (long i = 0; i < 600; ++i) {
        p.dates.push_back(iso_date(i));
        p.prices.push_back(10.0 + d * i);
    }
    const RiskAdjustedSeries r = vol_estimate(p, 20.0);
    EXPECT_NEAR(r.sigma_hat.back(), d, 1e-9); // fixed point of the recursion
    EXPECT_NEAR(r.u.back(), 1.0, 1e-9);
}

TEST(VolEstimate, HomogeneousOfDegreeOneInIncrements) {
    const PriceSeries p1 = synthetic_walk(400, 2.0, 11);
    PriceSeries p2 = p1;
    for (std::size_t i = 0; i < p2.size(); ++i)
        p2.prices[i] = 1000.0 + 3.0 * (p1.prices[i] - 1000.0); // triple increments
    const RiskAdjustedSeries r1 = vol_estimate(p1, 20.0);
    const RiskAdjustedSeries r2 = vol_estimate(p2, 20.0);
    for (std::size_t n = 25; n < p1.size(); n += 40) {
        EXPECT_NEAR(r2.sigma_hat[n], 3.0 * r1.sigma_hat[n], 1e-9 * r2.sigma_hat[n]);
        EXPECT_NEAR(r2.u[n], r1.u[n], 1e-9); // U is scale free
    }
}

TEST(VolEstimate, RiskAdjustedReturnsHaveRoughlyUnitVariance) {
    const PriceSeries p = synthetic_walk(5000, 1.5, 7);
    const RiskAdjustedSeries r = vol_estimate(p, 20.0);
    double s2 = 0.0;
    long n = 0;
    for (long i = r.start_index + 1; i < long(p.size()); ++i, ++n)
        s2 += r.u[std::size_t(i)] * r.u[std::size_t(i)];
    s2 /= double(n);
    EXPECT_GT(s2, 0.8);
    EXPECT_LT(s2, 1.2);
}

TEST(VolEstimate, RelativeReturnsModeIsMultiplicativelyScaleFree) {
    // exponential trend: constant relative changes behave like constant
    // absolute changes do in the default mode
    PriceSeries p;
    double x = 50.0;
    for (long i = 0; i < 500; ++i) {
        p.dates.push_back(iso_date(i));
        p.prices.push_back(x);
        x *= 1.004;
    }
    const RiskAdjustedSeries r = vol_estimate(p, 20.0, ReturnKind::relative);
    EXPECT_NEAR(r.sigma_hat.back(), 0.004, 1e-9);
    EXPECT_NEAR(r.u.back(), 1.0, 1e-9);
    // doubling all prices changes nothing in relative mode
    PriceSeries q = p;
    for (double& v : q.prices) v *= 2.0;
    const RiskAdjustedSeries r2 = vol_estimate(q, 20.0, ReturnKind::relative);
    for (std::size_t n = 25; n < p.size(); n += 60)
        EXPECT_NEAR(r2.u[n], r.u[n], 1e-12);
    // non-positive prices are rejected in relative mode
    PriceSeries neg = p;
    neg.prices[40] = -1.0;
    EXPECT_THROW(vol_estimate(neg, 20.0, ReturnKind::relative), DataError);
}

TEST(VolEstimate, ConstantPricesRejected) {
    PriceSeries p;
    for (long i = 0; i < 100; ++i) {
        p.dates.push_back(iso_date(i));
        p.prices.push_back(42.0);
    }
    EXPECT_THROW(vol_estimate(p, 20.0), DataError);
}

TEST(RunStrategy, CausalityUnderTruncation) {
    const PriceSeries p = synthetic_walk(800, 1.0, 3);
    const LinearFilter f = make_ema2(10.0, 20.0, true);
    const ActivationSpec spec = activation_simple_sigmoid(1.0);
    const StrategyRun full = run_strategy(p, f, spec);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 25; ++t) {
        const long cut =
            full.first_day + long(rng() % std::uint64_t(full.position.size()));
        PriceSeries trunc;
        trunc.dates.assign(p.dates.begin(), p.dates.begin() + cut + 1);
        trunc.prices.assign(p.prices.begin(), p.prices.begin() + cut + 1);
        const StrategyRun part = run_strategy(trunc, f, spec);
        // position on the final day of the truncated data equals the full run's
        ASSERT_EQ(long(part.position.size()), cut - full.first_day + 1);
        EXPECT_DOUBLE_EQ(part.position.back(),
                         full.position[std::size_t(cut - full.first_day)]);
    }
}

TEST(RunStrategy, ZeroActivationGivesZeroPnl) {
    const PriceSeries p = synthetic_walk(300, 1.0, 19);
    // the all-zero map cannot be unit-normalised, so build the spec by hand
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::custom;
    s.psi_raw = [](double) { return 0.0; };
    s.c = 1.0;
    const StrategyRun run = run_strategy(p, make_ema1(10.0, true), s);
    for (double x : run.pnl) EXPECT_EQ(x, 0.0);
    // and the normaliser rejects it loudly
    EXPECT_THROW(activation_custom([](double) { return 0.0; }),
                 std::invalid_argument);
}

TEST(RunStrategy, UCapFlagMarksNonCanonical) {
    const PriceSeries p = synthetic_walk(300, 1.0, 23);
    StrategyOptions opts;
    opts.u_cap = 0.5;
    const StrategyRun run =
        run_strategy(p, make_ema1(10.0, true), activation_linear(), opts);
    EXPECT_TRUE(run.non_canonical);
    for (double x : run.ras.u) EXPECT_LE(std::abs(x), 0.5);
    EXPECT_FALSE(
        run_strategy(p, make_ema1(10.0, true), activation_linear()).non_canonical);
}

TEST(EmpiricalTermStructure, CentralVsNonCentralOnDriftedData) {
    // positively drifted P&L: non-central skew exceeds central skew
    std::mt19937_64 rng(31);
    NormalSampler normal;
    std::vector<double> pnl(20000);
    for (double& x : pnl) x = 0.03 + normal(rng);
    const EmpiricalTermStructure c =
        empirical_term_structure(pnl, 50, SkewMode::central);
    const EmpiricalTermStructure nc =
        empirical_term_structure(pnl, 50, SkewMode::noncentral);
    for (std::size_t i = 4; i < c.ts.size(); i += 9)
        EXPECT_GT(nc.ts.kappa3[i], c.ts.kappa3[i]);
    // zero-mean data: the two agree within noise
    for (double& x : pnl) x -= 0.03;
    const EmpiricalTermStructure c0 =
        empirical_term_structure(pnl, 50, SkewMode::central);
    const EmpiricalTermStructure nc0 =
        empirical_term_structure(pnl, 50, SkewMode::noncentral);
    for (std::size_t i = 0; i < c0.ts.size(); i += 11)
        EXPECT_NEAR(nc0.ts.kappa3[i], c0.ts.kappa3[i], 0.1);
}

TEST(EmpiricalTermStructure, DisjointModeCarriesStandardErrors) {
    std::mt19937_64 rng(37);
    NormalSampler normal;
    std::vector<double> pnl(6000);
    for (double& x : pnl) x = normal(rng);
    const EmpiricalTermStructure d = empirical_term_structure(
        pnl, 40, SkewMode::central, WindowMode::disjoint);
    EXPECT_TRUE(d.ts.has_se());
    for (double se : d.ts.se_kappa3) EXPECT_GT(se, 0.0);
    const EmpiricalTermStructure o = empirical_term_structure(pnl, 40);
    EXPECT_FALSE(o.ts.has_se());
    // overlapping mode has more windows per period
    EXPECT_GT(o.ts.n_samples[30], d.ts.n_samples[30]);
}

TEST(EmpiricalTermStructure, ShortSeriesRejectedOrOmitted) {
    std::vector<double> pnl(50, 0.1);
    EXPECT_THROW(empirical_term_structure(pnl, 40), std::invalid_argument);
}

TEST(BacktestPipeline, MatchesAnalyticTermStructureOnSyntheticData) {
    // constant-vol gaussian walk through the backtest pipeline reproduces the
    // analytic linear skew curve within disjoint-window error bars
    const PriceSeries p = synthetic_walk(120000, 2.5, 1234);
    const LinearFilter f = make_ema2(20.0, 40.0, true);
    const StrategyRun run = run_strategy(p, f, activation_linear());
    const EmpiricalTermStructure emp = empirical_term_structure(
        run.pnl, 100, SkewMode::central, WindowMode::disjoint);
    const MomentTermStructure ana = skew_term_structure(f, 100);
    for (long period : {10L, 50L, 100L}) {
        const std::size_t i = std::size_t(period - 1);
        EXPECT_NEAR(emp.ts.kappa3[i], ana.kappa3[i], 3.0 * emp.ts.se_kappa3[i])
            << "P = " << period;
    }
}

TEST(PerformanceSummary, GramCharlierVsEmpiricalWinRate) {
    // simulated linear strategy, no drift: win fraction below one half near
    // the skew peak, and the Gram-Charlier estimate tracks it
    const PriceSeries p = synthetic_walk(60000, 1.0, 99);
    const LinearFilter f = make_ema2(10.0, 20.0, true);
    const StrategyRun run = run_strategy(p, f, activation_linear());
    const PerformanceSummary s = performance_summary(run.pnl, 50);
    ASSERT_TRUE(s.sharpe_defined);
    EXPECT_LT(s.win_fraction, 0.5);
    EXPECT_NEAR(s.gram_charlier, s.win_fraction, 0.05);
    EXPECT_GT(s.kappa3, 0.5);
}

TEST(PerformanceSummary, ZeroPnlFlaggedNotNaN) {
    std::vector<double> pnl(500, 0.0);
    const PerformanceSummary s = performance_summary(pnl, 20);
    EXPECT_FALSE(s.sharpe_defined);
    EXPECT_FALSE(std::isnan(s.sharpe));
    EXPECT_FALSE(std::isnan(s.gram_charlier));
}
