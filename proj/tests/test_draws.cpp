#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "entropyts/draws.hpp"
#include "entropyts/error.hpp"
#include "entropyts/random.hpp"
#include "entropyts/stats.hpp"
#include "oracles.hpp"

using namespace entropyts;

TEST(Draws, DetectsRunsInOrder)
{
    const std::vector<double> r{0.01, 0.02, -0.01, -0.03, -0.01, 0.05};
    const auto d = detect_draws(r);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].sign, DrawSign::Up);
    EXPECT_NEAR(d[0].magnitude, 0.03, 1e-15);
    EXPECT_EQ(d[0].length, 2);
    EXPECT_EQ(d[1].sign, DrawSign::Down);
    EXPECT_NEAR(d[1].magnitude, -0.05, 1e-15);
    EXPECT_EQ(d[1].length, 3);
    EXPECT_EQ(d[1].start_index, 2u);
    EXPECT_EQ(d[1].end_index, 4u);
    EXPECT_EQ(d[2].length, 1);
}

TEST(Draws, ZeroReturnIsItsOwnFlatDraw)
{
    const std::vector<double> r{-0.01, 0.0, -0.02};
    const auto d = detect_draws(r);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[1].sign, DrawSign::Flat);
    const std::vector<double> bad{0.1, std::nan("")};
    EXPECT_THROW(detect_draws(bad), DomainError);
}

TEST(Draws, LengthsAndMagnitudesPartitionTheSeries)
{
    Rng rng(1);
    std::vector<double> r(10000);
    for (auto& v : r) v = rng.normal();
    const auto d = detect_draws(r);
    std::size_t len = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        len += static_cast<std::size_t>(d[k].length);
        sum += d[k].magnitude;
        if (k > 0) EXPECT_NE(d[k].sign, d[k - 1].sign);
    }
    EXPECT_EQ(len, r.size());
    double total = 0.0;
    for (double v : r) total += v;
    EXPECT_NEAR(sum, total, 1e-9);
}

TEST(Draws, StatisticsOnFairCoin)
{
    Rng rng(2);
    std::vector<double> r(200000);
    for (auto& v : r) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const auto d = detect_draws(r);
    const DrawStatistics s = draw_statistics(d);
    EXPECT_NEAR(s.mean_len_down, 2.0, 0.03);
    EXPECT_NEAR(s.sd_len_down * s.sd_len_down, 2.0, 0.1);
    EXPECT_NEAR(s.mean_down, -s.mean_len_down, 1e-12);
    EXPECT_NEAR(s.mean_drop, -1.0, 1e-12);
    EXPECT_LE(s.max_drawdown.magnitude, -10.0);
}

TEST(Draws, RunLengthPmfAndExpectedRuns)
{
    double total = 0.0, mean = 0.0;
    for (int n = 1; n < 400; ++n) {
        total += run_length_pmf(0.3, n);
        mean += n * run_length_pmf(0.3, n);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, 1.0 / 0.3, 1e-10);
    EXPECT_DOUBLE_EQ(expected_runs(0.5, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(expected_runs(0.0, 50.0), 1.0);
    // three trials, exhaustive: runs = 1 + number of sign changes
    double e = 0.0;
    const double p = 0.3;
    for (int mask = 0; mask < 8; ++mask) {
        double w = 1.0;
        int changes = 0;
        for (int b = 0; b < 3; ++b) {
            const int up = (mask >> b) & 1;
            w *= up ? p : 1 - p;
            if (b > 0 && up != ((mask >> (b - 1)) & 1)) ++changes;
        }
        e += w * (1 + changes);
    }
    EXPECT_NEAR(expected_runs(p, 3.0), e, 1e-14);
}

TEST(Draws, ConditionalLengthOfExtremeDraws)
{
    Rng rng(3);
    std::vector<double> r(50000);
    for (auto& v : r) v = rng.normal();
    const auto d = detect_draws(r);
    const double overall = draw_statistics(d).mean_len_down;
    const ConditionalLength tail = conditional_draw_length(d, DrawSign::Down, 0.05);
    EXPECT_GT(tail.mean, overall);
    EXPECT_NEAR(static_cast<double>(tail.count), 0.05 * draw_statistics(d).n_down, 2.0);
    EXPECT_GT(tail.count, 0u);
    EXPECT_LT(tail.threshold, 0.0);
}

TEST(StretchedExp, LoglikMatchesDensity)
{
    const std::vector<double> d{0.5, 1.0, 2.5};
    const double chi = 1.3, z = 0.8;
    double ll = 0.0;
    for (double v : d) ll += std::log(z / (chi * std::tgamma(1 / z))) - std::pow(v / chi, z);
    EXPECT_NEAR(stretched_exp_loglik(d, chi, z), ll, 1e-12);
}

TEST(StretchedExp, ExponentialClosedForm)
{
    Rng rng(4);
    std::vector<double> d(5000);
    for (auto& v : d) v = 0.02 * rng.exponential();
    FitOptions o;
    o.stderr_method = StderrMethod::None;
    const DrawFit f = fit_stretched_exponential(d, o);
    // at z = 1 the score equations give chi = mean; the free-z optimum must be at least as good
    EXPECT_GE(f.loglik, stretched_exp_loglik(d, mean(d), 1.0) - 1e-9);
    EXPECT_NEAR(f.z, 1.0, 0.05);
    EXPECT_NEAR(f.d0, f.z / (f.chi * std::tgamma(1 / f.z)), 1e-9);
}

TEST(StretchedExp, RecoversPlantedShape)
{
    for (double z : {0.85, 1.0, 1.2}) {
        const auto d = oracle::stretched_exp_sample(0.01, z, 4000, 17);
        const DrawFit f = fit_stretched_exponential(d);
        EXPECT_GT(f.z_stderr, 0.0);
        EXPECT_LT(std::abs(f.z - z), 3 * f.z_stderr) << z;
        EXPECT_LT(std::abs(f.chi - 0.01), 3 * f.chi_stderr) << z;
    }
}

TEST(StretchedExp, JackknifeMatchesBruteForceRefits)
{
    const auto d = oracle::stretched_exp_sample(1.0, 0.9, 60, 5);
    const DrawFit f = fit_stretched_exponential(d);
    FitOptions none;
    none.stderr_method = StderrMethod::None;
    const double n = static_cast<double>(d.size());
    std::vector<double> zs, chis;
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> loo = d;
        loo.erase(loo.begin() + static_cast<std::ptrdiff_t>(i));
        const DrawFit g = fit_stretched_exponential(loo, none);
        zs.push_back(g.z);
        chis.push_back(g.chi);
    }
    auto jk = [&](const std::vector<double>& v) {
        const double mu = mean(v);
        double s = 0.0;
        for (double x : v) s += (x - mu) * (x - mu);
        return std::sqrt((n - 1) / n * s);
    };
    EXPECT_NEAR(f.z_stderr, jk(zs), 1e-5 * jk(zs));
    EXPECT_NEAR(f.chi_stderr, jk(chis), 1e-5 * jk(chis));
}

TEST(StretchedExp, BootstrapIsSeededAndComparable)
{
    const auto d = oracle::stretched_exp_sample(1.0, 1.1, 2000, 6);
    FitOptions b;
    b.stderr_method = StderrMethod::Bootstrap;
    b.n_boot = 100;
    b.seed = 3;
    const DrawFit f1 = fit_stretched_exponential(d, b);
    const DrawFit f2 = fit_stretched_exponential(d, b);
    EXPECT_EQ(f1.z_stderr, f2.z_stderr);
    const DrawFit j = fit_stretched_exponential(d);
    EXPECT_NEAR(f1.z_stderr / j.z_stderr, 1.0, 0.35);
}

TEST(StretchedExp, RejectsBadInput)
{
    EXPECT_THROW(fit_stretched_exponential(std::vector<double>{1.0}), DomainError);
    EXPECT_THROW(fit_stretched_exponential(std::vector<double>{1.0, -2.0, 3.0}), DomainError);
}

TEST(Discretize, ExtremeDrawsMapToOuterSymbols)
{
    Rng rng(7);
    std::vector<double> r(20000);
    for (auto& v : r) v = rng.normal();
    const auto d = detect_draws(r);
    const DrawThresholds th = draw_thresholds(d, 0.05);
    EXPECT_LT(th.lower, 0.0);
    EXPECT_GT(th.upper, 0.0);
    const SymbolSeries s = discretize_by_draw(r, th);
    ASSERT_EQ(s.size(), r.size());
    for (const Draw& dr : d) {
        const int want = dr.magnitude < th.lower ? 0 : (dr.magnitude > th.upper ? 2 : 1);
        for (std::size_t t = dr.start_index; t <= dr.end_index; ++t) EXPECT_EQ(s[t], want);
    }
    const SymbolSeries p = discretize_by_draw(r, 0.05, QuantileScope::PerSign);
    EXPECT_EQ(p.size(), r.size());
    EXPECT_THROW(draw_thresholds(d, 0.6), DomainError);
}

TEST(Discretize, EquiprobableReturnThirds)
{
    std::vector<double> r(3000);
    Rng rng(8);
    for (auto& v : r) v = rng.normal();
    const SymbolSeries s = discretize_by_return(r, 1.0 / 3, 2.0 / 3);
    int c[3] = {0, 0, 0};
    for (std::size_t i = 0; i < s.size(); ++i) ++c[s[i]];
    for (int k : c) EXPECT_NEAR(k, 1000, 1);
}
