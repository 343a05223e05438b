#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "entropyts/dependence.hpp"
#include "entropyts/error.hpp"
#include "entropyts/random.hpp"

using namespace entropyts;

namespace {

SymbolSeries coin(std::size_t n, std::uint64_t seed, int k = 2)
{
    Rng rng(seed);
    std::vector<int> s(n);
    for (auto& v : s) v = static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    return SymbolSeries(std::move(s), k);
}

std::vector<int> rank_bins(const std::vector<double>& v, int bins)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<int> out(v.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]] = static_cast<int>(r * bins / idx.size());
    return out;
}

/// Plug-in T_{Y->X}(m, l) from explicit conditional frequency tables.
double te_by_tables(const SymbolSeries& x, const SymbolSeries& y, int m, int l)
{
    using Hist = std::vector<int>;
    std::map<std::tuple<int, Hist, Hist>, double> full;
    std::map<std::pair<Hist, Hist>, double> ctx_full;
    std::map<std::pair<int, Hist>, double> own;
    std::map<Hist, double> ctx_own;
    const int start = std::max(m, l);
    const double n = static_cast<double>(x.size() - static_cast<std::size_t>(start));
    for (std::size_t t = static_cast<std::size_t>(start); t < x.size(); ++t) {
        Hist hx, hy;
        for (int k = 1; k <= m; ++k) hx.push_back(x[t - static_cast<std::size_t>(k)]);
        for (int k = 1; k <= l; ++k) hy.push_back(y[t - static_cast<std::size_t>(k)]);
        full[{x[t], hx, hy}] += 1;
        ctx_full[{hx, hy}] += 1;
        own[{x[t], hx}] += 1;
        ctx_own[hx] += 1;
    }
    double te = 0.0;
    for (const auto& [key, c] : full) {
        const auto& [xt, hx, hy] = key;
        const double p_full = c / ctx_full.at({hx, hy});
        const double p_own = own.at({xt, hx}) / ctx_own.at(hx);
        te += c / n * std::log2(p_full / p_own);
    }
    return te;
}

}  // namespace

TEST(MutualInformation, IdenticalSeriesGiveEntropy)
{
    const SymbolSeries x = coin(100000, 1);
    EXPECT_NEAR(mutual_information(x, x).bits, 1.0, 0.01);
}

TEST(MutualInformation, SymmetricAndNonNegative)
{
    const SymbolSeries x = coin(2000, 2, 3), y = coin(2000, 3, 3);
    EXPECT_NEAR(mutual_information(x, y).bits, mutual_information(y, x).bits, 1e-12);
    EXPECT_GE(mutual_information(x, y).bits, 0.0);
    for (int lag = -3; lag <= 3; ++lag)
        EXPECT_NEAR(mutual_information(x, y, lag).bits, mutual_information(y, x, -lag).bits, 1e-12) << lag;
}

TEST(MutualInformation, LagRecoversShift)
{
    const SymbolSeries x = coin(5000, 4);
    std::vector<int> s(5000, 0);
    for (std::size_t t = 2; t < s.size(); ++t) s[t] = x[t - 2];
    const SymbolSeries y(std::move(s), 2);
    EXPECT_NEAR(mutual_information(x, y, 2).bits, 1.0, 0.01);
    EXPECT_LT(mutual_information(x, y, 0).bits, 0.01);
}

TEST(MutualInformation, IndependentBelowNoiseFloorQuantile)
{
    const SymbolSeries x = coin(3000, 5, 3), y = coin(3000, 6, 3);
    const SurrogateStats fl = mi_noise_floor(x, y, 0, 100, 9);
    EXPECT_GT(fl.mean, 0.0);
    EXPECT_GT(fl.sd, 0.0);
    EXPECT_GE(fl.q99, fl.mean);
    EXPECT_LT(mutual_information(x, y).bits, fl.mean + 4 * fl.sd);
    EXPECT_THROW(mi_noise_floor(x, y, 0, 1, 9), DomainError);
}

TEST(MutualInformation, GaussianClosedForm)
{
    Rng rng(8);
    const double rho = 0.5;
    const std::size_t n = 200000;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.normal();
        b[i] = rho * a[i] + std::sqrt(1 - rho * rho) * rng.normal();
    }
    const SymbolSeries x(rank_bins(a, 16), 16), y(rank_bins(b, 16), 16);
    const double exact = -0.5 * std::log2(1 - rho * rho);
    const double mi = mutual_information(x, y).bits;
    EXPECT_NEAR(mi, exact, 0.03);
    EXPECT_LT(mi, exact + 0.005);
}

TEST(TransferEntropy, MatchesConditionalTables)
{
    const SymbolSeries x = coin(800, 10, 3), y = coin(800, 11, 3);
    for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
            EXPECT_NEAR(transfer_entropy(x, y, m, l, Estimator::Naive), te_by_tables(x, y, m, l), 1e-12) << m << l;
}

TEST(TransferEntropy, DeterministicCopyIsOneBit)
{
    const SymbolSeries y = coin(100000, 12);
    std::vector<int> s(y.size(), 0);
    for (std::size_t t = 1; t < s.size(); ++t) s[t] = y[t - 1];
    const SymbolSeries x(std::move(s), 2);
    EXPECT_NEAR(transfer_entropy(x, y, 1, 1), 1.0, 0.01);
    EXPECT_LT(transfer_entropy(y, x, 1, 1), 0.01);
    const TeResult r = effective_transfer_entropy(x, y, 1, 1, 20, 1);
    EXPECT_NEAR(r.effective_te_bits, 1.0, 0.01);
    EXPECT_NEAR(r.rea_fraction, 1.0, 0.01);
}

TEST(TransferEntropy, IndependentMarkovTargetStaysAtNoise)
{
    Rng rng(13);
    std::vector<int> s(100000);
    s[0] = 0;
    for (std::size_t t = 1; t < s.size(); ++t) s[t] = rng.bernoulli(s[t - 1] ? 0.3 : 0.1) ? 1 - s[t - 1] : s[t - 1];
    const SymbolSeries x(std::move(s), 2);
    const SymbolSeries y = coin(x.size(), 14);
    Eigen::Matrix2d p;
    p << 0.9, 0.1, 0.3, 0.7;
    const TeResult r = effective_transfer_entropy(x, y, 1, 1, 20, 2);
    EXPECT_LT(std::abs(r.effective_te_bits), 4 * r.shuffle_stderr);
    EXPECT_NEAR(r.conditional_entropy_bits, markov_entropy_rate(p), 0.01);
}

TEST(TransferEntropy, ShufflesAreSeedDeterministic)
{
    const SymbolSeries x = coin(1000, 15), y = coin(1000, 16);
    const TeResult a = effective_transfer_entropy(x, y, 2, 2, 30, 77);
    const TeResult b = effective_transfer_entropy(x, y, 2, 2, 30, 77);
    EXPECT_EQ(a.shuffle_mean, b.shuffle_mean);
    EXPECT_EQ(a.shuffle_stderr, b.shuffle_stderr);
    EXPECT_EQ(a.n_shuffles, 30);
    EXPECT_THROW(effective_transfer_entropy(x, y, 0, 1), DomainError);
}
