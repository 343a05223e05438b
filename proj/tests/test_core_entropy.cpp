#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "entropyts/core_entropy.hpp"
#include "entropyts/error.hpp"
#include "entropyts/random.hpp"
#include "entropyts/special.hpp"
#include "oracles.hpp"

using namespace entropyts;

namespace {

SymbolSeries iid_symbols(std::size_t n, int k, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<int> s(n);
    for (auto& v : s) v = static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    return SymbolSeries(std::move(s), k);
}

}  // namespace

TEST(Special, DigammaMatchesBoost)
{
    for (double x : {1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 9.99, 10.0, 57.3, 1e4}) {
        EXPECT_NEAR(digamma(x), boost::math::digamma(x), 1e-12 * std::max(1.0, std::abs(digamma(x)))) << x;
        EXPECT_NEAR(trigamma(x), boost::math::trigamma(x), 1e-12 * std::max(1.0, trigamma(x))) << x;
    }
    EXPECT_NEAR(digamma(1.0), -0.57721566490153286, 1e-15);
    EXPECT_THROW(digamma(0.0), DomainError);
}

TEST(SymbolSeries, Validates)
{
    EXPECT_THROW(SymbolSeries({0, 1}, 1), DomainError);
    EXPECT_THROW(SymbolSeries({0}, 2), DomainError);
    EXPECT_THROW(SymbolSeries({0, 2}, 2), DomainError);
    EXPECT_THROW(SymbolSeries({0, -1}, 2), DomainError);
    EXPECT_NO_THROW(SymbolSeries({0, 1}, 2));
}

TEST(Entropy, BinaryEntropyCurve)
{
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    for (int k = 1; k < 100; ++k) {
        const double p = k / 100.0;
        EXPECT_NEAR(binary_entropy(p), -p * std::log2(p) - (1 - p) * std::log2(1 - p), 1e-14);
        EXPECT_NEAR(binary_entropy(p), binary_entropy(1 - p), 1e-15);
    }
    EXPECT_THROW(binary_entropy(1.2), DomainError);
}

TEST(Entropy, NaiveOnExplicitHistograms)
{
    EXPECT_DOUBLE_EQ(naive_entropy(Histogram{{0, 5}, {1, 5}}).bits, 1.0);
    EXPECT_EQ(naive_entropy(Histogram{{3, 10}}).bits, 0.0);
    EXPECT_NEAR(naive_entropy(Histogram{{0, 1}, {1, 1}, {2, 1}, {3, 1}}).bits, 2.0, 1e-15);
    const double h = naive_entropy(Histogram{{0, 1}, {1, 2}, {2, 3}}).bits;
    EXPECT_NEAR(h, -(1.0 / 6 * std::log2(1.0 / 6) + 2.0 / 6 * std::log2(2.0 / 6) + 3.0 / 6 * std::log2(3.0 / 6)), 1e-15);
}

TEST(Entropy, GrassbergerMatchesBoostDigammaFormula)
{
    const Histogram h{{0, 3}, {1, 7}, {5, 11}, {9, 1}};
    const double n = 22.0;
    double s = 0.0;
    for (int c : {3, 7, 11, 1}) s += c * boost::math::digamma(static_cast<double>(c));
    EXPECT_NEAR(grassberger_entropy(h).bits, (std::log(n) - s / n) / std::log(2.0), 1e-13);
    EXPECT_EQ(estimate_entropy(h, Estimator::Naive).bits, naive_entropy(h).bits);
    EXPECT_EQ(grassberger_entropy(h).estimator, Estimator::Grassberger);
}

TEST(Entropy, GrassbergerExceedsNaiveOnSmallSamples)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SymbolSeries s = iid_symbols(30, 3, seed);
        const Histogram h = block_histogram(s, 1);
        EXPECT_GT(grassberger_entropy(h).bits, naive_entropy(h).bits);
    }
}

TEST(Entropy, FairCoinBiasMatchesExactEnumeration)
{
    const int n = 20, reps = 20000;
    double naive = 0.0, gb = 0.0;
    Rng rng(7);
    for (int r = 0; r < reps; ++r) {
        std::vector<Histogram::Key> codes(n);
        for (auto& c : codes) c = rng.bernoulli(0.5);
        const Histogram h = Histogram::from_codes(codes);
        naive += naive_entropy(h).bits;
        gb += grassberger_entropy(h).bits;
    }
    naive /= reps;
    gb /= reps;
    EXPECT_NEAR(naive, oracle::fair_coin_naive_mean(n), 0.003);
    EXPECT_NEAR(gb, oracle::fair_coin_grassberger_mean(n), 0.003);
    EXPECT_LT(oracle::fair_coin_naive_mean(50), oracle::fair_coin_naive_mean(1000));
    EXPECT_LT(oracle::fair_coin_naive_mean(1000), 1.0);
}

TEST(Entropy, ShannonAndRenyi)
{
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const double h = shannon_entropy(p);
    EXPECT_NEAR(h, -(0.1 * std::log2(0.1) + 0.2 * std::log2(0.2) + 0.3 * std::log2(0.3) + 0.4 * std::log2(0.4)), 1e-15);
    EXPECT_NEAR(renyi_entropy(p, 0.999), h, 1e-3);
    EXPECT_NEAR(renyi_entropy(p, 1.0 - 1e-6), h, 1e-5);
    EXPECT_NEAR(renyi_entropy(p, 1.0 + 1e-6), h, 1e-5);
    EXPECT_THROW(renyi_entropy(p, 1.0), DomainError);
    EXPECT_THROW(renyi_entropy(p, 0.0), DomainError);
    const std::vector<double> uniform(4, 0.25);
    for (double q : {0.3, 2.0, 5.0}) EXPECT_NEAR(renyi_entropy(uniform, q), 2.0, 1e-14);
    const std::vector<double> skew{0.75, 0.25};
    EXPECT_NEAR(renyi_entropy(skew, 2.0), -std::log2(0.625), 1e-14);
    EXPECT_NEAR(renyi_entropy(p, 2.0), -std::log2(0.01 + 0.04 + 0.09 + 0.16), 1e-15);
    EXPECT_GE(renyi_entropy(p, 0.5), renyi_entropy(p, 2.0));
    const std::vector<double> bad{0.5, 0.6};
    EXPECT_THROW(shannon_entropy(bad), DomainError);
}

TEST(Blocks, EncodeDecodeRoundTrip)
{
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const int k = 2 + static_cast<int>(rng.below(6));
        const int len = 1 + static_cast<int>(rng.below(10));
        std::vector<int> b(static_cast<std::size_t>(len));
        for (auto& v : b) v = static_cast<int>(rng.below(static_cast<std::size_t>(k)));
        EXPECT_EQ(decode_block(encode_block(b, k), k, len), b);
    }
    const std::vector<int> b{1, 0, 2};
    EXPECT_EQ(encode_block(b, 3), 1u * 9 + 0 * 3 + 2);
    EXPECT_THROW(check_key_capacity(64.0), DomainError);
    EXPECT_NO_THROW(check_key_capacity(63.0));
}

TEST(Blocks, BlockHistogramCountsOverlappingBlocks)
{
    const SymbolSeries s({0, 1, 1, 0, 1}, 2);
    const Histogram h = block_histogram(s, 2);
    EXPECT_EQ(h.total(), 4u);
    EXPECT_EQ(h.count(0b01), 2u);
    EXPECT_EQ(h.count(0b11), 1u);
    EXPECT_EQ(h.count(0b10), 1u);
    EXPECT_EQ(h.count(0b00), 0u);
}

TEST(Blocks, ChainRuleOnSameJointHistogram)
{
    const SymbolSeries s = iid_symbols(5000, 3, 11);
    for (int m = 1; m <= 3; ++m) {
        const double hm = naive_entropy(block_histogram(s, m)).bits;
        const double hm1 = naive_entropy(block_histogram(s, m + 1)).bits;
        EXPECT_GE(conditional_block_entropy(s, m), 0.0);
        EXPECT_NEAR(conditional_block_entropy(s, m), hm1 - hm, 0.01);
    }
}

TEST(Blocks, ConditionalEntropyOfKnownChain)
{
    Eigen::Matrix2d p;
    p << 0.9, 0.1, 0.3, 0.7;
    Rng rng(5);
    std::vector<int> s(200000);
    s[0] = 0;
    for (std::size_t t = 1; t < s.size(); ++t) s[t] = rng.bernoulli(p(s[t - 1], 1)) ? 1 : 0;
    const SymbolSeries x(std::move(s), 2);
    EXPECT_NEAR(conditional_block_entropy(x, 1), markov_entropy_rate(p), 0.01);
}

TEST(Markov, StationaryTwoStateClosedForm)
{
    for (double a : {0.01, 0.2, 0.5, 0.9}) {
        for (double b : {0.05, 0.3, 1.0}) {
            Eigen::Matrix2d p;
            p << 1 - a, a, b, 1 - b;
            const Eigen::VectorXd pi = stationary_distribution(p);
            EXPECT_NEAR(pi(0), b / (a + b), 1e-12);
            EXPECT_NEAR(pi(1), a / (a + b), 1e-12);
            EXPECT_NEAR(markov_entropy_rate(p), oracle::two_state_entropy_rate(a, b), 1e-12);
        }
    }
}

TEST(Markov, StationarySolvesLeftEigenproblem)
{
    Eigen::Matrix3d p;
    p << 0.5, 0.3, 0.2, 0.1, 0.8, 0.1, 0.25, 0.25, 0.5;
    const Eigen::VectorXd pi = stationary_distribution(p);
    EXPECT_NEAR((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(pi.sum(), 1.0, 1e-14);
}

TEST(Markov, PeriodicAndReducibleChains)
{
    Eigen::Matrix2d flip;
    flip << 0, 1, 1, 0;
    EXPECT_NEAR(stationary_distribution(flip)(0), 0.5, 1e-12);
    EXPECT_EQ(markov_entropy_rate(flip), 0.0);
    EXPECT_THROW(stationary_distribution(Eigen::Matrix2d::Identity()), ReducibleChainError);
    Eigen::Matrix2d bad;
    bad << 0.5, 0.6, 0.5, 0.5;
    EXPECT_THROW(stationary_distribution(bad), DomainError);
}

TEST(Markov, EntropyRateAndDurations)
{
    Eigen::Matrix2d sym;
    sym << 0.5, 0.5, 0.5, 0.5;
    EXPECT_DOUBLE_EQ(markov_entropy_rate(sym), 1.0);
    EXPECT_DOUBLE_EQ(expected_state_duration(sym, 0), 2.0);
    Eigen::Matrix2d p;
    p << 0.855, 0.145, 0.2, 0.8;
    EXPECT_NEAR(expected_state_duration(p, 0), 6.897, 5e-4);
    EXPECT_NEAR(expected_state_duration(p, 1), 5.0, 1e-12);
    Eigen::Matrix2d absorbing;
    absorbing << 1, 0, 0.5, 0.5;
    EXPECT_THROW(expected_state_duration(absorbing, 0), DomainError);
}
