#include <cmath>
#include <stdexcept>

#include "entropyts/core_entropy.hpp"
#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/simulate.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

namespace {

constexpr int kPaths = 1000;
constexpr int kCoinReps = 5000;
constexpr double kRFraction = 0.2;

std::uint64_t row_stream(std::size_t row)
{
    return static_cast<std::uint64_t>(row + 1) << 32;
}

int reps_or(const SuiteOptions& o, int fallback)
{
    return o.replicates > 0 ? o.replicates : fallback;
}

Table base_table(const std::string& name, std::uint64_t seed, int reps, const SuiteOptions& o)
{
    Table t;
    t.meta = {{"suite", name}, {"seed", std::to_string(seed)}, {"replicates", std::to_string(reps)},
              {"log_base", o.base == LogBase::Natural ? "e" : "2"}};
    return t;
}

Table coin_entropy(std::uint64_t seed, const SuiteOptions& o)
{
    Table t = base_table("coin-entropy", seed, 0, o);
    t.columns = {"p", "entropy_bits"};
    for (int k = 0; k <= 100; ++k) {
        const double p = k / 100.0;
        t.add_row({p, binary_entropy(p)});
    }
    return t;
}

Table estimator_bias(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kCoinReps);
    Table t = base_table("estimator-bias", seed, reps, o);
    t.meta.emplace_back("source", "fair coin");
    t.columns = {"n", "naive_mean", "naive_sd", "grassberger_mean", "grassberger_sd"};
    const std::vector<int> sizes{10, 20, 50, 100, 200, 500, 1000};
    for (std::size_t row = 0; row < sizes.size(); ++row) {
        const int n = sizes[row];
        std::vector<double> naive(static_cast<std::size_t>(reps)), gb(static_cast<std::size_t>(reps));
        parallel_for(naive.size(), [&](std::size_t k) {
            Rng rng(seed, row_stream(row) + k);
            std::vector<Histogram::Key> codes(static_cast<std::size_t>(n));
            for (auto& c : codes) c = rng.bernoulli(0.5) ? 1 : 0;
            const Histogram h = Histogram::from_codes(std::move(codes));
            naive[k] = naive_entropy(h).bits;
            gb[k] = grassberger_entropy(h).bits;
        });
        t.add_row({static_cast<std::int64_t>(n), mean(naive), sample_sd(naive), mean(gb), sample_sd(gb)});
    }
    return t;
}

Table apen_ar1(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("apen-ar1", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"n", "200"}, {"m", "1"}, {"r_fraction", "0.2"}});
    t.columns = {"rho", "apen_mean", "apen_sd"};
    for (int k = 0; k <= 9; ++k) {
        const double rho = k / 10.0;
        const auto s = apen_replicates(Ar1{rho}, 200, 1, kRFraction, PathTransform::None, reps, seed,
                                       row_stream(static_cast<std::size_t>(k)), o.base);
        t.add_row({rho, s.mean, s.sd});
    }
    return t;
}

Table apen_iid(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("apen-iid", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"m", "2"}, {"r_fraction", "0.2"}, {"source", "iid standard normal"}});
    t.columns = {"n", "apen_mean", "apen_sd"};
    const std::vector<std::size_t> sizes{20, 50, 100, 200, 500};
    for (std::size_t row = 0; row < sizes.size(); ++row) {
        const auto s = apen_replicates(Ar1{0.0}, sizes[row], 2, kRFraction, PathTransform::None, reps, seed,
                                       row_stream(row), o.base);
        t.add_row({static_cast<std::int64_t>(sizes[row]), s.mean, s.sd});
    }
    return t;
}

Table garch_apen(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("garch-apen", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"alpha0", "1e-05"}, {"n", "400"}, {"m", "1"}, {"r_fraction", "0.2"},
                                 {"series", "squared innovations"}, {"burn_in", "1000"}});
    t.columns = {"alpha1", "beta1", "apen_mean", "apen_sd"};
    std::size_t row = 0;
    for (int i = 1; i <= 18; ++i) {
        for (int j = 1; i + j < 20; ++j) {
            Garch11 g{1e-5, i * 0.05, j * 0.05, 1000};
            const auto s = apen_replicates(g, 400, 1, kRFraction, PathTransform::Square, reps, seed, row_stream(row++), o.base);
            t.add_row({g.alpha1, g.beta1, s.mean, s.sd});
        }
    }
    return t;
}

/// Rolling ApEn of squared VolJump paths; returns per-window mean and sd.
std::pair<std::vector<double>, std::vector<double>> rolling_jump(const VolJump& v, std::size_t n, std::size_t window,
                                                                 int reps, std::uint64_t seed, std::uint64_t stream,
                                                                 LogBase base)
{
    const std::size_t count = n - window + 1;
    std::vector<std::vector<double>> per_path(static_cast<std::size_t>(reps));
    parallel_for(per_path.size(), [&](std::size_t k) {
        SimResult p = simulate(SimSpec{v, n, seed, stream + k});
        for (double& x : p.series) x *= x;
        std::vector<double> vals(count);
        const Tolerance tol = Tolerance::fraction_of_sd(kRFraction);
        for (std::size_t w = 0; w < count; ++w)
            vals[w] = apen(std::span<const double>(p.series).subspan(w, window), 1, tol, base).value;
        per_path[k] = std::move(vals);
    });
    std::vector<double> mu(count), sd(count);
    std::vector<double> col(per_path.size());
    for (std::size_t w = 0; w < count; ++w) {
        for (std::size_t k = 0; k < per_path.size(); ++k) col[k] = per_path[k][w];
        mu[w] = mean(col);
        sd[w] = sample_sd(col);
    }
    return {mu, sd};
}

constexpr double kLowSigma = 0.01;
constexpr double kHighSigma = 0.05;

Table vol_jump(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("vol-jump", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"n", "1000"}, {"t_switch", "500"}, {"window", "100"}, {"m", "1"}, {"r_fraction", "0.2"},
                                 {"sigma_low", "0.01"}, {"sigma_high", "0.05"}, {"series", "squared returns"}});
    t.columns = {"end_index", "low_high_mean", "low_high_sd", "high_low_mean", "high_low_sd"};
    const auto [lh, lh_sd] = rolling_jump(VolJump{kLowSigma, kHighSigma, 500}, 1000, 100, reps, seed, row_stream(0), o.base);
    const auto [hl, hl_sd] = rolling_jump(VolJump{kHighSigma, kLowSigma, 500}, 1000, 100, reps, seed, row_stream(1), o.base);
    for (std::size_t w = 0; w < lh.size(); ++w)
        t.add_row({static_cast<std::int64_t>(w + 99), lh[w], lh_sd[w], hl[w], hl_sd[w]});
    return t;
}

Table mixture(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("mixture", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"n", "100"}, {"m", "1"}, {"r_fraction", "0.2"}, {"sigma1", "0.01"}, {"sigma2", "0.05"},
                                 {"series", "squared returns"},
                                 {"dynamic", "high-to-low jump at 500, window of 100 holding a fraction w1 of low-volatility draws"}});
    t.columns = {"w1", "mixed_mean", "mixed_sd", "dynamic_mean", "dynamic_sd"};
    const auto [dyn, dyn_sd] = rolling_jump(VolJump{kHighSigma, kLowSigma, 500}, 1000, 100, reps, seed, row_stream(0), o.base);
    for (int k = 0; k <= 100; ++k) {
        const double w1 = k / 100.0;
        const auto s = apen_replicates(MixtureNormal{w1, kLowSigma, kHighSigma}, 100, 1, kRFraction, PathTransform::Square,
                                       reps, seed, row_stream(static_cast<std::size_t>(k) + 1), o.base);
        // window ending at 499 + k holds k low-volatility draws
        const std::size_t w = 400 + static_cast<std::size_t>(k);
        t.add_row({w1, s.mean, s.sd, dyn[w], dyn_sd[w]});
    }
    return t;
}

Table markov_switch(std::uint64_t seed, const SuiteOptions& o)
{
    const int reps = reps_or(o, kPaths);
    Table t = base_table("markov-switch", seed, reps, o);
    t.meta.insert(t.meta.end(), {{"n", "400"}, {"m", "1"}, {"r_fraction", "0.2"}, {"sigma1", "0.1"}, {"sigma2", "0.5"},
                                 {"series", "squared returns"}});
    t.columns = {"p", "q", "apen_mean", "apen_sd"};
    std::size_t row = 0;
    for (int i = 1; i <= 9; ++i) {
        for (int j = 1; j <= 9; ++j) {
            MarkovSwitch ms{i / 10.0, j / 10.0, 0.1, 0.5};
            const auto s = apen_replicates(ms, 400, 1, kRFraction, PathTransform::Square, reps, seed, row_stream(row++), o.base);
            t.add_row({ms.p, ms.q, s.mean, s.sd});
        }
    }
    return t;
}

}  // namespace

std::vector<std::string> suite_names()
{
    return {"coin-entropy", "estimator-bias", "apen-ar1", "apen-iid", "garch-apen", "vol-jump", "mixture", "markov-switch"};
}

Table figure_suite(const std::string& name, std::uint64_t seed, const SuiteOptions& opts)
{
    if (name == "coin-entropy") return coin_entropy(seed, opts);
    if (name == "estimator-bias") return estimator_bias(seed, opts);
    if (name == "apen-ar1") return apen_ar1(seed, opts);
    if (name == "apen-iid") return apen_iid(seed, opts);
    if (name == "garch-apen") return garch_apen(seed, opts);
    if (name == "vol-jump") return vol_jump(seed, opts);
    if (name == "mixture") return mixture(seed, opts);
    if (name == "markov-switch") return markov_switch(seed, opts);
    throw DomainError("figure_suite: unknown suite '" + name + "'");
}

}  // namespace entropyts
