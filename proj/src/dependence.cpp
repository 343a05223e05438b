#include "entropyts/dependence.hpp"

#include <cmath>
#include <vector>

#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

namespace {

using Key = Histogram::Key;

double entropy_of(std::vector<Key> codes, Estimator e)
{
    return estimate_entropy(Histogram::from_codes(std::move(codes)), e).bits;
}

void check_pair(const SymbolSeries& x, const SymbolSeries& y)
{
    if (x.size() != y.size()) throw DomainError("series lengths differ");
}

double mi_impl(std::span<const int> x, std::span<const int> y, int my, int lag, Estimator e)
{
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, lag);
    const std::ptrdiff_t t1 = n + std::min<std::ptrdiff_t>(0, lag);
    const auto count = static_cast<std::size_t>(t1 - t0);
    std::vector<Key> cx(count), cy(count), cxy(count);
    for (std::ptrdiff_t t = t0; t < t1; ++t) {
        const auto i = static_cast<std::size_t>(t - t0);
        const auto a = static_cast<Key>(x[static_cast<std::size_t>(t - lag)]);
        const auto b = static_cast<Key>(y[static_cast<std::size_t>(t)]);
        cx[i] = a;
        cy[i] = b;
        cxy[i] = a * static_cast<Key>(my) + b;
    }
    return entropy_of(std::move(cx), e) + entropy_of(std::move(cy), e) - entropy_of(std::move(cxy), e);
}

double te_impl(std::span<const int> x, int mx, std::span<const int> y, int my, int m, int l, Estimator e)
{
    const std::size_t n = x.size();
    const std::size_t lookback = static_cast<std::size_t>(std::max(m, l));
    const std::size_t count = n - lookback;
    const auto rx = static_cast<Key>(mx);
    const auto ry = static_cast<Key>(my);
    Key ry_pow = 1;
    for (int k = 0; k < l; ++k) ry_pow *= ry;

    std::vector<Key> c1(count), c2(count), c3(count), c4(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t t = i + lookback;
        Key xh = 0, yh = 0;
        for (int k = 1; k <= m; ++k) xh = xh * rx + static_cast<Key>(x[t - static_cast<std::size_t>(k)]);
        for (int k = 1; k <= l; ++k) yh = yh * ry + static_cast<Key>(y[t - static_cast<std::size_t>(k)]);
        const auto xt = static_cast<Key>(x[t]);
        const Key joint_hist = xh * ry_pow + yh;
        c1[i] = xh * rx + xt;
        c2[i] = xh;
        c3[i] = joint_hist * rx + xt;
        c4[i] = joint_hist;
    }
    const double h1 = entropy_of(std::move(c1), e);
    const double h2 = entropy_of(std::move(c2), e);
    const double h3 = entropy_of(std::move(c3), e);
    const double h4 = entropy_of(std::move(c4), e);
    return (h1 - h2) - (h3 - h4);
}

void check_te(const SymbolSeries& x, const SymbolSeries& y, int m, int l)
{
    check_pair(x, y);
    if (m < 1 || l < 1) throw DomainError("transfer_entropy: m and l must be positive");
    if (static_cast<std::size_t>(std::max(m, l)) + 1 > x.size())
        throw DomainError("transfer_entropy: series too short for max(m,l)+1");
    check_key_capacity((m + 1) * std::log2(static_cast<double>(x.alphabet_size())) +
                       l * std::log2(static_cast<double>(y.alphabet_size())));
}

}  // namespace

EntropyEstimate mutual_information(const SymbolSeries& x, const SymbolSeries& y, int lag, Estimator estimator)
{
    check_pair(x, y);
    if (static_cast<std::size_t>(std::abs(lag)) + 1 >= x.size()) throw DomainError("mutual_information: |lag| too large");
    EntropyEstimate out;
    out.estimator = estimator;
    out.bits = mi_impl(x.symbols(), y.symbols(), y.alphabet_size(), lag, estimator);
    return out;
}

SurrogateStats mi_noise_floor(const SymbolSeries& x, const SymbolSeries& y, int lag, int n_shuffles,
                              std::uint64_t seed, Estimator estimator)
{
    check_pair(x, y);
    if (n_shuffles < 2) throw DomainError("mi_noise_floor: need at least 2 shuffles");
    if (static_cast<std::size_t>(std::abs(lag)) + 1 >= x.size()) throw DomainError("mi_noise_floor: |lag| too large");
    std::vector<double> reps(static_cast<std::size_t>(n_shuffles));
    parallel_for(reps.size(), [&](std::size_t k) {
        std::vector<int> xs(x.symbols().begin(), x.symbols().end());
        Rng rng(seed, k);
        rng.shuffle(std::span<int>(xs));
        reps[k] = mi_impl(xs, y.symbols(), y.alphabet_size(), lag, estimator);
    });
    const Summary s = summarize(reps);
    return {s.mean, s.sd, s.q99};
}

double transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int m, int l, Estimator estimator)
{
    check_te(x, y, m, l);
    return te_impl(x.symbols(), x.alphabet_size(), y.symbols(), y.alphabet_size(), m, l, estimator);
}

TeResult effective_transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int m, int l, int n_shuffles,
                                    std::uint64_t seed, Estimator estimator)
{
    check_te(x, y, m, l);
    if (n_shuffles < 2) throw DomainError("effective_transfer_entropy: need at least 2 shuffles");
    TeResult r;
    r.estimator = estimator;
    r.m = m;
    r.l = l;
    r.n_shuffles = n_shuffles;
    r.seed = seed;
    r.te_bits = te_impl(x.symbols(), x.alphabet_size(), y.symbols(), y.alphabet_size(), m, l, estimator);

    std::vector<double> reps(static_cast<std::size_t>(n_shuffles));
    parallel_for(reps.size(), [&](std::size_t k) {
        std::vector<int> ys(y.symbols().begin(), y.symbols().end());
        Rng rng(seed, k);
        rng.shuffle(std::span<int>(ys));
        reps[k] = te_impl(x.symbols(), x.alphabet_size(), ys, y.alphabet_size(), m, l, estimator);
    });
    r.shuffle_mean = mean(reps);
    r.shuffle_stderr = sample_sd(reps);
    r.effective_te_bits = r.te_bits - r.shuffle_mean;
    r.conditional_entropy_bits = conditional_block_entropy(x, m, estimator);
    r.rea_fraction = r.conditional_entropy_bits > 0.0 ? r.effective_te_bits / r.conditional_entropy_bits : 0.0;
    return r;
}

}  // namespace entropyts
