#include "entropyts/stats.hpp"

#include <algorithm>
#include <cmath>

#include "entropyts/error.hpp"

namespace entropyts {

double mean(std::span<const double> x)
{
    if (x.empty()) throw DomainError("mean of empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x)
{
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw DomainError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level outside [0,1]");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> x, double p)
{
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, p);
}

double correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("correlation: need equal lengths >= 2");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Summary summarize(std::span<const double> replicates)
{
    Summary s;
    s.mean = mean(replicates);
    s.sd = sample_sd(replicates);
    s.q99 = quantile(replicates, 0.99);
    return s;
}

}  // namespace entropyts
