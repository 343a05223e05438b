#pragma once

#include <span>
#include <vector>

namespace entropyts {

double mean(std::span<const double> x);

/// Sample standard deviation, 1/(n-1) normalization; 0 for n < 2.
double sample_sd(std::span<const double> x);

/// Empirical quantile, linear interpolation between order statistics
/// at position p*(n-1) (Hyndman-Fan type 7).
double quantile(std::span<const double> x, double p);
double quantile_sorted(std::span<const double> sorted, double p);

/// Pearson correlation.
double correlation(std::span<const double> x, std::span<const double> y);

/// Mean, sample sd and 99% quantile of a replicate set.
struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double q99 = 0.0;
};
Summary summarize(std::span<const double> replicates);

}  // namespace entropyts
