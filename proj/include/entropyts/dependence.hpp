#pragma once

#include <cstdint>

#include "entropyts/core_entropy.hpp"

namespace entropyts {

/**
 * Lagged mutual information I(X;Y)_tau from pairs (x[t - lag], y[t]) over the
 * overlapping range. Positive lag means X leads. Marginal and joint entropies
 * are all computed on the same set of pairs.
 */
EntropyEstimate mutual_information(const SymbolSeries& x, const SymbolSeries& y, int lag = 0,
                                   Estimator estimator = Estimator::Naive);

/// MI of (shuffled x, y) over n_shuffles permutations; replicate k draws
/// its permutation from stream (seed, k).
SurrogateStats mi_noise_floor(const SymbolSeries& x, const SymbolSeries& y, int lag, int n_shuffles,
                              std::uint64_t seed, Estimator estimator = Estimator::Naive);

/// Transfer entropy T_{Y->X} with target history m and source history l.
double transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int m, int l,
                        Estimator estimator = Estimator::Grassberger);

struct TeResult {
    double te_bits = 0.0;
    Estimator estimator = Estimator::Grassberger;
    double shuffle_mean = 0.0;
    double shuffle_stderr = 0.0;  ///< sample sd over shuffled replicates
    double effective_te_bits = 0.0;
    double conditional_entropy_bits = 0.0;  ///< H(X_0 | m-history), REA denominator
    double rea_fraction = 0.0;  ///< 0 when the denominator is not positive
    int m = 1;
    int l = 1;
    int n_shuffles = 0;
    std::uint64_t seed = 0;
};

constexpr int kDefaultShuffles = 100;

/// Effective TE: source y is shuffled per replicate; ET = T - mean(T_shuffled).
TeResult effective_transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int m, int l,
                                    int n_shuffles = kDefaultShuffles, std::uint64_t seed = 0,
                                    Estimator estimator = Estimator::Grassberger);

}  // namespace entropyts
