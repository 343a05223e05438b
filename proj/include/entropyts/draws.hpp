#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entropyts/core_entropy.hpp"

namespace entropyts {

/// Flat marks a zero return, which forms its own zero-magnitude draw.
enum class DrawSign { Down, Up, Flat };

struct Draw {
    DrawSign sign = DrawSign::Flat;
    double magnitude = 0.0;  ///< sum of constituent returns
    int length = 0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;  ///< inclusive
};

/// Maximal runs of same-sign returns; every index belongs to exactly one draw.
std::vector<Draw> detect_draws(std::span<const double> returns);

struct DrawStatistics {
    std::size_t n_down = 0, n_up = 0;
    double mean_down = 0.0, mean_up = 0.0;  ///< E[D], E[U]
    double sd_down = 0.0, sd_up = 0.0;
    double mean_len_down = 0.0, mean_len_up = 0.0;  ///< E[l_d], E[l_u]
    double sd_len_down = 0.0, sd_len_up = 0.0;
    double mean_drop = 0.0, mean_rise = 0.0;  ///< per-period E[d], E[u]
    Draw max_drawdown, max_drawup;
};

DrawStatistics draw_statistics(std::span<const Draw> draws);

/// Length statistics of the draws beyond the q-quantile of their own sign
/// (D < q(D, q) for drawdowns, U > q(U, 1-q) for drawups).
struct ConditionalLength {
    double threshold = 0.0;
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
};
ConditionalLength conditional_draw_length(std::span<const Draw> draws, DrawSign sign, double q);

/// P(l = n) = p_u (1 - p_u)^(n-1).
double run_length_pmf(double p_u, int n);

/// Expected number of same-sign runs in n Bernoulli(p_u) signs.
double expected_runs(double p_u, double n);

// ---------------------------------------------------------------------------
// Stretched exponential f(D) = z / (chi Gamma(1/z)) exp(-(D/chi)^z).

enum class StderrMethod { None, Jackknife, Bootstrap };

struct FitOptions {
    StderrMethod stderr_method = StderrMethod::Jackknife;
    int n_boot = 200;
    std::uint64_t seed = 0;
};

struct DrawFit {
    double chi = 0.0;
    double z = 0.0;
    double chi_stderr = 0.0;
    double z_stderr = 0.0;
    std::size_t n_draws = 0;
    double loglik = 0.0;
    double d0 = 0.0;  ///< normalization z / (chi Gamma(1/z))
};

double stretched_exp_loglik(std::span<const double> magnitudes, double chi, double z);

/// Simplex MLE over (log chi, log z), 3 starts.
DrawFit fit_stretched_exponential(std::span<const double> magnitudes, const FitOptions& opts = {});

// ---------------------------------------------------------------------------
// Symbolization

/// Pooled: both thresholds are quantiles of one distribution of signed draw
/// magnitudes. PerSign: lower from drawdowns only, upper from drawups only.
enum class QuantileScope { Pooled, PerSign };

struct DrawThresholds {
    double lower = 0.0;  ///< drawdowns with magnitude below map to 0
    double upper = 0.0;  ///< drawups with magnitude above map to 2
};

DrawThresholds draw_thresholds(std::span<const Draw> draws, double q1, QuantileScope scope = QuantileScope::Pooled);

SymbolSeries discretize_by_draw(std::span<const double> returns, const DrawThresholds& thresholds);
SymbolSeries discretize_by_draw(std::span<const double> returns, double q1,
                                QuantileScope scope = QuantileScope::Pooled);

/// 0 below the lo-quantile of returns, 2 above the hi-quantile, else 1.
SymbolSeries discretize_by_return(std::span<const double> returns, double lo, double hi);

}  // namespace entropyts
