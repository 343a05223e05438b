#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace entropyts {

/// Logarithm used inside Phi. Natural is the default (see README).
enum class LogBase { Natural, Two };

struct ApEnParams {
    int m = 1;
    double r = 0.0;     ///< absolute tolerance
    std::size_t n = 0;  ///< series or window length
};

/// How r was chosen: absolute, or fraction x sample sd (1/(n-1)).
struct Tolerance {
    enum class Kind { Absolute, FractionOfSd };
    Kind kind = Kind::FractionOfSd;
    double value = 0.2;

    static Tolerance absolute(double r) { return {Kind::Absolute, r}; }
    static Tolerance fraction_of_sd(double f) { return {Kind::FractionOfSd, f}; }
};

struct ApEnResult {
    double value = 0.0;
    ApEnParams params;
    Tolerance r_source = Tolerance::absolute(0.0);
    LogBase base = LogBase::Natural;
    std::optional<double> bootstrap_mean;
    std::optional<double> bootstrap_stderr;
};

/// ApEn(m, r, N) = Phi^m - Phi^{m+1}, Chebyshev distance, self-matches counted.
ApEnResult apen(std::span<const double> u, int m, double r, LogBase base = LogBase::Natural);

/// r resolved against the series itself.
ApEnResult apen(std::span<const double> u, int m, const Tolerance& tol, LogBase base = LogBase::Natural);

/// Reference O(N^2) kernel, no fast path. Exposed for cross-checks.
double apen_direct(std::span<const double> u, int m, double r, LogBase base = LogBase::Natural);

/// One result per window end index window-1, ..., length-1; r per window is
/// r_fraction times that window's sample sd.
std::vector<ApEnResult> apen_rolling(std::span<const double> series, std::size_t window, int m, double r_fraction,
                                     LogBase base = LogBase::Natural);

/// iid limit -int f(y) log(int_{y-r}^{y+r} f(z) dz) dy over [lo, hi].
double apen_iid_analytic(const std::function<double(double)>& density, double r, double lo, double hi,
                         LogBase base = LogBase::Natural);

struct BootstrapSummary {
    double mean = 0.0;
    double sd = 0.0;  ///< sd of bootstrap replicates, the bootstrap standard error
};

/// Moving-block bootstrap: blocks of block_len with uniform start, concatenated and truncated to the series length.
BootstrapSummary apen_block_bootstrap(std::span<const double> series, int m, const Tolerance& tol, std::size_t block_len,
                                      int n_boot, std::uint64_t seed, LogBase base = LogBase::Natural);

}  // namespace entropyts
