#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entropyts/error.hpp"

namespace entropyts {

enum class Estimator { Naive, Grassberger };

const char* to_string(Estimator e);

/// Finite-alphabet sequence with symbols in [0, alphabet_size).
class SymbolSeries {
public:
    SymbolSeries() = default;
    SymbolSeries(std::vector<int> symbols, int alphabet_size, std::string provenance = {});

    std::size_t size() const { return symbols_.size(); }
    int alphabet_size() const { return alphabet_size_; }
    const std::string& provenance() const { return provenance_; }
    std::span<const int> symbols() const { return symbols_; }
    int operator[](std::size_t i) const { return symbols_[i]; }

private:
    std::vector<int> symbols_;
    int alphabet_size_ = 0;
    std::string provenance_;
};

/**
 * Counts of packed symbol-tuple keys. Stored as (key, count) pairs sorted by
 * key, so every sum over the histogram runs in a fixed order. Zero-count
 * bins are never stored.
 */
class Histogram {
public:
    using Key = std::uint64_t;
    using Bin = std::pair<Key, std::uint64_t>;

    Histogram() = default;
    Histogram(std::initializer_list<Bin> bins);

    /// Sorts codes in place and counts runs.
    static Histogram from_codes(std::vector<Key> codes);

    std::uint64_t total() const { return total_; }
    std::size_t distinct() const { return bins_.size(); }
    bool empty() const { return total_ == 0; }
    std::uint64_t count(Key k) const;
    const std::vector<Bin>& bins() const { return bins_; }

private:
    std::vector<Bin> bins_;
    std::uint64_t total_ = 0;
};

struct SurrogateStats {
    double mean = 0.0;
    double sd = 0.0;  ///< sample sd of the surrogate replicates (reported as the stderr)
    double q99 = 0.0;
};

struct EntropyEstimate {
    double bits = 0.0;
    Estimator estimator = Estimator::Naive;
    std::optional<SurrogateStats> surrogate;
};

EntropyEstimate naive_entropy(const Histogram& h);
EntropyEstimate grassberger_entropy(const Histogram& h);
EntropyEstimate estimate_entropy(const Histogram& h, Estimator e);

/// Shannon entropy of a probability vector, bits.
double shannon_entropy(std::span<const double> p);

/// -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

/// Key of a block under big-endian mixed radix: (0,1) -> 1, (1,0) -> M.
/// Throws DomainError when M^len does not fit in 64 bits.
Histogram::Key encode_block(std::span<const int> block, int alphabet_size);
std::vector<int> decode_block(Histogram::Key key, int alphabet_size, int block_len);

/// Throws DomainError if radix^len overflows a 64-bit key.
void check_key_capacity(double log2_capacity);

Histogram block_histogram(const SymbolSeries& s, int block_len);

/// H(blocks of m+1) - H(blocks of m).
double conditional_block_entropy(const SymbolSeries& s, int m, Estimator e = Estimator::Naive);

double renyi_entropy(std::span<const double> p, double q);

// ---------------------------------------------------------------------------
// Markov chains. Row-stochastic: p(i, j) = P(next = j | current = i).

namespace detail {
template <typename Scalar>
Scalar stochastic_tol()
{
    return std::max<Scalar>(Scalar(1e-12), Scalar(100) * std::numeric_limits<Scalar>::epsilon());
}
}  // namespace detail

template <typename Derived>
void validate_transition(const Eigen::MatrixBase<Derived>& p)
{
    using Scalar = typename Derived::Scalar;
    if (p.rows() == 0 || p.rows() != p.cols()) throw DomainError("transition matrix must be square and non-empty");
    const Scalar tol = detail::stochastic_tol<Scalar>();
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Scalar sum(0);
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const Scalar v = p(i, j);
            if (!(v >= Scalar(0) && v <= Scalar(1))) throw DomainError("transition entries must lie in [0,1]");
            sum += v;
        }
        if (std::abs(sum - Scalar(1)) > tol) throw DomainError("transition rows must sum to 1");
    }
}

/**
 * Stationary row vector pi = pi P by repeated squaring.
 *
 * The lazy chain (P + I)/2 is squared instead of P. It shares the stationary
 * distribution and is aperiodic whenever P is irreducible, so periodic chains
 * such as [[0,1],[1,0]] converge too.
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> stationary_distribution(const Eigen::MatrixBase<Derived>& p)
{
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    validate_transition(p);
    const Eigen::Index n = p.rows();
    Mat q = (p.derived().template cast<Scalar>() + Mat::Identity(n, n)) / Scalar(2);
    const Scalar tol = detail::stochastic_tol<Scalar>();
    constexpr int kMaxSquarings = 64;
    for (int k = 0; k < kMaxSquarings; ++k) {
        Mat next = q * q;
        for (Eigen::Index i = 0; i < n; ++i) next.row(i) /= next.row(i).sum();
        q.swap(next);
        const Scalar spread = (q.colwise().maxCoeff() - q.colwise().minCoeff()).maxCoeff();
        if (spread <= tol) {
            Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pi = q.colwise().mean().transpose();
            pi = pi.cwiseMax(Scalar(0));
            return pi / pi.sum();
        }
    }
    throw ReducibleChainError("stationary_distribution: rows did not converge; chain is reducible");
}

template <typename Derived>
typename Derived::Scalar markov_entropy_rate(const Eigen::MatrixBase<Derived>& p)
{
    using Scalar = typename Derived::Scalar;
    const auto pi = stationary_distribution(p);
    Scalar h(0);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Scalar row(0);
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const Scalar v = p(i, j);
            if (v > Scalar(0)) row -= v * std::log2(v);
        }
        h += pi(i) * row;
    }
    return h;
}

template <typename Derived>
typename Derived::Scalar expected_state_duration(const Eigen::MatrixBase<Derived>& p, Eigen::Index i)
{
    using Scalar = typename Derived::Scalar;
    validate_transition(p);
    if (i < 0 || i >= p.rows()) throw DomainError("expected_state_duration: state index out of range");
    const Scalar a = p(i, i);
    if (a >= Scalar(1)) throw DomainError("expected_state_duration: absorbing state has infinite duration");
    return Scalar(1) / (Scalar(1) - a);
}

}  // namespace entropyts
