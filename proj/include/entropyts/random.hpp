#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace entropyts {

/// Mixes (seed, stream) into an independent 64-bit engine seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/**
 * Random stream with platform-independent output.
 *
 * Only the raw engine output of std::mt19937_64 is standardized, so the
 * uniform, normal and permutation draws are implemented here rather than
 * through <random> distributions.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                       ///< [0, 1)
    double uniform_open();                  ///< (0, 1)
    double normal();                        ///< standard normal, Marsaglia polar
    double exponential();                   ///< unit rate
    double gamma(double shape);             ///< unit scale, Marsaglia-Tsang
    std::size_t below(std::size_t n);       ///< uniform integer in [0, n)
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace entropyts
