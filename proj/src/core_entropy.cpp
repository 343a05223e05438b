#include "entropyts/core_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entropyts/special.hpp"

namespace entropyts {

const char* to_string(Estimator e)
{
    return e == Estimator::Naive ? "naive" : "grassberger";
}

SymbolSeries::SymbolSeries(std::vector<int> symbols, int alphabet_size, std::string provenance)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size), provenance_(std::move(provenance))
{
    if (alphabet_size_ < 2) throw DomainError("SymbolSeries: alphabet size must be at least 2");
    if (symbols_.size() < 2) throw DomainError("SymbolSeries: length must be at least 2");
    for (int s : symbols_) {
        if (s < 0 || s >= alphabet_size_) throw DomainError("SymbolSeries: symbol outside alphabet");
    }
}

Histogram::Histogram(std::initializer_list<Bin> bins)
{
    std::vector<Bin> v(bins.begin(), bins.end());
    std::sort(v.begin(), v.end());
    for (const auto& [k, c] : v) {
        if (c == 0) continue;
        if (!bins_.empty() && bins_.back().first == k) {
            bins_.back().second += c;
        } else {
            bins_.emplace_back(k, c);
        }
        total_ += c;
    }
}

Histogram Histogram::from_codes(std::vector<Key> codes)
{
    Histogram h;
    std::sort(codes.begin(), codes.end());
    for (std::size_t i = 0; i < codes.size();) {
        std::size_t j = i + 1;
        while (j < codes.size() && codes[j] == codes[i]) ++j;
        h.bins_.emplace_back(codes[i], static_cast<std::uint64_t>(j - i));
        i = j;
    }
    h.total_ = codes.size();
    return h;
}

std::uint64_t Histogram::count(Key k) const
{
    auto it = std::lower_bound(bins_.begin(), bins_.end(), Bin{k, 0});
    return (it != bins_.end() && it->first == k) ? it->second : 0;
}

EntropyEstimate naive_entropy(const Histogram& h)
{
    if (h.empty()) throw DomainError("naive_entropy: empty histogram");
    const double n = static_cast<double>(h.total());
    double acc = 0.0;
    for (const auto& [key, c] : h.bins()) {
        const double p = static_cast<double>(c) / n;
        acc -= p * std::log2(p);
    }
    return {std::max(acc, 0.0), Estimator::Naive, std::nullopt};
}

EntropyEstimate grassberger_entropy(const Histogram& h)
{
    if (h.empty()) throw DomainError("grassberger_entropy: empty histogram");
    const double n = static_cast<double>(h.total());
    double acc = 0.0;
    for (const auto& [key, c] : h.bins()) {
        const double ni = static_cast<double>(c);
        acc += ni * digamma(ni);
    }
    const double nats = std::log(n) - acc / n;
    return {nats / std::log(2.0), Estimator::Grassberger, std::nullopt};
}

EntropyEstimate estimate_entropy(const Histogram& h, Estimator e)
{
    return e == Estimator::Naive ? naive_entropy(h) : grassberger_entropy(h);
}

double shannon_entropy(std::span<const double> p)
{
    double acc = 0.0, total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw DomainError("shannon_entropy: negative probability");
        total += v;
        if (v > 0.0) acc -= v * std::log2(v);
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("shannon_entropy: probabilities must sum to 1");
    return acc;
}

double binary_entropy(double p)
{
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p outside [0,1]");
    const double v[2] = {p, 1.0 - p};
    return shannon_entropy(v);
}

void check_key_capacity(double log2_capacity)
{
    if (log2_capacity >= 63.999) throw DomainError("block key space exceeds 64 bits; reduce block length or alphabet");
}

Histogram::Key encode_block(std::span<const int> block, int alphabet_size)
{
    check_key_capacity(static_cast<double>(block.size()) * std::log2(static_cast<double>(alphabet_size)));
    Histogram::Key key = 0;
    for (int s : block) key = key * static_cast<Histogram::Key>(alphabet_size) + static_cast<Histogram::Key>(s);
    return key;
}

std::vector<int> decode_block(Histogram::Key key, int alphabet_size, int block_len)
{
    std::vector<int> out(static_cast<std::size_t>(block_len));
    for (int k = block_len - 1; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = static_cast<int>(key % static_cast<Histogram::Key>(alphabet_size));
        key /= static_cast<Histogram::Key>(alphabet_size);
    }
    return out;
}

Histogram block_histogram(const SymbolSeries& s, int block_len)
{
    if (block_len < 1) throw DomainError("block_histogram: block length must be positive");
    if (static_cast<std::size_t>(block_len) > s.size()) throw DomainError("block_histogram: block length exceeds series length");
    const auto sym = s.symbols();
    const std::size_t n = s.size() - static_cast<std::size_t>(block_len) + 1;
    // validates capacity once
    encode_block(sym.subspan(0, static_cast<std::size_t>(block_len)), s.alphabet_size());
    std::vector<Histogram::Key> codes(n);
    const auto radix = static_cast<Histogram::Key>(s.alphabet_size());
    for (std::size_t t = 0; t < n; ++t) {
        Histogram::Key key = 0;
        for (int k = 0; k < block_len; ++k) key = key * radix + static_cast<Histogram::Key>(sym[t + static_cast<std::size_t>(k)]);
        codes[t] = key;
    }
    return Histogram::from_codes(std::move(codes));
}

double conditional_block_entropy(const SymbolSeries& s, int m, Estimator e)
{
    if (m < 1) throw DomainError("conditional_block_entropy: m must be positive");
    if (static_cast<std::size_t>(m) + 1 > s.size()) throw DomainError("conditional_block_entropy: series shorter than m+1");
    return estimate_entropy(block_histogram(s, m + 1), e).bits - estimate_entropy(block_histogram(s, m), e).bits;
}

double renyi_entropy(std::span<const double> p, double q)
{
    if (!(q > 0.0)) throw DomainError("renyi_entropy: q must be positive");
    if (q == 1.0) throw DomainError("renyi_entropy: q = 1 is the Shannon entropy");
    double sum = 0.0, total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw DomainError("renyi_entropy: negative probability");
        total += v;
        if (v > 0.0) sum += std::pow(v, q);
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("renyi_entropy: probabilities must sum to 1");
    return std::log2(sum) / (1.0 - q);
}

}  // namespace entropyts
