#include "entropyts/apen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entropyts/error.hpp"
#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

namespace {

constexpr std::size_t kFastPathMin = 4096;

double log_in(double x, LogBase base)
{
    return base == LogBase::Natural ? std::log(x) : std::log2(x);
}

double phi(const std::vector<std::uint64_t>& counts, LogBase base)
{
    const double n = static_cast<double>(counts.size());
    double acc = 0.0;
    for (auto c : counts) acc += log_in(static_cast<double>(c) / n, base);
    return acc / n;
}

void check_apen_args(std::span<const double> u, int m)
{
    if (m < 0) throw DomainError("apen: m must be non-negative");
    if (u.size() < static_cast<std::size_t>(m) + 2) throw DomainError("apen: series shorter than m+2");
}

double direct_kernel(std::span<const double> u, int m, double r, LogBase base)
{
    const std::size_t n = u.size();
    const auto mm = static_cast<std::size_t>(m);
    const std::size_t nm = n - mm + 1;
    const std::size_t nm1 = n - mm;
    std::vector<std::uint64_t> cm(nm, 1), cm1(nm1, 1);
    for (std::size_t i = 0; i < nm; ++i) {
        for (std::size_t j = i + 1; j < nm; ++j) {
            bool close = true;
            for (std::size_t k = 0; k < mm; ++k) {
                if (std::abs(u[i + k] - u[j + k]) > r) {
                    close = false;
                    break;
                }
            }
            if (!close) continue;
            ++cm[i];
            ++cm[j];
            if (j < nm1 && std::abs(u[i + mm] - u[j + mm]) <= r) {
                ++cm1[i];
                ++cm1[j];
            }
        }
    }
    const double phi_m = m == 0 ? 0.0 : phi(cm, base);
    return phi_m - phi(cm1, base);
}

// Counts for m <= 1 by sorting (1-D) and an offline Fenwick sweep (2-D).
std::vector<std::uint64_t> counts_1d(std::span<const double> x, double r)
{
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    std::vector<std::uint64_t> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto lo = std::lower_bound(s.begin(), s.end(), x[i] - r);
        auto hi = std::upper_bound(s.begin(), s.end(), x[i] + r);
        c[i] = static_cast<std::uint64_t>(hi - lo);
    }
    return c;
}

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : t_(n + 1, 0) {}
    void add(std::size_t i)
    {
        for (++i; i < t_.size(); i += i & (~i + 1)) ++t_[i];
    }
    std::int64_t prefix(std::size_t n) const  ///< sum of first n
    {
        std::int64_t s = 0;
        for (; n > 0; n -= n & (~n + 1)) s += t_[n];
        return s;
    }

private:
    std::vector<std::int64_t> t_;
};

std::vector<std::uint64_t> counts_2d(std::span<const double> x, std::span<const double> y, double r)
{
    const std::size_t n = x.size();
    std::vector<double> ys(y.begin(), y.end());
    std::sort(ys.begin(), ys.end());
    std::vector<std::size_t> ylo(n), yhi(n), yrank(n);
    for (std::size_t i = 0; i < n; ++i) {
        ylo[i] = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y[i] - r) - ys.begin());
        yhi[i] = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), y[i] + r) - ys.begin());
        yrank[i] = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y[i]) - ys.begin());
    }
    std::vector<std::size_t> by_x(n);
    std::iota(by_x.begin(), by_x.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<std::int64_t> total(n, 0);
    // sign +1: points with x <= x_i + r; sign -1: points with x < x_i - r
    for (int pass = 0; pass < 2; ++pass) {
        const bool upper = pass == 0;
        std::vector<std::size_t> q(n);
        std::iota(q.begin(), q.end(), 0);
        auto key = [&](std::size_t i) { return upper ? x[i] + r : x[i] - r; };
        std::sort(q.begin(), q.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        Fenwick fw(n);
        std::size_t p = 0;
        for (std::size_t qi : q) {
            const double lim = key(qi);
            while (p < n && (upper ? x[by_x[p]] <= lim : x[by_x[p]] < lim)) fw.add(yrank[by_x[p++]]);
            const std::int64_t c = fw.prefix(yhi[qi]) - fw.prefix(ylo[qi]);
            total[qi] += upper ? c : -c;
        }
    }
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint64_t>(total[i]);
    return out;
}

double fast_kernel(std::span<const double> u, int m, double r, LogBase base)
{
    const std::size_t n = u.size();
    if (m == 0) return -phi(counts_1d(u, r), base);
    const auto c1 = counts_1d(u, r);
    const auto c2 = counts_2d(u.subspan(0, n - 1), u.subspan(1, n - 1), r);
    return phi(c1, base) - phi(c2, base);
}

double kernel(std::span<const double> u, int m, double r, LogBase base)
{
    if (m <= 1 && u.size() >= kFastPathMin) return fast_kernel(u, m, r, base);
    return direct_kernel(u, m, r, base);
}

double resolve_r(std::span<const double> u, const Tolerance& tol)
{
    if (!(tol.value > 0.0)) throw DomainError("apen: tolerance must be positive");
    return tol.kind == Tolerance::Kind::Absolute ? tol.value : tol.value * sample_sd(u);
}

}  // namespace

double apen_direct(std::span<const double> u, int m, double r, LogBase base)
{
    check_apen_args(u, m);
    if (!(r > 0.0)) throw DomainError("apen: r must be positive");
    return direct_kernel(u, m, r, base);
}

ApEnResult apen(std::span<const double> u, int m, double r, LogBase base)
{
    check_apen_args(u, m);
    if (!(r > 0.0)) throw DomainError("apen: r must be positive");
    ApEnResult out;
    out.value = kernel(u, m, r, base);
    out.params = {m, r, u.size()};
    out.r_source = Tolerance::absolute(r);
    out.base = base;
    return out;
}

ApEnResult apen(std::span<const double> u, int m, const Tolerance& tol, LogBase base)
{
    check_apen_args(u, m);
    const double r = resolve_r(u, tol);
    ApEnResult out;
    // r = 0 only for a constant series, where every block matches and ApEn is 0
    out.value = r > 0.0 ? kernel(u, m, r, base) : 0.0;
    out.params = {m, r, u.size()};
    out.r_source = tol;
    out.base = base;
    return out;
}

std::vector<ApEnResult> apen_rolling(std::span<const double> series, std::size_t window, int m, double r_fraction,
                                     LogBase base)
{
    if (window > series.size()) throw DomainError("apen_rolling: window longer than series");
    if (!(r_fraction > 0.0)) throw DomainError("apen_rolling: r_fraction must be positive");
    check_apen_args(series.subspan(0, window), m);
    const std::size_t count = series.size() - window + 1;
    std::vector<ApEnResult> out(count);
    const Tolerance tol = Tolerance::fraction_of_sd(r_fraction);
    parallel_for(count, [&](std::size_t k) { out[k] = apen(series.subspan(k, window), m, tol, base); });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <typename F>
double simpson(const F& f, double a, double b, double tol)
{
    if (!(b > a)) return 0.0;
    // a fixed pre-split keeps narrow features from being skipped
    constexpr int kPieces = 16;
    const double h = (b - a) / kPieces;
    double acc = 0.0;
    for (int k = 0; k < kPieces; ++k) {
        const double x0 = a + k * h;
        const double x1 = k + 1 == kPieces ? b : x0 + h;
        const double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
        acc += simpson_rec(f, x0, x1, f0, fm, f1, (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1), tol / kPieces, 40);
    }
    return acc;
}

}  // namespace

double apen_iid_analytic(const std::function<double(double)>& density, double r, double lo, double hi, LogBase base)
{
    if (!(hi > lo)) throw DomainError("apen_iid_analytic: empty support");
    if (!(r > 0.0)) throw DomainError("apen_iid_analytic: r must be positive");
    const double mass = simpson(density, lo, hi, 1e-10);
    if (std::abs(mass - 1.0) > 1e-6) throw DomainError("apen_iid_analytic: density does not integrate to 1 over the support");

    auto inner = [&](double y) { return simpson(density, std::max(lo, y - r), std::min(hi, y + r), 1e-11); };
    auto integrand = [&](double y) {
        const double fy = density(y);
        if (fy <= 0.0) return 0.0;
        const double c = inner(y);
        return c > 0.0 ? -fy * log_in(std::min(c, 1.0), base) : 0.0;
    };
    std::vector<double> cuts{lo, hi};
    for (double c : {lo + r, hi - r}) if (c > lo && c < hi) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += simpson(integrand, cuts[k], cuts[k + 1], 1e-8);
    return total;
}

BootstrapSummary apen_block_bootstrap(std::span<const double> series, int m, const Tolerance& tol, std::size_t block_len,
                                      int n_boot, std::uint64_t seed, LogBase base)
{
    if (block_len < 2) throw DomainError("apen_block_bootstrap: block length must be at least 2");
    if (block_len > series.size()) throw DomainError("apen_block_bootstrap: block length exceeds series length");
    if (n_boot < 2) throw DomainError("apen_block_bootstrap: n_boot must be at least 2");
    check_apen_args(series, m);
    const std::size_t n = series.size();
    const std::size_t starts = n - block_len + 1;
    std::vector<double> reps(static_cast<std::size_t>(n_boot));
    parallel_for(reps.size(), [&](std::size_t b) {
        Rng rng(seed, b);
        std::vector<double> sample;
        sample.reserve(n + block_len);
        while (sample.size() < n) {
            const std::size_t s = rng.below(starts);
            sample.insert(sample.end(), series.begin() + static_cast<std::ptrdiff_t>(s),
                          series.begin() + static_cast<std::ptrdiff_t>(s + block_len));
        }
        sample.resize(n);
        reps[b] = apen(sample, m, tol, base).value;
    });
    return {mean(reps), sample_sd(reps)};
}

}  // namespace entropyts
