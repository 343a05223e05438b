#include "entropyts/draws.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/special.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

std::vector<Draw> detect_draws(std::span<const double> returns)
{
    if (returns.empty()) throw DomainError("detect_draws: empty return series");
    auto sign_of = [](double r) { return r < 0.0 ? DrawSign::Down : (r > 0.0 ? DrawSign::Up : DrawSign::Flat); };
    std::vector<Draw> out;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (!std::isfinite(returns[i])) throw DomainError("detect_draws: non-finite return at index " + std::to_string(i));
        const DrawSign s = sign_of(returns[i]);
        if (!out.empty() && s != DrawSign::Flat && out.back().sign == s) {
            Draw& d = out.back();
            d.magnitude += returns[i];
            d.length += 1;
            d.end_index = i;
        } else {
            out.push_back({s, returns[i], 1, i, i});
        }
    }
    return out;
}

DrawStatistics draw_statistics(std::span<const Draw> draws)
{
    std::vector<double> dm, um, dl, ul;
    DrawStatistics st;
    double down_periods = 0.0, up_periods = 0.0;
    for (const Draw& d : draws) {
        if (d.sign == DrawSign::Down) {
            dm.push_back(d.magnitude);
            dl.push_back(d.length);
            down_periods += d.length;
            if (dm.size() == 1 || d.magnitude < st.max_drawdown.magnitude) st.max_drawdown = d;
        } else if (d.sign == DrawSign::Up) {
            um.push_back(d.magnitude);
            ul.push_back(d.length);
            up_periods += d.length;
            if (um.size() == 1 || d.magnitude > st.max_drawup.magnitude) st.max_drawup = d;
        }
    }
    if (dm.empty() || um.empty()) throw DomainError("draw_statistics: need at least one drawdown and one drawup");
    st.n_down = dm.size();
    st.n_up = um.size();
    st.mean_down = mean(dm);
    st.mean_up = mean(um);
    st.sd_down = sample_sd(dm);
    st.sd_up = sample_sd(um);
    st.mean_len_down = mean(dl);
    st.mean_len_up = mean(ul);
    st.sd_len_down = sample_sd(dl);
    st.sd_len_up = sample_sd(ul);
    st.mean_drop = st.mean_down * static_cast<double>(dm.size()) / down_periods;
    st.mean_rise = st.mean_up * static_cast<double>(um.size()) / up_periods;
    return st;
}

ConditionalLength conditional_draw_length(std::span<const Draw> draws, DrawSign sign, double q)
{
    if (sign == DrawSign::Flat) throw DomainError("conditional_draw_length: sign must be Down or Up");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("conditional_draw_length: q outside (0,1)");
    std::vector<double> mags;
    for (const Draw& d : draws) if (d.sign == sign) mags.push_back(d.magnitude);
    if (mags.empty()) throw DomainError("conditional_draw_length: no draws of requested sign");
    ConditionalLength out;
    out.threshold = quantile(mags, sign == DrawSign::Down ? q : 1.0 - q);
    std::vector<double> lens;
    for (const Draw& d : draws) {
        if (d.sign != sign) continue;
        const bool extreme = sign == DrawSign::Down ? d.magnitude < out.threshold : d.magnitude > out.threshold;
        if (extreme) lens.push_back(d.length);
    }
    out.count = lens.size();
    if (!lens.empty()) {
        out.mean = mean(lens);
        out.sd = sample_sd(lens);
    }
    return out;
}

double run_length_pmf(double p_u, int n)
{
    if (!(p_u > 0.0 && p_u < 1.0)) throw DomainError("run_length_pmf: p_u outside (0,1)");
    if (n < 1) throw DomainError("run_length_pmf: n must be positive");
    return p_u * std::pow(1.0 - p_u, n - 1);
}

double expected_runs(double p_u, double n)
{
    if (!(p_u >= 0.0 && p_u <= 1.0)) throw DomainError("expected_runs: p_u outside [0,1]");
    if (!(n >= 1.0)) throw DomainError("expected_runs: n must be at least 1");
    const double q = 1.0 - p_u;
    return 2.0 * n * p_u * q + p_u * p_u + q * q;
}

// ---------------------------------------------------------------------------

namespace {

void check_magnitudes(std::span<const double> d)
{
    if (d.size() < 2) throw DomainError("stretched exponential fit needs at least 2 observations");
    for (double v : d) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("stretched exponential fit: magnitudes must be positive and finite");
    }
}

double loglik_from_logs(std::span<const double> logd, double chi, double z)
{
    const double n = static_cast<double>(logd.size());
    const double lchi = std::log(chi);
    double tail = 0.0;
    for (double ld : logd) tail += std::exp(z * (ld - lchi));
    return n * (std::log(z) - lchi - std::lgamma(1.0 / z)) - tail;
}

struct Simplex {
    std::array<std::array<double, 2>, 3> x;
    std::array<double, 3> f;
};

/// Minimizes fn over R^2; returns {point, value, converged}.
template <typename Fn>
std::tuple<std::array<double, 2>, double, bool> nelder_mead(Fn&& fn, std::array<double, 2> start, double step, double rel_tol)
{
    Simplex s;
    s.x[0] = start;
    s.x[1] = {start[0] + step, start[1]};
    s.x[2] = {start[0], start[1] + step};
    for (int i = 0; i < 3; ++i) s.f[i] = fn(s.x[i]);
    constexpr int kMaxIter = 5000;
    for (int it = 0; it < kMaxIter; ++it) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
        const int best = idx[0], mid = idx[1], worst = idx[2];
        const double spread = std::abs(s.f[worst] - s.f[best]);
        const double size = std::max(std::abs(s.x[worst][0] - s.x[best][0]) + std::abs(s.x[worst][1] - s.x[best][1]),
                                     std::abs(s.x[mid][0] - s.x[best][0]) + std::abs(s.x[mid][1] - s.x[best][1]));
        if (spread <= rel_tol * (std::abs(s.f[best]) + 1e-300) && size < 1e-7) return {s.x[best], s.f[best], true};

        std::array<double, 2> c{(s.x[best][0] + s.x[mid][0]) / 2.0, (s.x[best][1] + s.x[mid][1]) / 2.0};
        auto along = [&](double t) {
            return std::array<double, 2>{c[0] + t * (s.x[worst][0] - c[0]), c[1] + t * (s.x[worst][1] - c[1])};
        };
        const auto xr = along(-1.0);
        const double fr = fn(xr);
        if (fr < s.f[best]) {
            const auto xe = along(-2.0);
            const double fe = fn(xe);
            if (fe < fr) { s.x[worst] = xe; s.f[worst] = fe; }
            else { s.x[worst] = xr; s.f[worst] = fr; }
        } else if (fr < s.f[mid]) {
            s.x[worst] = xr;
            s.f[worst] = fr;
        } else {
            const bool outside = fr < s.f[worst];
            const auto xc = along(outside ? -0.5 : 0.5);
            const double fc = fn(xc);
            if (fc < (outside ? fr : s.f[worst])) {
                s.x[worst] = xc;
                s.f[worst] = fc;
            } else {
                for (int k : {mid, worst}) {
                    s.x[k] = {(s.x[k][0] + s.x[best][0]) / 2.0, (s.x[k][1] + s.x[best][1]) / 2.0};
                    s.f[k] = fn(s.x[k]);
                }
            }
        }
    }
    int b = static_cast<int>(std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
    return {s.x[b], s.f[b], false};
}

/**
 * Profile likelihood in z: for fixed z the chi-MLE is chi^z = z S(z) / n with
 * S(z) = sum D^z, giving f(z) = ln z - B/z - lnGamma(1/z) - 1/z per
 * observation, B = ln(z S / n). Newton's method on f from a nearby start.
 */
struct ProfileFit {
    double chi;
    double z;
    bool ok;
};

ProfileFit profile_newton(std::span<const double> logd, double z0)
{
    const double n = static_cast<double>(logd.size());
    double z = z0;
    // Sums are formed relative to the largest log so D^z cannot overflow.
    const double shift = *std::max_element(logd.begin(), logd.end());
    for (int it = 0; it < 60; ++it) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (double ld : logd) {
            const double e = std::exp(z * (ld - shift));
            s0 += e;
            s1 += e * ld;
            s2 += e * ld * ld;
        }
        // S = exp(z*shift) s0; S'/S = s1/s0; S''/S = s2/s0
        const double r1 = s1 / s0, r2 = s2 / s0;
        const double b = std::log(z) + z * shift + std::log(s0) - std::log(n);
        const double iz = 1.0 / z;
        const double psi = digamma(iz);
        const double grad = iz - r1 * iz + (b + psi) * iz * iz;
        const double bprime = iz + r1;
        const double hess = -iz * iz + r1 * iz * iz - (r2 - r1 * r1) * iz + (bprime - trigamma(iz) * iz * iz) * iz * iz
                            - 2.0 * (b + psi) * iz * iz * iz;
        if (!(hess < 0.0) || !std::isfinite(grad)) return {0.0, 0.0, false};
        double step = grad / hess;
        double zn = z - step;
        while (zn <= 0.0) {
            step /= 2.0;
            zn = z - step;
        }
        z = zn;
        if (std::abs(step) <= 1e-13 * z) {
            double t = 0.0;
            for (double ld : logd) t += std::exp(z * (ld - shift));
            const double lchi = (std::log(z) + std::log(t) - std::log(n)) / z + shift;
            return {std::exp(lchi), z, true};
        }
    }
    return {0.0, 0.0, false};
}

struct PointFit {
    double chi;
    double z;
    double loglik;
};

PointFit simplex_fit(std::span<const double> logd, double sample_mean)
{
    auto negll = [&](const std::array<double, 2>& th) {
        const double v = -loglik_from_logs(logd, std::exp(th[0]), std::exp(th[1]));
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    const double lm = std::log(sample_mean);
    const std::array<std::array<double, 2>, 3> starts{{{lm, 0.0}, {lm + 0.5, std::log(0.7)}, {lm - 0.5, std::log(1.4)}}};
    bool any = false;
    std::array<double, 2> best{};
    double fbest = std::numeric_limits<double>::infinity();
    for (const auto& st : starts) {
        auto [x, f, conv] = nelder_mead(negll, st, 0.2, 1e-10);
        if (conv) {
            // one restart from the converged point guards against a collapsed simplex
            auto [x2, f2, conv2] = nelder_mead(negll, x, 0.05, 1e-10);
            if (conv2 && f2 <= f) { x = x2; f = f2; }
        }
        any = any || conv;
        if (conv && f < fbest) {
            fbest = f;
            best = x;
        }
    }
    if (!any) throw FitError("fit_stretched_exponential: simplex did not converge");
    return {std::exp(best[0]), std::exp(best[1]), -fbest};
}

}  // namespace

double stretched_exp_loglik(std::span<const double> magnitudes, double chi, double z)
{
    check_magnitudes(magnitudes);
    if (!(chi > 0.0 && z > 0.0)) throw DomainError("stretched_exp_loglik: chi and z must be positive");
    std::vector<double> logd(magnitudes.size());
    std::transform(magnitudes.begin(), magnitudes.end(), logd.begin(), [](double v) { return std::log(v); });
    return loglik_from_logs(logd, chi, z);
}

DrawFit fit_stretched_exponential(std::span<const double> magnitudes, const FitOptions& opts)
{
    check_magnitudes(magnitudes);
    std::vector<double> logd(magnitudes.size());
    std::transform(magnitudes.begin(), magnitudes.end(), logd.begin(), [](double v) { return std::log(v); });
    const PointFit pf = simplex_fit(logd, mean(magnitudes));

    DrawFit fit;
    fit.chi = pf.chi;
    fit.z = pf.z;
    fit.loglik = pf.loglik;
    fit.n_draws = magnitudes.size();
    fit.d0 = pf.z / (pf.chi * std::tgamma(1.0 / pf.z));

    const std::size_t n = logd.size();
    auto refit = [&](std::span<const double> sample) {
        ProfileFit r = profile_newton(sample, pf.z);
        if (r.ok) return std::pair{r.chi, r.z};
        double m = 0.0;
        for (double ld : sample) m += std::exp(ld);
        const PointFit p = simplex_fit(sample, m / static_cast<double>(sample.size()));
        return std::pair{p.chi, p.z};
    };

    if (opts.stderr_method == StderrMethod::Jackknife) {
        std::vector<double> chis(n), zs(n);
        parallel_for(n, [&](std::size_t i) {
            std::vector<double> loo;
            loo.reserve(n - 1);
            loo.insert(loo.end(), logd.begin(), logd.begin() + static_cast<std::ptrdiff_t>(i));
            loo.insert(loo.end(), logd.begin() + static_cast<std::ptrdiff_t>(i) + 1, logd.end());
            std::tie(chis[i], zs[i]) = refit(loo);
        });
        auto jk = [&](const std::vector<double>& v) {
            const double m = mean(v);
            double ss = 0.0;
            for (double x : v) ss += (x - m) * (x - m);
            return std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
        };
        fit.chi_stderr = jk(chis);
        fit.z_stderr = jk(zs);
    } else if (opts.stderr_method == StderrMethod::Bootstrap) {
        if (opts.n_boot < 2) throw DomainError("fit_stretched_exponential: n_boot must be at least 2");
        const auto nb = static_cast<std::size_t>(opts.n_boot);
        std::vector<double> chis(nb), zs(nb);
        parallel_for(nb, [&](std::size_t b) {
            Rng rng(opts.seed, b);
            std::vector<double> sample(n);
            for (auto& v : sample) v = logd[rng.below(n)];
            std::tie(chis[b], zs[b]) = refit(sample);
        });
        fit.chi_stderr = sample_sd(chis);
        fit.z_stderr = sample_sd(zs);
    }
    return fit;
}

// ---------------------------------------------------------------------------

DrawThresholds draw_thresholds(std::span<const Draw> draws, double q1, QuantileScope scope)
{
    if (!(q1 > 0.0 && q1 < 0.5)) throw DomainError("discretize_by_draw: q1 must lie in (0, 0.5)");
    std::vector<double> down, up, pooled;
    for (const Draw& d : draws) {
        if (d.sign == DrawSign::Down) down.push_back(d.magnitude);
        if (d.sign == DrawSign::Up) up.push_back(d.magnitude);
        if (d.sign != DrawSign::Flat) pooled.push_back(d.magnitude);
    }
    const double need = 1.0 / q1;
    if (static_cast<double>(down.size()) < need || static_cast<double>(up.size()) < need)
        throw DomainError("discretize_by_draw: fewer than 1/q1 draws of one sign; quantile undefined");
    if (scope == QuantileScope::Pooled) return {quantile(pooled, q1), quantile(pooled, 1.0 - q1)};
    return {quantile(down, q1), quantile(up, 1.0 - q1)};
}

namespace {

SymbolSeries symbolize_draws(std::span<const Draw> draws, std::size_t n, const DrawThresholds& th, std::string provenance)
{
    std::vector<int> sym(n, 1);
    for (const Draw& d : draws) {
        int s = 1;
        if (d.sign == DrawSign::Down && d.magnitude < th.lower) s = 0;
        if (d.sign == DrawSign::Up && d.magnitude > th.upper) s = 2;
        std::fill(sym.begin() + static_cast<std::ptrdiff_t>(d.start_index),
                  sym.begin() + static_cast<std::ptrdiff_t>(d.end_index) + 1, s);
    }
    return SymbolSeries(std::move(sym), 3, std::move(provenance));
}

}  // namespace

SymbolSeries discretize_by_draw(std::span<const double> returns, const DrawThresholds& th)
{
    return symbolize_draws(detect_draws(returns), returns.size(), th,
                           "draw(lower=" + std::to_string(th.lower) + ",upper=" + std::to_string(th.upper) + ")");
}

SymbolSeries discretize_by_draw(std::span<const double> returns, double q1, QuantileScope scope)
{
    const auto draws = detect_draws(returns);
    return symbolize_draws(draws, returns.size(), draw_thresholds(draws, q1, scope),
                           std::string("draw(q1=") + std::to_string(q1) + (scope == QuantileScope::Pooled ? ",pooled)" : ",per-sign)"));
}

SymbolSeries discretize_by_return(std::span<const double> returns, double lo, double hi)
{
    if (!(lo < hi)) throw DomainError("discretize_by_return: lo must be below hi");
    if (!(lo >= 0.0 && hi <= 1.0)) throw DomainError("discretize_by_return: quantile levels outside [0,1]");
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    const double qlo = quantile_sorted(sorted, lo);
    const double qhi = quantile_sorted(sorted, hi);
    std::vector<int> sym(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const double r = returns[i];
        sym[i] = r < qlo ? 0 : (r > qhi ? 2 : 1);
    }
    return SymbolSeries(std::move(sym), 3, "return(lo=" + std::to_string(lo) + ",hi=" + std::to_string(hi) + ")");
}

}  // namespace entropyts
