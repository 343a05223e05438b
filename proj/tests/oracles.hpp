#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/digamma.hpp>

#include "entropyts/hmm.hpp"

namespace oracle {

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

/// E[H_naive] of a Binomial(n, 1/2) fair-coin sample, by exact enumeration.
inline double fair_coin_naive_mean(int n)
{
    double e = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double logw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0);
        const double p = static_cast<double>(k) / n;
        e += std::exp(logw) * -(p * log2_safe(p) + (1 - p) * log2_safe(1 - p));
    }
    return e;
}

/// E[H_grassberger] for the same sample, with boost's digamma.
inline double fair_coin_grassberger_mean(int n)
{
    auto term = [](int c) { return c > 0 ? c * boost::math::digamma(static_cast<double>(c)) : 0.0; };
    double e = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double logw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0);
        const double h = (std::log(static_cast<double>(n)) - (term(k) + term(n - k)) / n) / std::log(2.0);
        e += std::exp(logw) * h;
    }
    return e;
}

struct Enumeration {
    double loglik = 0.0;
    Eigen::MatrixXd posterior;  // T x N
    std::vector<int> best_path;
};

/// Sums the joint density over all N^T state paths.
inline Enumeration enumerate_hmm(const entropyts::HmmModel& m, const std::vector<double>& y)
{
    const int N = m.n_states();
    const int T = static_cast<int>(y.size());
    auto dens = [&](int s, double v) {
        const double z = (v - m.mu(s)) / m.sigma(s);
        return std::exp(-0.5 * z * z) / (m.sigma(s) * std::sqrt(2.0 * M_PI));
    };
    Enumeration out;
    out.posterior = Eigen::MatrixXd::Zero(T, N);
    std::vector<int> path(static_cast<std::size_t>(T), 0);
    double total = 0.0, best = -1.0;
    for (;;) {
        double p = m.initial(path[0]) * dens(path[0], y[0]);
        for (int t = 1; t < T; ++t) p *= m.transition(path[t - 1], path[t]) * dens(path[t], y[t]);
        total += p;
        for (int t = 0; t < T; ++t) out.posterior(t, path[t]) += p;
        if (p > best) {
            best = p;
            out.best_path = path;
        }
        int t = T - 1;
        while (t >= 0 && ++path[t] == N) path[t--] = 0;
        if (t < 0) break;
    }
    out.posterior /= total;
    out.loglik = std::log(total);
    return out;
}

/// Stretched-exponential magnitudes via |D| = chi * G^(1/z), G ~ Gamma(1/z, 1).
inline std::vector<double> stretched_exp_sample(double chi, double z, std::size_t n, unsigned seed)
{
    std::mt19937_64 gen(seed);
    std::gamma_distribution<double> g(1.0 / z, 1.0);
    std::vector<double> out(n);
    for (auto& v : out) v = chi * std::pow(g(gen), 1.0 / z);
    return out;
}

/// -∫ f(y) ln P(|Y - y| <= r) dy for Uniform(0,1), in closed form.
inline double uniform_apen_nats(double r)
{
    auto F = [](double u) { return u * std::log(u) - u; };  // ∫ ln u du
    const double edges = 2.0 * (F(2.0 * r) - F(r));
    return -(edges + (1.0 - 2.0 * r) * std::log(2.0 * r));
}

/// Two-state chain [[1-a, a], [b, 1-b]].
inline double two_state_entropy_rate(double a, double b)
{
    auto h = [](double p) { return -(p * log2_safe(p) + (1 - p) * log2_safe(1 - p)); };
    return (b * h(a) + a * h(b)) / (a + b);
}

}  // namespace oracle
