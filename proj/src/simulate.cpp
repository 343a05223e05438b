#include "entropyts/simulate.hpp"

#include <cmath>

#include "entropyts/error.hpp"
#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

namespace {

template <class... Ts>
struct Overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

void require(bool ok, const char* what)
{
    if (!ok) throw DomainError(what);
}

}  // namespace

void validate(const SimSpec& spec)
{
    require(spec.n >= 1, "simulate: n must be positive");
    std::visit(Overload{
                   [](const CorrelatedGaussian& g) { require(std::abs(g.rho) <= 1.0, "CorrelatedGaussian: |rho| must be at most 1"); },
                   [](const Ar1& a) { require(std::abs(a.rho) < 1.0, "Ar1: |rho| must be below 1"); },
                   [](const Garch11& g) {
                       require(g.alpha0 > 0.0, "Garch11: alpha0 must be positive");
                       require(g.alpha1 >= 0.0 && g.beta1 >= 0.0, "Garch11: alpha1 and beta1 must be non-negative");
                       require(g.alpha1 + g.beta1 < 1.0, "Garch11: alpha1 + beta1 must be below 1");
                       require(g.burn_in >= 0, "Garch11: burn-in must be non-negative");
                   },
                   [](const MarkovSwitch& s) {
                       require(s.p > 0.0 && s.p < 1.0 && s.q > 0.0 && s.q < 1.0, "MarkovSwitch: p and q must lie in (0,1)");
                       require(s.sigma1 > 0.0 && s.sigma2 > 0.0, "MarkovSwitch: sigmas must be positive");
                   },
                   [&](const VolJump& v) {
                       require(v.sigma1 > 0.0 && v.sigma2 > 0.0, "VolJump: sigmas must be positive");
                       require(v.t_switch <= spec.n, "VolJump: switch index beyond series length");
                   },
                   [](const MixtureNormal& m) {
                       require(m.w1 >= 0.0 && m.w1 <= 1.0, "MixtureNormal: w1 must lie in [0,1]");
                       require(m.sigma1 > 0.0 && m.sigma2 > 0.0, "MixtureNormal: sigmas must be positive");
                   },
               },
               spec.kind);
}

SimResult simulate(const SimSpec& spec)
{
    validate(spec);
    Rng rng(spec.seed, spec.stream);
    const std::size_t n = spec.n;
    SimResult out;
    out.series.resize(n);
    std::visit(Overload{
                   [&](const CorrelatedGaussian& g) {
                       // Cholesky factor of [[1, rho], [rho, 1]]
                       const double l21 = g.rho, l22 = std::sqrt(std::max(0.0, 1.0 - g.rho * g.rho));
                       out.partner.resize(n);
                       for (std::size_t t = 0; t < n; ++t) {
                           const double z1 = rng.normal(), z2 = rng.normal();
                           out.series[t] = z1;
                           out.partner[t] = l21 * z1 + l22 * z2;
                       }
                   },
                   [&](const Ar1& a) {
                       double x = rng.normal() / std::sqrt(1.0 - a.rho * a.rho);
                       for (std::size_t t = 0; t < n; ++t) {
                           if (t > 0) x = a.rho * x + rng.normal();
                           out.series[t] = x;
                       }
                   },
                   [&](const Garch11& g) {
                       const double uncond = g.alpha0 / (1.0 - g.alpha1 - g.beta1);
                       double s2 = uncond, a2 = uncond;
                       const std::size_t total = n + static_cast<std::size_t>(g.burn_in);
                       for (std::size_t t = 0; t < total; ++t) {
                           s2 = g.alpha0 + g.alpha1 * a2 + g.beta1 * s2;
                           const double a = std::sqrt(s2) * rng.normal();
                           a2 = a * a;
                           if (t >= static_cast<std::size_t>(g.burn_in)) out.series[t - static_cast<std::size_t>(g.burn_in)] = a;
                       }
                   },
                   [&](const MarkovSwitch& s) {
                       out.states.resize(n);
                       const double pi0 = (1.0 - s.q) / (2.0 - s.p - s.q);
                       int h = rng.uniform() < pi0 ? 0 : 1;
                       for (std::size_t t = 0; t < n; ++t) {
                           if (t > 0) {
                               const double stay = h == 0 ? s.p : s.q;
                               if (rng.uniform() >= stay) h = 1 - h;
                           }
                           out.states[t] = h;
                           out.series[t] = (h == 0 ? s.sigma1 : s.sigma2) * rng.normal();
                       }
                   },
                   [&](const VolJump& v) {
                       for (std::size_t t = 0; t < n; ++t) out.series[t] = (t < v.t_switch ? v.sigma1 : v.sigma2) * rng.normal();
                   },
                   [&](const MixtureNormal& m) {
                       for (std::size_t t = 0; t < n; ++t) {
                           const double sd = rng.uniform() < m.w1 ? m.sigma1 : m.sigma2;
                           out.series[t] = sd * rng.normal();
                       }
                   },
               },
               spec.kind);
    return out;
}

ReplicateStats apen_replicates(const SimKind& kind, std::size_t n, int m, double r_fraction, PathTransform transform,
                               int replicates, std::uint64_t seed, std::uint64_t stream_base, LogBase base)
{
    if (replicates < 2) throw DomainError("apen_replicates: need at least 2 replicates");
    validate(SimSpec{kind, n, seed, stream_base});
    std::vector<double> vals(static_cast<std::size_t>(replicates));
    const Tolerance tol = Tolerance::fraction_of_sd(r_fraction);
    parallel_for(vals.size(), [&](std::size_t k) {
        SimResult path = simulate(SimSpec{kind, n, seed, stream_base + k});
        if (transform == PathTransform::Square)
            for (double& v : path.series) v *= v;
        vals[k] = apen(path.series, m, tol, base).value;
    });
    return {mean(vals), sample_sd(vals), replicates};
}

}  // namespace entropyts
