#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "entropyts/apen.hpp"
#include "entropyts/table.hpp"

namespace entropyts {

struct CorrelatedGaussian { double rho = 0.0; };
struct Ar1 { double rho = 0.0; };
/// a_t = sigma_t e_t, sigma_t^2 = alpha0 + alpha1 a_{t-1}^2 + beta1 sigma_{t-1}^2.
struct Garch11 {
    double alpha0 = 1e-5;
    double alpha1 = 0.0;
    double beta1 = 0.0;
    int burn_in = 1000;
};
/// Two-regime Gaussian returns; p = P(stay in 0), q = P(stay in 1); regime 0 has sigma1.
struct MarkovSwitch {
    double p = 0.5, q = 0.5;
    double sigma1 = 0.1, sigma2 = 0.5;
};
/// sigma1 for indices below t_switch, sigma2 from t_switch on.
struct VolJump {
    double sigma1 = 0.01, sigma2 = 0.05;
    std::size_t t_switch = 500;
};
/// Each draw uses sigma1 with probability w1, else sigma2.
struct MixtureNormal {
    double w1 = 0.5;
    double sigma1 = 0.01, sigma2 = 0.05;
};

using SimKind = std::variant<CorrelatedGaussian, Ar1, Garch11, MarkovSwitch, VolJump, MixtureNormal>;

struct SimSpec {
    SimKind kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;  ///< path index; (seed, stream) fixes the draw
};

struct SimResult {
    std::vector<double> series;
    std::vector<double> partner;  ///< second series of a CorrelatedGaussian pair
    std::vector<int> states;      ///< regime path of a MarkovSwitch
};

void validate(const SimSpec& spec);
SimResult simulate(const SimSpec& spec);

/// Transform applied to each path before ApEn.
enum class PathTransform { None, Square };

struct ReplicateStats {
    double mean = 0.0;
    double sd = 0.0;
    int replicates = 0;
};

/// Mean and sd of ApEn(m, r_fraction * sd) over paths (seed, stream_base + k).
ReplicateStats apen_replicates(const SimKind& kind, std::size_t n, int m, double r_fraction, PathTransform transform,
                               int replicates, std::uint64_t seed, std::uint64_t stream_base = 0,
                               LogBase base = LogBase::Natural);

/// Suite names: coin-entropy, estimator-bias, apen-ar1, apen-iid, garch-apen,
/// vol-jump, mixture, markov-switch.
std::vector<std::string> suite_names();

struct SuiteOptions {
    int replicates = 0;  ///< 0 uses the suite's fixed count
    LogBase base = LogBase::Natural;
};

Table figure_suite(const std::string& name, std::uint64_t seed, const SuiteOptions& opts = {});

}  // namespace entropyts
