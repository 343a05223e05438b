#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace entropyts {

class Rng;

/// Gaussian-emission HMM. transition(i, j) = P(q_{t+1} = j | q_t = i).
struct HmmModel {
    Eigen::MatrixXd transition;
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma;
    Eigen::VectorXd initial;

    int n_states() const { return static_cast<int>(mu.size()); }
    void validate() const;
};

/// Rows of alpha are P(q_t | y_1..t); log_scale(t) is log P(y_t | y_1..t-1).
struct ForwardResult {
    Eigen::MatrixXd alpha;      ///< T x N
    Eigen::VectorXd log_scale;  ///< T
    double loglik = 0.0;
};

ForwardResult forward(const HmmModel& model, std::span<const double> y);

/// Log-space forward recursion without scaling; returns T x N log alpha.
Eigen::MatrixXd forward_log(const HmmModel& model, std::span<const double> y, double* loglik = nullptr);

/// Betas scaled by the forward constants so alpha .* beta is the posterior.
Eigen::MatrixXd backward(const HmmModel& model, std::span<const double> y, const ForwardResult& fwd);
Eigen::MatrixXd backward(const HmmModel& model, std::span<const double> y);

/// T x N matrix of P(q_t | y_1..T).
Eigen::MatrixXd smoothed_posterior(const HmmModel& model, std::span<const double> y);

/// Most likely path, log space, ties toward the lower state index.
std::vector<int> viterbi(const HmmModel& model, std::span<const double> y);

struct DecodedStates {
    std::vector<int> states;
    Eigen::MatrixXd smoothed;
    double loglik = 0.0;
};

DecodedStates decode(const HmmModel& model, std::span<const double> y);

struct EmOptions {
    int max_iter = 500;
    double tol = 1e-8;  ///< relative change in loglik
    int restarts = 5;
    std::uint64_t seed = 0;
    double variance_floor = 1e-12;  ///< times the sample variance
};

struct EmFit {
    HmmModel model;
    std::vector<double> loglik_trace;
    int iterations = 0;
    bool converged = false;
    int best_restart = 0;
    int collapsed_restarts = 0;
};

/// Baum-Welch from a k-quantile split plus jittered restarts. States are
/// relabelled so state 0 has the highest mean (ties: larger sigma first).
EmFit fit_em(std::span<const double> y, int n_states, const EmOptions& opts = {});

struct HmmStderrs {
    Eigen::MatrixXd transition;
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma;
};

/// Standard errors from the inverse of a central-difference Hessian of the
/// loglik in (off-diagonal transitions, mu, sigma). NaN where the observed
/// information is not positive definite.
HmmStderrs parameter_stderrs(const HmmModel& model, std::span<const double> y);

struct StateReport {
    Eigen::VectorXd stationary;
    double stationary_entropy = 0.0;  ///< H(X) of the stationary law, bits
    double entropy_rate = 0.0;        ///< bits per step
    Eigen::VectorXd expected_durations;  ///< +inf for absorbing states
    Eigen::VectorXd empirical_frequencies;
    double empirical_entropy = 0.0;              ///< naive H of the decoded states
    double empirical_conditional_entropy = 0.0;  ///< naive H(X_2 | X_1)
    std::vector<std::map<int, std::size_t>> duration_histograms;  ///< run length -> count, per state
};

StateReport state_report(const HmmModel& model, std::span<const int> states);

/// Geometric duration law a^(n-1) (1 - a).
double state_duration_pmf(double a_ii, int n);

/// Draws a path of length T; returns observations and fills states.
std::vector<double> sample_hmm(const HmmModel& model, std::size_t T, Rng& rng, std::vector<int>* states = nullptr);

}  // namespace entropyts
