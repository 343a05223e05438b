#include "entropyts/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "entropyts/core_entropy.hpp"
#include "entropyts/error.hpp"
#include "entropyts/parallel.hpp"
#include "entropyts/random.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

void HmmModel::validate() const
{
    const auto n = mu.size();
    if (n < 1) throw DomainError("HmmModel: no states");
    if (sigma.size() != n || initial.size() != n || transition.rows() != n)
        throw DomainError("HmmModel: inconsistent state counts");
    validate_transition(transition);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(sigma(i) > 0.0) || !std::isfinite(sigma(i))) throw DomainError("HmmModel: sigmas must be positive");
        if (!std::isfinite(mu(i))) throw DomainError("HmmModel: non-finite mean");
        if (!(initial(i) >= 0.0)) throw DomainError("HmmModel: negative initial probability");
    }
    if (std::abs(initial.sum() - 1.0) > 1e-10) throw DomainError("HmmModel: initial distribution must sum to 1");
}

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

/// T x N Gaussian log densities.
Eigen::MatrixXd log_emissions(const HmmModel& m, std::span<const double> y)
{
    const auto T = static_cast<Eigen::Index>(y.size());
    const Eigen::Index N = m.n_states();
    Eigen::MatrixXd lb(T, N);
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index i = 0; i < N; ++i) {
            const double z = (y[static_cast<std::size_t>(t)] - m.mu(i)) / m.sigma(i);
            lb(t, i) = -0.5 * z * z - std::log(m.sigma(i)) - kLogSqrt2Pi;
        }
    }
    return lb;
}

/// Emissions rescaled per row by their maximum; shift(t) holds the log of that factor.
Eigen::MatrixXd shifted_emissions(const HmmModel& m, std::span<const double> y, Eigen::VectorXd& shift)
{
    Eigen::MatrixXd lb = log_emissions(m, y);
    shift.resize(lb.rows());
    for (Eigen::Index t = 0; t < lb.rows(); ++t) {
        const double mx = lb.row(t).maxCoeff();
        if (!std::isfinite(mx)) throw DomainError("hmm: observation " + std::to_string(t) + " has zero likelihood under every state");
        shift(t) = mx;
        lb.row(t) = (lb.row(t).array() - mx).exp();
    }
    return lb;
}

void check_obs(const HmmModel& model, std::span<const double> y)
{
    model.validate();
    if (y.empty()) throw DomainError("hmm: empty observation sequence");
}

struct Pass {
    ForwardResult fwd;
    Eigen::MatrixXd b;  // shifted emissions
    Eigen::VectorXd c;  // per-step normalizers of the shifted recursion
};

Pass forward_pass(const HmmModel& m, std::span<const double> y)
{
    Pass p;
    Eigen::VectorXd shift;
    p.b = shifted_emissions(m, y, shift);
    const Eigen::Index T = p.b.rows(), N = p.b.cols();
    p.fwd.alpha.resize(T, N);
    p.c.resize(T);
    p.fwd.log_scale.resize(T);
    Eigen::RowVectorXd a = m.initial.transpose().cwiseProduct(p.b.row(0));
    for (Eigen::Index t = 0; t < T; ++t) {
        if (t > 0) a = (p.fwd.alpha.row(t - 1) * m.transition).cwiseProduct(p.b.row(t));
        const double s = a.sum();
        if (!(s > 0.0) || !std::isfinite(s))
            throw DomainError("hmm: observation " + std::to_string(t) + " has zero likelihood under every reachable state");
        p.fwd.alpha.row(t) = a / s;
        p.c(t) = s;
        p.fwd.log_scale(t) = std::log(s) + shift(t);
    }
    p.fwd.loglik = p.fwd.log_scale.sum();
    return p;
}

Eigen::MatrixXd backward_pass(const HmmModel& m, const Pass& p)
{
    const Eigen::Index T = p.b.rows(), N = p.b.cols();
    Eigen::MatrixXd beta(T, N);
    beta.row(T - 1).setOnes();
    for (Eigen::Index t = T - 2; t >= 0; --t) {
        Eigen::VectorXd w = p.b.row(t + 1).transpose().cwiseProduct(beta.row(t + 1).transpose());
        beta.row(t) = (m.transition * w).transpose() / p.c(t + 1);
    }
    return beta;
}

Eigen::MatrixXd posterior(const Pass& p, const Eigen::MatrixXd& beta)
{
    Eigen::MatrixXd g = p.fwd.alpha.cwiseProduct(beta);
    for (Eigen::Index t = 0; t < g.rows(); ++t) g.row(t) /= g.row(t).sum();
    return g;
}

double log_or_neg_inf(double v)
{
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace

ForwardResult forward(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    return forward_pass(model, y).fwd;
}

Eigen::MatrixXd forward_log(const HmmModel& model, std::span<const double> y, double* loglik)
{
    check_obs(model, y);
    const Eigen::MatrixXd lb = log_emissions(model, y);
    const Eigen::Index T = lb.rows(), N = lb.cols();
    Eigen::MatrixXd la(T, N);
    Eigen::MatrixXd lA = model.transition.unaryExpr([](double v) { return log_or_neg_inf(v); });
    for (Eigen::Index i = 0; i < N; ++i) la(0, i) = log_or_neg_inf(model.initial(i)) + lb(0, i);
    auto lse = [](const Eigen::VectorXd& v) {
        const double mx = v.maxCoeff();
        if (!std::isfinite(mx)) return mx;
        return mx + std::log((v.array() - mx).exp().sum());
    };
    for (Eigen::Index t = 1; t < T; ++t) {
        for (Eigen::Index j = 0; j < N; ++j) {
            Eigen::VectorXd terms = la.row(t - 1).transpose() + lA.col(j);
            la(t, j) = lse(terms) + lb(t, j);
        }
    }
    if (loglik) *loglik = lse(la.row(T - 1).transpose());
    return la;
}

Eigen::MatrixXd backward(const HmmModel& model, std::span<const double> y, const ForwardResult& fwd)
{
    check_obs(model, y);
    Pass p;
    Eigen::VectorXd shift;
    p.b = shifted_emissions(model, y, shift);
    p.c = (fwd.log_scale - shift).array().exp();
    return backward_pass(model, p);
}

Eigen::MatrixXd backward(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    return backward_pass(model, forward_pass(model, y));
}

Eigen::MatrixXd smoothed_posterior(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    const Pass p = forward_pass(model, y);
    return posterior(p, backward_pass(model, p));
}

std::vector<int> viterbi(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    const Eigen::MatrixXd lb = log_emissions(model, y);
    const Eigen::Index T = lb.rows(), N = lb.cols();
    const Eigen::MatrixXd lA = model.transition.unaryExpr([](double v) { return log_or_neg_inf(v); });
    Eigen::VectorXd delta(N), next(N);
    Eigen::MatrixXi back(T, N);
    for (Eigen::Index i = 0; i < N; ++i) delta(i) = log_or_neg_inf(model.initial(i)) + lb(0, i);
    for (Eigen::Index t = 1; t < T; ++t) {
        for (Eigen::Index j = 0; j < N; ++j) {
            Eigen::Index arg = 0;
            double best = delta(0) + lA(0, j);
            for (Eigen::Index i = 1; i < N; ++i) {
                const double v = delta(i) + lA(i, j);
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            next(j) = best + lb(t, j);
            back(t, j) = static_cast<int>(arg);
        }
        delta.swap(next);
    }
    std::vector<int> path(static_cast<std::size_t>(T));
    Eigen::Index cur = 0;
    for (Eigen::Index i = 1; i < N; ++i) if (delta(i) > delta(cur)) cur = i;
    for (Eigen::Index t = T - 1; t >= 0; --t) {
        path[static_cast<std::size_t>(t)] = static_cast<int>(cur);
        if (t > 0) cur = back(t, cur);
    }
    return path;
}

DecodedStates decode(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    const Pass p = forward_pass(model, y);
    DecodedStates d;
    d.smoothed = posterior(p, backward_pass(model, p));
    d.loglik = p.fwd.loglik;
    d.states = viterbi(model, y);
    return d;
}

// ---------------------------------------------------------------------------

namespace {

HmmModel quantile_init(std::span<const double> y, int n_states)
{
    std::vector<double> s(y.begin(), y.end());
    std::sort(s.begin(), s.end());
    const double overall_sd = sample_sd(s);
    HmmModel m;
    m.mu.resize(n_states);
    m.sigma.resize(n_states);
    const std::size_t T = s.size();
    for (int g = 0; g < n_states; ++g) {
        const std::size_t a = T * static_cast<std::size_t>(g) / static_cast<std::size_t>(n_states);
        const std::size_t b = T * static_cast<std::size_t>(g + 1) / static_cast<std::size_t>(n_states);
        std::span<const double> grp(s.data() + a, b - a);
        m.mu(g) = mean(grp);
        const double sd = sample_sd(grp);
        m.sigma(g) = sd > 0.0 ? sd : 0.1 * overall_sd;
    }
    const double stay = 0.9;
    m.transition = Eigen::MatrixXd::Constant(n_states, n_states, (1.0 - stay) / (n_states - 1));
    m.transition.diagonal().setConstant(stay);
    m.initial = Eigen::VectorXd::Constant(n_states, 1.0 / n_states);
    return m;
}

void jitter(HmmModel& m, Rng& rng)
{
    constexpr double kScale = 0.25;
    for (Eigen::Index i = 0; i < m.mu.size(); ++i) {
        m.mu(i) += kScale * m.sigma(i) * rng.normal();
        m.sigma(i) *= std::exp(kScale * rng.normal());
    }
    for (Eigen::Index i = 0; i < m.transition.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.transition.cols(); ++j) m.transition(i, j) *= std::exp(kScale * rng.normal());
        m.transition.row(i) /= m.transition.row(i).sum();
    }
}

struct RunResult {
    HmmModel model;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
    bool collapsed = false;
};

RunResult run_em(std::span<const double> y, HmmModel m, const EmOptions& opts, double var_floor)
{
    RunResult r;
    const Eigen::Index N = m.n_states();
    const auto T = static_cast<Eigen::Index>(y.size());
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), T);
    for (int it = 0; it < opts.max_iter; ++it) {
        const Pass p = forward_pass(m, y);
        const Eigen::MatrixXd beta = backward_pass(m, p);
        const Eigen::MatrixXd g = posterior(p, beta);
        r.trace.push_back(p.fwd.loglik);
        r.iterations = it;
        const std::size_t k = r.trace.size();
        if (k >= 2 && std::abs(r.trace[k - 1] - r.trace[k - 2]) < opts.tol * std::abs(r.trace[k - 1])) {
            r.converged = true;
            r.model = m;
            return r;
        }

        Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(N, N);
        for (Eigen::Index t = 0; t + 1 < T; ++t) {
            const Eigen::RowVectorXd w = p.b.row(t + 1).cwiseProduct(beta.row(t + 1)) / p.c(t + 1);
            xi.noalias() += (p.fwd.alpha.row(t).transpose() * w).cwiseProduct(m.transition);
        }
        HmmModel next = m;
        for (Eigen::Index i = 0; i < N; ++i) {
            const double row = xi.row(i).sum();
            if (row > 0.0) next.transition.row(i) = xi.row(i) / row;
            const double w = g.col(i).sum();
            if (!(w > 0.0)) {
                r.collapsed = true;
                r.model = m;
                return r;
            }
            next.mu(i) = g.col(i).dot(yv) / w;
            const double var = g.col(i).dot((yv.array() - next.mu(i)).square().matrix()) / w;
            if (!(var > var_floor)) {
                r.collapsed = true;
                r.model = m;
                return r;
            }
            next.sigma(i) = std::sqrt(var);
        }
        next.initial = g.row(0).transpose();
        next.initial /= next.initial.sum();
        m = std::move(next);
    }
    r.model = m;
    r.trace.push_back(forward_pass(m, y).fwd.loglik);
    return r;
}

HmmModel relabel(const HmmModel& m)
{
    const Eigen::Index N = m.n_states();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (m.mu(a) != m.mu(b)) return m.mu(a) > m.mu(b);
        return m.sigma(a) > m.sigma(b);
    });
    HmmModel out = m;
    for (Eigen::Index i = 0; i < N; ++i) {
        const Eigen::Index oi = order[static_cast<std::size_t>(i)];
        out.mu(i) = m.mu(oi);
        out.sigma(i) = m.sigma(oi);
        out.initial(i) = m.initial(oi);
        for (Eigen::Index j = 0; j < N; ++j) out.transition(i, j) = m.transition(oi, order[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace

EmFit fit_em(std::span<const double> y, int n_states, const EmOptions& opts)
{
    if (n_states < 2) throw DomainError("fit_em: need at least 2 states");
    if (y.size() < 10 * static_cast<std::size_t>(n_states)) throw DomainError("fit_em: need at least 10 observations per state");
    if (opts.restarts < 1 || opts.max_iter < 1) throw DomainError("fit_em: restarts and max_iter must be positive");
    for (double v : y) if (!std::isfinite(v)) throw DomainError("fit_em: non-finite observation");
    const double sd = sample_sd(y);
    if (!(sd > 0.0)) throw DomainError("fit_em: constant observation sequence");
    const double var_floor = opts.variance_floor * sd * sd;

    const HmmModel base = quantile_init(y, n_states);
    const auto R = static_cast<std::size_t>(opts.restarts);
    std::vector<RunResult> runs(R);
    parallel_for(R, [&](std::size_t k) {
        HmmModel start = base;
        // restart 0 is the plain quantile split; a collapsed run retries with fresh jitter
        Rng rng(opts.seed, k);
        constexpr int kRetries = 3;
        for (int attempt = 0; attempt <= kRetries; ++attempt) {
            HmmModel init = start;
            if (k > 0 || attempt > 0) jitter(init, rng);
            try {
                runs[k] = run_em(y, init, opts, var_floor);
            } catch (const DomainError&) {
                runs[k].collapsed = true;
            }
            if (!runs[k].collapsed) return;
        }
    });

    EmFit fit;
    int best = -1;
    for (std::size_t k = 0; k < R; ++k) {
        if (runs[k].collapsed) {
            ++fit.collapsed_restarts;
            continue;
        }
        if (best < 0 || runs[k].trace.back() > runs[static_cast<std::size_t>(best)].trace.back()) best = static_cast<int>(k);
    }
    if (best < 0) throw FitError("fit_em: every restart collapsed to a degenerate emission variance");
    RunResult& r = runs[static_cast<std::size_t>(best)];
    fit.model = relabel(r.model);
    fit.loglik_trace = std::move(r.trace);
    fit.iterations = r.iterations;
    fit.converged = r.converged;
    fit.best_restart = best;
    return fit;
}

// ---------------------------------------------------------------------------

HmmStderrs parameter_stderrs(const HmmModel& model, std::span<const double> y)
{
    check_obs(model, y);
    const Eigen::Index N = model.n_states();
    struct Param {
        int kind;  // 0 transition, 1 mu, 2 sigma
        Eigen::Index i, j;
    };
    std::vector<Param> params;
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            if (i != j) params.push_back({0, i, j});
    for (Eigen::Index i = 0; i < N; ++i) params.push_back({1, i, 0});
    for (Eigen::Index i = 0; i < N; ++i) params.push_back({2, i, 0});
    const auto P = static_cast<Eigen::Index>(params.size());

    std::vector<double> h(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const Param& p = params[k];
        if (p.kind == 0) {
            const double a = model.transition(p.i, p.j), d = model.transition(p.i, p.i);
            h[k] = 1e-4 * std::max(1e-3, std::min({a, d, 1.0 - a}));
        } else {
            h[k] = 1e-4 * std::max(model.sigma(p.i), 1e-8);
        }
    }
    auto eval = [&](const std::vector<double>& delta) {
        HmmModel m = model;
        for (std::size_t k = 0; k < params.size(); ++k) {
            if (delta[k] == 0.0) continue;
            const Param& p = params[k];
            if (p.kind == 0) {
                m.transition(p.i, p.j) += delta[k];
                m.transition(p.i, p.i) -= delta[k];
            } else if (p.kind == 1) {
                m.mu(p.i) += delta[k];
            } else {
                m.sigma(p.i) += delta[k];
            }
        }
        // skip validate(): perturbed rows stay stochastic by construction
        return forward_pass(m, y).fwd.loglik;
    };
    const double f0 = eval(std::vector<double>(params.size(), 0.0));
    Eigen::MatrixXd H(P, P);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
    for (Eigen::Index a = 0; a < P; ++a)
        for (Eigen::Index b = a; b < P; ++b) cells.emplace_back(a, b);
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto [a, b] = cells[c];
        std::vector<double> d(params.size(), 0.0);
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        double v;
        if (a == b) {
            d[ua] = h[ua];
            const double fp = eval(d);
            d[ua] = -h[ua];
            const double fm = eval(d);
            v = (fp - 2.0 * f0 + fm) / (h[ua] * h[ua]);
        } else {
            double f[4];
            int idx = 0;
            for (double sa : {1.0, -1.0})
                for (double sb : {1.0, -1.0}) {
                    d[ua] = sa * h[ua];
                    d[ub] = sb * h[ub];
                    f[idx++] = eval(d);
                }
            v = (f[0] - f[1] - f[2] + f[3]) / (4.0 * h[ua] * h[ub]);
        }
        H(a, b) = v;
        H(b, a) = v;
    });

    const double nan = std::numeric_limits<double>::quiet_NaN();
    HmmStderrs se;
    se.transition = Eigen::MatrixXd::Constant(N, N, nan);
    se.mu = Eigen::VectorXd::Constant(N, nan);
    se.sigma = Eigen::VectorXd::Constant(N, nan);
    const Eigen::MatrixXd info = -H;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) return se;
    const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(P, P));
    for (Eigen::Index k = 0; k < P; ++k) {
        const Param& p = params[static_cast<std::size_t>(k)];
        const double s = std::sqrt(cov(k, k));
        if (p.kind == 0) se.transition(p.i, p.j) = s;
        else if (p.kind == 1) se.mu(p.i) = s;
        else se.sigma(p.i) = s;
    }
    // a_ii = 1 - sum of its row's free entries
    for (Eigen::Index i = 0; i < N; ++i) {
        double var = 0.0;
        for (Eigen::Index a = 0; a < P; ++a)
            for (Eigen::Index b = 0; b < P; ++b) {
                const Param& pa = params[static_cast<std::size_t>(a)];
                const Param& pb = params[static_cast<std::size_t>(b)];
                if (pa.kind == 0 && pb.kind == 0 && pa.i == i && pb.i == i) var += cov(a, b);
            }
        se.transition(i, i) = std::sqrt(var);
    }
    return se;
}

StateReport state_report(const HmmModel& model, std::span<const int> states)
{
    model.validate();
    if (states.empty()) throw DomainError("state_report: empty state sequence");
    const Eigen::Index N = model.n_states();
    StateReport rep;
    rep.stationary = stationary_distribution(model.transition);
    rep.stationary_entropy = shannon_entropy(std::span<const double>(rep.stationary.data(), static_cast<std::size_t>(N)));
    rep.entropy_rate = markov_entropy_rate(model.transition);
    rep.expected_durations.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double a = model.transition(i, i);
        rep.expected_durations(i) = a < 1.0 ? 1.0 / (1.0 - a) : std::numeric_limits<double>::infinity();
    }
    rep.empirical_frequencies = Eigen::VectorXd::Zero(N);
    rep.duration_histograms.assign(static_cast<std::size_t>(N), {});
    std::size_t run = 0;
    for (std::size_t t = 0; t < states.size(); ++t) {
        const int s = states[t];
        if (s < 0 || s >= N) throw DomainError("state_report: state index out of range");
        rep.empirical_frequencies(s) += 1.0;
        ++run;
        if (t + 1 == states.size() || states[t + 1] != s) {
            ++rep.duration_histograms[static_cast<std::size_t>(s)][static_cast<int>(run)];
            run = 0;
        }
    }
    rep.empirical_frequencies /= static_cast<double>(states.size());
    rep.empirical_entropy = shannon_entropy(std::span<const double>(rep.empirical_frequencies.data(), static_cast<std::size_t>(N)));
    if (states.size() >= 2) {
        const SymbolSeries s(std::vector<int>(states.begin(), states.end()), static_cast<int>(std::max<Eigen::Index>(N, 2)));
        rep.empirical_conditional_entropy = conditional_block_entropy(s, 1, Estimator::Naive);
    }
    return rep;
}

double state_duration_pmf(double a_ii, int n)
{
    if (!(a_ii >= 0.0 && a_ii < 1.0)) throw DomainError("state_duration_pmf: a_ii outside [0,1)");
    if (n < 1) throw DomainError("state_duration_pmf: n must be positive");
    return std::pow(a_ii, n - 1) * (1.0 - a_ii);
}

std::vector<double> sample_hmm(const HmmModel& model, std::size_t T, Rng& rng, std::vector<int>* states)
{
    model.validate();
    const Eigen::Index N = model.n_states();
    auto draw = [&](const auto& probs) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            acc += probs(i);
            if (u < acc) return i;
        }
        return N - 1;
    };
    std::vector<double> y(T);
    if (states) states->resize(T);
    Eigen::Index q = draw(model.initial);
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) q = draw(model.transition.row(q));
        y[t] = model.mu(q) + model.sigma(q) * rng.normal();
        if (states) (*states)[t] = static_cast<int>(q);
    }
    return y;
}

}  // namespace entropyts
