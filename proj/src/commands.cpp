#include "entropyts/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "entropyts/apen.hpp"
#include "entropyts/dependence.hpp"
#include "entropyts/hmm.hpp"
#include "entropyts/regress.hpp"
#include "entropyts/simulate.hpp"
#include "entropyts/stats.hpp"

namespace entropyts {

SymbolSeries symbolize(const TimeSeries& s, const std::string& method, double q1, QuantileScope scope)
{
    if (method == "draw") return discretize_by_draw(s.values, q1, scope);
    if (method == "return") return discretize_by_return(s.values, q1, 1.0 - q1);
    if (method == "raw") {
        std::vector<int> sym;
        sym.reserve(s.size());
        int top = 1;
        for (double v : s.values) {
            if (v < 0.0 || v != std::floor(v)) throw DomainError("raw symbolization needs non-negative integer values");
            sym.push_back(static_cast<int>(v));
            top = std::max(top, sym.back());
        }
        return SymbolSeries(std::move(sym), top + 1, "raw");
    }
    throw DomainError("unknown symbolization '" + method + "' (expected draw, return or raw)");
}

namespace {

struct Common {
    std::vector<std::string> inputs;
    std::vector<std::string> columns;
    std::string time_column;
    std::string transform = "none";
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

struct Options {
    Common c;
    std::vector<double> q1s;
    double q1 = 0.05;
    std::string symbolize = "draw";
    std::string scope = "pooled";
    std::string estimator;
    std::string lag_range = "0:0";
    int m = 0, l = 0;
    int shuffles = kDefaultShuffles;
    int block = 0;
    std::size_t window = 60;
    double r_fraction = 0.2;
    std::string log_base = "e";
    int states = 2;
    int restarts = 5;
    int max_iter = 500;
    double tol = 1e-8;
    std::string states_out;
    std::string suite;
    int replicates = 0;
    std::string factors, conditioning, model = "all";
    std::size_t drop_first = 0, min_months = 0;
    bool no_standardize = false;
    bool no_fit = false;
    std::string stderr_method = "jackknife";
    int n_boot = 200;
    std::size_t boot_block = 0;
    int boot_n = 0;
};

void add_common(CLI::App* sub, Common& c, bool inputs_required)
{
    auto* in = sub->add_option("--input,-i", c.inputs, "input CSV file(s)");
    if (inputs_required) in->required();
    sub->add_option("--column,-c", c.columns, "value column name(s); default is the second column");
    sub->add_option("--time-column", c.time_column, "timestamp column; default is the first column");
    sub->add_option("--transform", c.transform, "comma list from none, log-return, square")->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out,-o", c.out, "output path; default stdout");
}

std::vector<Transform> parse_transforms(const std::string& s)
{
    std::vector<Transform> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const Transform t = transform_from_string(item);
        if (t != Transform::None) out.push_back(t);
    }
    return out;
}

/// One or two series: from two files, or two columns of one file.
std::vector<TimeSeries> load_series(const Common& c, std::size_t want)
{
    const auto tf = parse_transforms(c.transform);
    std::vector<TimeSeries> out;
    if (c.inputs.size() == 1) {
        std::vector<std::string> cols = c.columns;
        if (cols.empty()) cols.push_back("");
        if (cols.size() != want) throw DomainError("expected " + std::to_string(want) + " --column value(s) for a single input file");
        for (const auto& col : cols) out.push_back(ingest_series(c.inputs[0], {c.time_column, col}, tf));
    } else if (c.inputs.size() == want) {
        for (std::size_t k = 0; k < want; ++k) {
            const std::string col = k < c.columns.size() ? c.columns[k] : (c.columns.size() == 1 ? c.columns[0] : "");
            out.push_back(ingest_series(c.inputs[k], {c.time_column, col}, tf));
        }
    } else {
        throw DomainError("expected 1 or " + std::to_string(want) + " --input files");
    }
    if (want == 2) {
        auto [a, b] = align(out[0], out[1]);
        if (a.size() < 2) throw DomainError("series share fewer than 2 timestamps");
        out = {std::move(a), std::move(b)};
    }
    return out;
}

Estimator parse_estimator(const std::string& s, Estimator fallback)
{
    if (s.empty()) return fallback;
    if (s == "naive") return Estimator::Naive;
    if (s == "grassberger") return Estimator::Grassberger;
    throw DomainError("unknown estimator '" + s + "'");
}

QuantileScope parse_scope(const std::string& s)
{
    if (s == "pooled") return QuantileScope::Pooled;
    if (s == "per-sign") return QuantileScope::PerSign;
    throw DomainError("unknown quantile scope '" + s + "'");
}

LogBase parse_base(const std::string& s)
{
    if (s == "e") return LogBase::Natural;
    if (s == "2") return LogBase::Two;
    throw DomainError("unknown log base '" + s + "' (expected e or 2)");
}

std::pair<int, int> parse_range(const std::string& s)
{
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw DomainError("malformed range '" + s + "' (expected a:b)");
    }
}

void echo_config(Table& t, const CLI::App* sub)
{
    std::vector<std::pair<std::string, std::string>> meta{{"tool", "entropyts"}, {"version", kToolVersion},
                                                          {"command", sub->get_name()}};
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ";") + r;
        } else {
            value = opt->get_default_str();
        }
        std::string key = opt->get_name();
        key.erase(0, key.find_first_not_of('-'));
        std::replace(key.begin(), key.end(), '-', '_');
        meta.emplace_back(key, value);
    }
    for (const auto& kv : t.meta) {
        auto same = [&](const auto& e) { return e.first == kv.first; };
        const auto it = std::find_if(meta.begin(), meta.end(), same);
        if (it == meta.end()) meta.push_back(kv);
        else it->second = kv.second;
    }
    t.meta = std::move(meta);
}

void emit(const Table& t, const Common& c, std::ostream& out)
{
    auto write = [&](std::ostream& os) {
        if (c.format == "json") write_json(t, os);
        else write_csv(t, os);
    };
    if (c.out.empty()) {
        write(out);
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InputError("cannot open output file: " + c.out);
    write(f);
}

// ---------------------------------------------------------------------------

Table cmd_entropy(const Options& o)
{
    const TimeSeries s = load_series(o.c, 1)[0];
    std::vector<double> grid = o.q1s;
    if (grid.empty())
        for (int k = 1; k <= 10; ++k) grid.push_back(0.025 * k);
    Table t;
    t.columns = {"q1", "n", "count0", "count1", "count2", "entropy_naive", "entropy_grassberger"};
    for (int m = 1; m <= o.block; ++m) t.columns.push_back("cond_entropy_m" + std::to_string(m));
    for (double q1 : grid) {
        const SymbolSeries sym = symbolize(s, o.symbolize, q1, parse_scope(o.scope));
        const Histogram h = block_histogram(sym, 1);
        std::vector<Cell> row{q1, static_cast<std::int64_t>(sym.size())};
        for (Histogram::Key k = 0; k < 3; ++k) row.emplace_back(static_cast<std::int64_t>(h.count(k)));
        row.emplace_back(naive_entropy(h).bits);
        row.emplace_back(grassberger_entropy(h).bits);
        for (int m = 1; m <= o.block; ++m)
            row.emplace_back(conditional_block_entropy(sym, m, parse_estimator(o.estimator, Estimator::Naive)));
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_mi(const Options& o)
{
    const auto series = load_series(o.c, 2);
    const SymbolSeries x = symbolize(series[0], o.symbolize, o.q1, parse_scope(o.scope));
    const SymbolSeries y = symbolize(series[1], o.symbolize, o.q1, parse_scope(o.scope));
    const Estimator e = parse_estimator(o.estimator, Estimator::Naive);
    const auto [lo, hi] = parse_range(o.lag_range);
    if (lo > hi) throw DomainError("lag range is empty");
    Table t;
    t.meta = {{"x", series[0].name}, {"y", series[1].name}, {"n", std::to_string(x.size())}};
    t.columns = {"lag", "mi", "shuffle_mean", "shuffle_sd", "shuffle_q99", "n_pairs"};
    for (int lag = lo; lag <= hi; ++lag) {
        const EntropyEstimate mi = mutual_information(x, y, lag, e);
        const SurrogateStats fl = mi_noise_floor(x, y, lag, o.shuffles, o.c.seed, e);
        t.add_row({static_cast<std::int64_t>(lag), mi.bits, fl.mean, fl.sd, fl.q99,
                   static_cast<std::int64_t>(x.size() - static_cast<std::size_t>(std::abs(lag)))});
    }
    return t;
}

Table cmd_te(const Options& o)
{
    const auto series = load_series(o.c, 2);
    const SymbolSeries a = symbolize(series[0], o.symbolize, o.q1, parse_scope(o.scope));
    const SymbolSeries b = symbolize(series[1], o.symbolize, o.q1, parse_scope(o.scope));
    const Estimator e = parse_estimator(o.estimator, Estimator::Grassberger);
    const int mmax = o.m > 0 ? o.m : 4, lmax = o.l > 0 ? o.l : 4;
    Table t;
    t.meta = {{"n", std::to_string(a.size())}};
    t.columns = {"source", "target", "m", "l", "te", "shuffle_mean", "shuffle_sd", "et", "rea", "conditional_entropy"};
    struct Dir {
        const SymbolSeries* target;
        const SymbolSeries* source;
        std::string tname, sname;
    };
    const Dir dirs[2] = {{&a, &b, series[0].name, series[1].name}, {&b, &a, series[1].name, series[0].name}};
    for (const Dir& d : dirs) {
        for (int m = 1; m <= mmax; ++m) {
            for (int l = 1; l <= lmax; ++l) {
                const TeResult r = effective_transfer_entropy(*d.target, *d.source, m, l, o.shuffles, o.c.seed, e);
                t.add_row({d.sname, d.tname, static_cast<std::int64_t>(m), static_cast<std::int64_t>(l), r.te_bits,
                           r.shuffle_mean, r.shuffle_stderr, r.effective_te_bits, r.rea_fraction,
                           r.conditional_entropy_bits});
            }
        }
    }
    return t;
}

Table cmd_draws(const Options& o)
{
    const TimeSeries s = load_series(o.c, 1)[0];
    const auto draws = detect_draws(s.values);
    const DrawStatistics st = draw_statistics(draws);
    Table t;
    t.columns = {"statistic", "value", "start", "end"};
    auto add = [&](const std::string& k, double v) { t.add_row({k, v, std::string(), std::string()}); };
    auto add_span = [&](const std::string& k, const Draw& d) {
        t.add_row({k, d.magnitude, s.timestamps[d.start_index], s.timestamps[d.end_index]});
    };
    add("n_down", static_cast<double>(st.n_down));
    add("n_up", static_cast<double>(st.n_up));
    add("E_D", st.mean_down);
    add("sd_D", st.sd_down);
    add("E_U", st.mean_up);
    add("sd_U", st.sd_up);
    add("E_len_d", st.mean_len_down);
    add("sd_len_d", st.sd_len_down);
    add("E_len_u", st.mean_len_up);
    add("sd_len_u", st.sd_len_up);
    add("E_d", st.mean_drop);
    add("E_u", st.mean_rise);
    add_span("max_drawdown", st.max_drawdown);
    add_span("max_drawup", st.max_drawup);
    for (DrawSign sign : {DrawSign::Down, DrawSign::Up}) {
        const ConditionalLength cl = conditional_draw_length(draws, sign, o.q1);
        const std::string tag = sign == DrawSign::Down ? "d" : "u";
        add("cond_len_" + tag + "_threshold", cl.threshold);
        add("cond_len_" + tag + "_count", static_cast<double>(cl.count));
        add("cond_len_" + tag + "_mean", cl.mean);
        add("cond_len_" + tag + "_sd", cl.sd);
    }
    if (!o.no_fit) {
        FitOptions fo;
        fo.seed = o.c.seed;
        fo.n_boot = o.n_boot;
        if (o.stderr_method == "jackknife") fo.stderr_method = StderrMethod::Jackknife;
        else if (o.stderr_method == "bootstrap") fo.stderr_method = StderrMethod::Bootstrap;
        else throw DomainError("unknown stderr method '" + o.stderr_method + "'");
        for (DrawSign sign : {DrawSign::Down, DrawSign::Up}) {
            std::vector<double> mags;
            for (const Draw& d : draws)
                if (d.sign == sign) mags.push_back(std::abs(d.magnitude));
            if (mags.size() < 50) throw DomainError("stretched-exponential fit needs at least 50 draws of each sign (use --no-fit)");
            const DrawFit f = fit_stretched_exponential(mags, fo);
            const std::string tag = sign == DrawSign::Down ? "D" : "U";
            add("fit_" + tag + "_chi", f.chi);
            add("fit_" + tag + "_chi_se", f.chi_stderr);
            add("fit_" + tag + "_z", f.z);
            add("fit_" + tag + "_z_se", f.z_stderr);
            add("fit_" + tag + "_d0", f.d0);
            add("fit_" + tag + "_loglik", f.loglik);
        }
    }
    return t;
}

Table cmd_apen(const Options& o)
{
    const TimeSeries s = load_series(o.c, 1)[0];
    const int m = o.m > 0 ? o.m : 1;
    const LogBase base = parse_base(o.log_base);
    Table t;
    t.columns = {"timestamp", "apen", "r"};
    const std::size_t window = o.window == 0 ? s.size() : o.window;
    const auto res = apen_rolling(s.values, window, m, o.r_fraction, base);
    for (std::size_t k = 0; k < res.size(); ++k) t.add_row({s.timestamps[k + window - 1], res[k].value, res[k].params.r});
    if (o.boot_n > 0) {
        const std::size_t bl = o.boot_block > 0 ? o.boot_block : 10;
        const BootstrapSummary b = apen_block_bootstrap(s.values, m, Tolerance::fraction_of_sd(o.r_fraction), bl, o.boot_n,
                                                        o.c.seed, base);
        t.meta.emplace_back("bootstrap_mean", format_double(b.mean));
        t.meta.emplace_back("bootstrap_stderr", format_double(b.sd));
    }
    return t;
}

Table cmd_hmm(const Options& o, std::ostream& out)
{
    const TimeSeries s = load_series(o.c, 1)[0];
    EmOptions eo;
    eo.seed = o.c.seed;
    eo.restarts = o.restarts;
    eo.max_iter = o.max_iter;
    eo.tol = o.tol;
    const EmFit fit = fit_em(s.values, o.states, eo);
    const HmmModel& mdl = fit.model;
    const DecodedStates dec = decode(mdl, s.values);
    const HmmStderrs se = parameter_stderrs(mdl, s.values);
    const StateReport rep = state_report(mdl, dec.states);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    Table t;
    t.columns = {"parameter", "value", "stderr", "expected"};
    auto add = [&](const std::string& k, double v, double e = std::numeric_limits<double>::quiet_NaN(), double x = std::numeric_limits<double>::quiet_NaN()) {
        t.add_row({k, v, e, x});
    };
    const int N = mdl.n_states();
    for (int i = 0; i < N; ++i) add("mu_" + std::to_string(i), mdl.mu(i), se.mu(i));
    for (int i = 0; i < N; ++i) add("sigma_" + std::to_string(i), mdl.sigma(i), se.sigma(i));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) add("a_" + std::to_string(i) + std::to_string(j), mdl.transition(i, j), se.transition(i, j));
    for (int i = 0; i < N; ++i) add("initial_" + std::to_string(i), mdl.initial(i));
    add("loglik", dec.loglik);
    add("iterations", fit.iterations);
    add("converged", fit.converged ? 1.0 : 0.0);
    for (int i = 0; i < N; ++i) add("stationary_" + std::to_string(i), rep.stationary(i));
    add("stationary_entropy", rep.stationary_entropy);
    add("entropy_rate", rep.entropy_rate);
    for (int i = 0; i < N; ++i) add("expected_duration_" + std::to_string(i), rep.expected_durations(i));
    for (int i = 0; i < N; ++i) add("empirical_frequency_" + std::to_string(i), rep.empirical_frequencies(i));
    add("empirical_entropy", rep.empirical_entropy);
    add("empirical_conditional_entropy", rep.empirical_conditional_entropy);
    for (int i = 0; i < N; ++i) {
        std::size_t runs = 0;
        for (const auto& [len, cnt] : rep.duration_histograms[static_cast<std::size_t>(i)]) runs += cnt;
        const double a = mdl.transition(i, i);
        for (const auto& [len, cnt] : rep.duration_histograms[static_cast<std::size_t>(i)]) {
            const double expected = a < 1.0 ? static_cast<double>(runs) * state_duration_pmf(a, len) : nan;
            add("duration_" + std::to_string(i) + "_" + std::to_string(len), static_cast<double>(cnt), nan, expected);
        }
    }

    if (!o.states_out.empty()) {
        Table st;
        st.meta = {{"tool", "entropyts"}, {"version", kToolVersion}, {"command", "hmm"}, {"seed", std::to_string(o.c.seed)}};
        st.columns = {"timestamp", "observation", "state"};
        for (int i = 0; i < N; ++i) st.columns.push_back("p_state" + std::to_string(i));
        for (std::size_t k = 0; k < s.size(); ++k) {
            std::vector<Cell> row{s.timestamps[k], s.values[k], static_cast<std::int64_t>(dec.states[k])};
            for (int i = 0; i < N; ++i) row.emplace_back(dec.smoothed(static_cast<Eigen::Index>(k), i));
            st.add_row(std::move(row));
        }
        Common c = o.c;
        c.out = o.states_out;
        emit(st, c, out);
    }
    return t;
}

Table cmd_simulate(const Options& o)
{
    SuiteOptions so;
    so.replicates = o.replicates;
    so.base = parse_base(o.log_base);
    return figure_suite(o.suite, o.c.seed, so);
}

Table cmd_regress(const Options& o)
{
    if (o.c.inputs.size() != 1) throw DomainError("regress needs exactly one --input panel file");
    Panel p = ingest_panel(o.c.inputs[0], o.factors, o.conditioning);
    if (!o.no_standardize)
        for (auto& [name, z] : p.conditioning) z = standardize(z);
    if (o.drop_first > 0 || o.min_months > 0) p = filter_panel(p, o.drop_first, o.min_months);
    std::vector<Model> models;
    if (o.model == "all") {
        models = {Model::Capm};
        const bool vol = p.conditioning.count(kZVol) > 0, ap = p.conditioning.count(kZApEn) > 0;
        if (vol) models.push_back(Model::CondVol);
        if (ap) models.push_back(Model::CondApEn);
        if (vol && ap)
            models.insert(models.end(), {Model::CondCombined, Model::CondVolApEn, Model::CondVolCombined, Model::CondApEnCombined,
                                         Model::CondAll});
        models.push_back(Model::FF3);
        if (ap) models.insert(models.end(), {Model::FF3CondMkt, Model::FF3CondAll});
    } else {
        std::stringstream ss(o.model);
        std::string item;
        while (std::getline(ss, item, ',')) models.push_back(model_from_string(item));
    }
    Table t;
    t.columns = {"model", "term", "estimate", "stderr", "t"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (Model m : models) {
        const FitResult f = fit_model(p, m);
        const std::string name = to_string(m);
        for (std::size_t k = 0; k < f.names.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            t.add_row({name, f.names[k], f.coef(i), f.se(i), f.tstat(i)});
        }
        t.add_row({name, std::string("R2"), f.r2, nan, nan});
        t.add_row({name, std::string("adj_R2"), f.adj_r2, nan, nan});
        t.add_row({name, std::string("F"), f.f_stat, nan, nan});
        t.add_row({name, std::string("df_model"), static_cast<double>(f.df_model), nan, nan});
        t.add_row({name, std::string("df_resid"), static_cast<double>(f.df_resid), nan, nan});
        t.add_row({name, std::string("n_obs"), static_cast<double>(f.n_obs), nan, nan});
    }
    return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Information-theoretic toolkit for financial time series", "entropyts"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Options o;

    auto* entropy = app.add_subcommand("entropy", "symbol counts and entropies over a q1 grid");
    add_common(entropy, o.c, true);
    entropy->add_option("--q1", o.q1s, "quantile levels; default 0.025..0.25");
    entropy->add_option("--symbolize", o.symbolize, "draw, return or raw")->capture_default_str();
    entropy->add_option("--scope", o.scope, "pooled or per-sign draw quantiles")->capture_default_str();
    entropy->add_option("--block", o.block, "also report H(X_0 | m-history) for m = 1..block")->capture_default_str();
    entropy->add_option("--estimator", o.estimator, "naive or grassberger, for block entropies");

    auto* mi = app.add_subcommand("mi", "lagged mutual information with shuffle noise floor");
    add_common(mi, o.c, true);
    mi->add_option("--q1", o.q1, "quantile level")->capture_default_str();
    mi->add_option("--symbolize", o.symbolize, "draw, return or raw")->capture_default_str();
    mi->add_option("--scope", o.scope, "pooled or per-sign draw quantiles")->capture_default_str();
    mi->add_option("--lag-range", o.lag_range, "lags a:b")->capture_default_str();
    mi->add_option("--shuffles", o.shuffles, "shuffle replicates")->capture_default_str();
    mi->add_option("--estimator", o.estimator, "naive (default) or grassberger");

    auto* te = app.add_subcommand("te", "transfer entropy grid in both directions");
    add_common(te, o.c, true);
    te->add_option("--q1", o.q1, "quantile level")->capture_default_str();
    te->add_option("--symbolize", o.symbolize, "draw, return or raw")->capture_default_str();
    te->add_option("--scope", o.scope, "pooled or per-sign draw quantiles")->capture_default_str();
    te->add_option("--m", o.m, "largest target history (default 4)");
    te->add_option("--l", o.l, "largest source history (default 4)");
    te->add_option("--shuffles", o.shuffles, "shuffle replicates")->capture_default_str();
    te->add_option("--estimator", o.estimator, "grassberger (default) or naive");

    auto* dr = app.add_subcommand("draws", "drawdown/drawup statistics and stretched-exponential fits");
    add_common(dr, o.c, true);
    dr->add_option("--q1", o.q1, "quantile for the conditional length query")->capture_default_str();
    dr->add_option("--stderr", o.stderr_method, "jackknife or bootstrap")->capture_default_str();
    dr->add_option("--n-boot", o.n_boot, "bootstrap replicates")->capture_default_str();
    dr->add_flag("--no-fit", o.no_fit, "skip the stretched-exponential fits");

    auto* ap = app.add_subcommand("apen", "rolling approximate entropy");
    add_common(ap, o.c, true);
    ap->add_option("--window", o.window, "window length; 0 for the whole series")->capture_default_str();
    ap->add_option("--m", o.m, "block length (default 1)");
    ap->add_option("--r-fraction", o.r_fraction, "tolerance as a fraction of the window sd")->capture_default_str();
    ap->add_option("--log-base", o.log_base, "e or 2")->capture_default_str();
    ap->add_option("--bootstrap-n", o.boot_n, "whole-series block bootstrap replicates (0 = off)")->capture_default_str();
    ap->add_option("--bootstrap-block", o.boot_block, "bootstrap block length (default 10)");

    auto* hm = app.add_subcommand("hmm", "Gaussian HMM fit, Viterbi states and state report");
    add_common(hm, o.c, true);
    hm->add_option("--states", o.states, "number of states")->capture_default_str();
    hm->add_option("--restarts", o.restarts, "EM restarts")->capture_default_str();
    hm->add_option("--max-iter", o.max_iter, "EM iteration cap")->capture_default_str();
    hm->add_option("--tol", o.tol, "relative loglik tolerance")->capture_default_str();
    hm->add_option("--states-out", o.states_out, "write decoded states and posteriors here");

    auto* sim = app.add_subcommand("simulate", "figure suites from seeded simulations");
    add_common(sim, o.c, false);
    std::string names;
    for (const auto& n : suite_names()) names += (names.empty() ? "" : ", ") + n;
    sim->add_option("--suite", o.suite, names)->required()->check(CLI::IsMember(suite_names()));
    sim->add_option("--replicates", o.replicates, "override the suite's replicate count")->capture_default_str();
    sim->add_option("--log-base", o.log_base, "e or 2, for ApEn suites")->capture_default_str();

    auto* rg = app.add_subcommand("regress", "pooled OLS conditional factor models");
    add_common(rg, o.c, true);
    rg->add_option("--factors", o.factors, "factor CSV: date,mkt,smb,hml")->required();
    rg->add_option("--conditioning", o.conditioning, "conditioning CSV: date plus RV and/or ApEn columns");
    rg->add_option("--model", o.model, "'all' or comma list of model names")->capture_default_str();
    rg->add_option("--drop-first", o.drop_first, "drop the first k months of each entity")->capture_default_str();
    rg->add_option("--min-months", o.min_months, "require this many months per entity after dropping")->capture_default_str();
    rg->add_flag("--no-standardize", o.no_standardize, "use conditioning series as given");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Table t;
        if (sub == entropy) t = cmd_entropy(o);
        else if (sub == mi) t = cmd_mi(o);
        else if (sub == te) t = cmd_te(o);
        else if (sub == dr) t = cmd_draws(o);
        else if (sub == ap) t = cmd_apen(o);
        else if (sub == hm) t = cmd_hmm(o, out);
        else if (sub == sim) t = cmd_simulate(o);
        else t = cmd_regress(o);
        echo_config(t, sub);
        emit(t, o.c, out);
    } catch (const InputError& e) {
        err << "entropyts: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "entropyts: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace entropyts
