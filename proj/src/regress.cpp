#include "entropyts/regress.hpp"

#include <algorithm>
#include <set>

#include "entropyts/stats.hpp"

namespace entropyts {

void Panel::validate() const
{
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& r : rows) {
        if (!seen.emplace(r.entity, r.date).second)
            throw DomainError("panel: duplicate row for entity " + r.entity + " on " + r.date);
    }
}

std::vector<double> standardize(std::span<const double> z)
{
    if (z.size() < 2) throw DomainError("standardize: need at least 2 values");
    const double m = mean(z), s = sample_sd(z);
    if (!(s > 0.0)) throw DomainError("standardize: constant series");
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = (z[i] - m) / s;
    return out;
}

DatedSeries standardize(const DatedSeries& z)
{
    std::vector<double> v;
    v.reserve(z.size());
    for (const auto& [d, x] : z) v.push_back(x);
    const auto s = standardize(v);
    DatedSeries out;
    std::size_t i = 0;
    for (const auto& [d, x] : z) out.emplace_hint(out.end(), d, s[i++]);
    return out;
}

const char* to_string(Model m)
{
    switch (m) {
    case Model::Capm: return "capm";
    case Model::CondVol: return "cond-vol";
    case Model::CondApEn: return "cond-apen";
    case Model::CondCombined: return "cond-combined";
    case Model::CondVolApEn: return "cond-vol-apen";
    case Model::CondVolCombined: return "cond-vol-combined";
    case Model::CondApEnCombined: return "cond-apen-combined";
    case Model::CondAll: return "cond-all";
    case Model::FF3: return "ff3";
    case Model::FF3CondMkt: return "ff3-cond-mkt";
    case Model::FF3CondAll: return "ff3-cond-all";
    }
    return "?";
}

std::vector<Model> all_models()
{
    return {Model::Capm, Model::CondVol, Model::CondApEn, Model::CondCombined, Model::CondVolApEn, Model::CondVolCombined,
            Model::CondApEnCombined, Model::CondAll, Model::FF3, Model::FF3CondMkt, Model::FF3CondAll};
}

Model model_from_string(const std::string& s)
{
    for (Model m : all_models())
        if (s == to_string(m)) return m;
    throw DomainError("unknown regression model '" + s + "'");
}

const double* lagged_value(const DatedSeries& z, const std::string& date)
{
    if (date.size() < 7) throw DomainError("lagged_value: malformed date " + date);
    const std::string month_start = date.substr(0, 7) + "-01";
    auto it = z.lower_bound(month_start);
    if (it == z.begin()) return nullptr;
    --it;
    return &it->second;
}

namespace {

struct Needs {
    bool vol = false, apen = false;
};

Needs needs(Model m)
{
    switch (m) {
    case Model::Capm:
    case Model::FF3: return {false, false};
    case Model::CondVol: return {true, false};
    case Model::CondApEn:
    case Model::FF3CondMkt:
    case Model::FF3CondAll: return {false, true};
    default: return {true, true};
    }
}

std::vector<std::string> columns(Model m)
{
    const std::string zr = "mkt*Z_" + kZVol, za = "mkt*Z_" + kZApEn, zc = "mkt*Z_" + kZApEn + "*Z_" + kZVol;
    switch (m) {
    case Model::Capm: return {"alpha", "mkt"};
    case Model::CondVol: return {"alpha", "mkt", zr};
    case Model::CondApEn: return {"alpha", "mkt", za};
    case Model::CondCombined: return {"alpha", "mkt", zc};
    case Model::CondVolApEn: return {"alpha", "mkt", zr, za};
    case Model::CondVolCombined: return {"alpha", "mkt", zr, zc};
    case Model::CondApEnCombined: return {"alpha", "mkt", za, zc};
    case Model::CondAll: return {"alpha", "mkt", zr, za, zc};
    case Model::FF3: return {"alpha", "mkt", "smb", "hml"};
    case Model::FF3CondMkt: return {"alpha", "mkt", "smb", "hml", za};
    case Model::FF3CondAll: return {"alpha", "mkt", "smb", "hml", za, "smb*Z_" + kZApEn, "hml*Z_" + kZApEn};
    }
    return {};
}

const DatedSeries& series_named(const Panel& p, const std::string& name)
{
    auto it = p.conditioning.find(name);
    if (it == p.conditioning.end()) throw DomainError("build_design: conditioning series '" + name + "' missing");
    return it->second;
}

}  // namespace

Design build_design(const Panel& panel, Model model)
{
    panel.validate();
    const Needs nd = needs(model);
    const DatedSeries* zv = nd.vol ? &series_named(panel, kZVol) : nullptr;
    const DatedSeries* za = nd.apen ? &series_named(panel, kZApEn) : nullptr;

    Design d;
    d.names = columns(model);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < panel.rows.size(); ++i) {
        const PanelRow& r = panel.rows[i];
        auto f = panel.factors.find(r.date);
        if (f == panel.factors.end()) throw DomainError("build_design: no factor row for date " + r.date);
        const FactorRow& fr = f->second;
        double v = 0.0, a = 0.0;
        if (zv) {
            const double* p = lagged_value(*zv, r.date);
            if (!p) continue;
            v = *p;
        }
        if (za) {
            const double* p = lagged_value(*za, r.date);
            if (!p) continue;
            a = *p;
        }
        const double m = fr.mkt;
        std::vector<double> x;
        switch (model) {
        case Model::Capm: x = {1, m}; break;
        case Model::CondVol: x = {1, m, m * v}; break;
        case Model::CondApEn: x = {1, m, m * a}; break;
        case Model::CondCombined: x = {1, m, m * a * v}; break;
        case Model::CondVolApEn: x = {1, m, m * v, m * a}; break;
        case Model::CondVolCombined: x = {1, m, m * v, m * a * v}; break;
        case Model::CondApEnCombined: x = {1, m, m * a, m * a * v}; break;
        case Model::CondAll: x = {1, m, m * v, m * a, m * a * v}; break;
        case Model::FF3: x = {1, m, fr.smb, fr.hml}; break;
        case Model::FF3CondMkt: x = {1, m, fr.smb, fr.hml, m * a}; break;
        case Model::FF3CondAll: x = {1, m, fr.smb, fr.hml, m * a, fr.smb * a, fr.hml * a}; break;
        }
        rows.push_back(std::move(x));
        d.rows_used.push_back(i);
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(d.names.size());
    d.X.resize(n, k);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) d.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        d.y(i) = panel.rows[d.rows_used[static_cast<std::size_t>(i)]].excess_return;
    }
    return d;
}

Panel filter_panel(const Panel& panel, std::size_t drop_first, std::size_t min_obs)
{
    std::map<std::string, std::vector<std::size_t>> by_entity;
    for (std::size_t i = 0; i < panel.rows.size(); ++i) by_entity[panel.rows[i].entity].push_back(i);
    std::vector<bool> keep(panel.rows.size(), false);
    for (auto& [e, idx] : by_entity) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return panel.rows[a].date < panel.rows[b].date; });
        if (idx.size() < drop_first + min_obs) continue;
        for (std::size_t k = drop_first; k < idx.size(); ++k) keep[idx[k]] = true;
    }
    Panel out;
    out.factors = panel.factors;
    out.conditioning = panel.conditioning;
    for (std::size_t i = 0; i < panel.rows.size(); ++i)
        if (keep[i]) out.rows.push_back(panel.rows[i]);
    return out;
}

FitResult fit_model(const Panel& panel, Model model)
{
    Design d = build_design(panel, model);
    return pooled_ols(d.X, d.y, d.names);
}

}  // namespace entropyts
