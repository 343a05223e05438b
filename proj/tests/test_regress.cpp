#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "entropyts/error.hpp"
#include "entropyts/random.hpp"
#include "entropyts/regress.hpp"

using namespace entropyts;

namespace {

std::string month(int k)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-28", 2000 + k / 12, k % 12 + 1);
    return buf;
}

/// Monthly panel; Z values dated on the month before each return.
Panel synthetic_panel(int entities, int months, double noise, std::uint64_t seed, bool interactions = true)
{
    Rng rng(seed);
    Panel p;
    DatedSeries rv, ap;
    for (int k = -1; k < months; ++k) {
        rv[month(k)] = rng.normal();
        ap[month(k)] = rng.normal();
    }
    p.conditioning[kZVol] = rv;
    p.conditioning[kZApEn] = ap;
    for (int k = 0; k < months; ++k) p.factors[month(k)] = {rng.normal(), rng.normal(), rng.normal()};
    for (int e = 0; e < entities; ++e) {
        for (int k = 0; k < months; ++k) {
            const FactorRow& f = p.factors[month(k)];
            const double zr = rv[month(k - 1)], za = ap[month(k - 1)];
            const double cond = interactions ? 0.03 * zr + 0.04 * za + 0.02 * za * zr : 0.0;
            const double r = 0.2 + (0.5 + cond) * f.mkt + 0.1 * f.smb - 0.05 * f.hml + noise * rng.normal();
            p.rows.push_back({"f" + std::to_string(e), month(k), r});
        }
    }
    return p;
}

bool nested(const std::vector<std::string>& small, const std::vector<std::string>& big)
{
    const std::set<std::string> b(big.begin(), big.end());
    for (const auto& s : small)
        if (!b.count(s)) return false;
    return true;
}

}  // namespace

TEST(Regress, StandardizeMoments)
{
    const std::vector<double> z{1.0, 4.0, 2.0, 8.0, 5.0};
    const auto s = standardize(z);
    double m = 0.0, v = 0.0;
    for (double x : s) m += x;
    m /= 5;
    for (double x : s) v += (x - m) * (x - m);
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(std::sqrt(v / 4), 1.0, 1e-12);
    std::vector<double> affine;
    for (double x : z) affine.push_back(3.0 * x - 7.0);
    const auto sa = standardize(affine);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(sa[i], s[i], 1e-12);
    const auto again = standardize(s);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(again[i], s[i], 1e-12);
    EXPECT_THROW(standardize(std::vector<double>{2.0, 2.0}), DomainError);
}

TEST(Regress, LaggedValueIsStrictlyBeforeMonth)
{
    DatedSeries z{{"2001-01-15", 1.0}, {"2001-01-31", 2.0}, {"2001-02-01", 3.0}};
    ASSERT_NE(lagged_value(z, "2001-02-20"), nullptr);
    EXPECT_EQ(*lagged_value(z, "2001-02-20"), 2.0);
    EXPECT_EQ(*lagged_value(z, "2001-03-01"), 3.0);
    EXPECT_EQ(lagged_value(z, "2001-01-31"), nullptr);
}

TEST(Regress, DesignColumns)
{
    const Panel p = synthetic_panel(2, 6, 0.1, 1);
    EXPECT_EQ(build_design(p, Model::Capm).names, (std::vector<std::string>{"alpha", "mkt"}));
    EXPECT_EQ(build_design(p, Model::CondCombined).names, (std::vector<std::string>{"alpha", "mkt", "mkt*Z_ApEn*Z_RV"}));
    const Design d = build_design(p, Model::FF3CondAll);
    EXPECT_EQ(d.X.cols(), 7);
    EXPECT_EQ(d.X.rows(), 12);
    EXPECT_TRUE((d.X.col(0).array() == 1.0).all());
    for (Model m : all_models()) EXPECT_EQ(model_from_string(to_string(m)), m);
}

TEST(Regress, RowsWithoutLaggedZAreDropped)
{
    Panel p = synthetic_panel(2, 6, 0.1, 2);
    p.conditioning[kZApEn].erase(month(-1));
    const Design d = build_design(p, Model::CondApEn);
    EXPECT_EQ(d.X.rows(), 10);
    EXPECT_EQ(build_design(p, Model::Capm).X.rows(), 12);
    Panel q = p;
    q.factors.erase(month(3));
    EXPECT_THROW(build_design(q, Model::Capm), DomainError);
}

TEST(Regress, ZeroNoiseExactRecovery)
{
    const Panel p = synthetic_panel(5, 24, 0.0, 3);
    const Design d = build_design(p, Model::CondAll);
    Eigen::VectorXd y = d.y;
    // remove the smb/hml terms absent from CondAll
    for (std::size_t i = 0; i < d.rows_used.size(); ++i) {
        const FactorRow& f = p.factors.at(p.rows[d.rows_used[i]].date);
        y(static_cast<Eigen::Index>(i)) -= 0.1 * f.smb - 0.05 * f.hml;
    }
    const FitResult f = pooled_ols(d.X, y, d.names);
    const Eigen::VectorXd want = (Eigen::VectorXd(5) << 0.2, 0.5, 0.03, 0.04, 0.02).finished();
    EXPECT_LT((f.coef - want).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Regress, NoisyRecoveryAndFConsistency)
{
    const Panel p = synthetic_panel(200, 60, 0.5, 4, false);
    const FitResult f = fit_model(p, Model::FF3);
    const double want[4] = {0.2, 0.5, 0.1, -0.05};
    for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(f.coef(i) - want[i]), 3 * f.se(i)) << i;
    EXPECT_EQ(f.n_obs, 12000u);
    EXPECT_EQ(f.df_resid, 12000 - 4);
    const double f_from_r2 = (f.r2 / f.df_model) / ((1 - f.r2) / f.df_resid);
    EXPECT_NEAR(f.f_stat, f_from_r2, 1e-8 * f.f_stat);
}

TEST(Regress, NestedModelsHaveMonotoneR2)
{
    const Panel p = synthetic_panel(50, 36, 0.3, 5);
    std::vector<FitResult> fits;
    for (Model m : all_models()) fits.push_back(fit_model(p, m));
    for (const auto& a : fits)
        for (const auto& b : fits)
            if (nested(a.names, b.names)) EXPECT_LE(a.r2, b.r2 + 1e-12);
}

TEST(Regress, ZeroConditioningIsRankDeficient)
{
    Panel p = synthetic_panel(10, 24, 0.3, 6);
    for (auto& [d, v] : p.conditioning[kZApEn]) v = 0.0;
    const Design dc = build_design(p, Model::CondApEn);
    EXPECT_TRUE(dc.X.col(2).isZero());
    EXPECT_THROW(fit_model(p, Model::CondApEn), DomainError);
    const Design dcapm = build_design(p, Model::Capm);
    EXPECT_TRUE(dc.X.leftCols(2).isApprox(dcapm.X));
}

TEST(Regress, TStatsScaleInvariant)
{
    const Panel p = synthetic_panel(20, 24, 0.3, 7);
    const Design d = build_design(p, Model::FF3);
    Eigen::MatrixXd X = d.X;
    X.col(2) *= 1000.0;
    const FitResult a = pooled_ols(d.X, d.y, d.names), b = pooled_ols(X, d.y, d.names);
    EXPECT_NEAR(a.tstat(2), b.tstat(2), 1e-8 * std::abs(a.tstat(2)));
    EXPECT_NEAR(a.coef(2), 1000.0 * b.coef(2), 1e-10);
}

TEST(Regress, LagAlignmentIsByDate)
{
    Panel p = synthetic_panel(5, 24, 0.3, 8);
    const FitResult a = fit_model(p, Model::CondApEn);
    // move each Z observation to a later day of the same month
    for (auto& [name, z] : p.conditioning) {
        DatedSeries moved;
        for (const auto& [d, v] : z) moved[d.substr(0, 8) + "01"] = v;
        z = moved;
    }
    const FitResult b = fit_model(p, Model::CondApEn);
    EXPECT_LT((a.coef - b.coef).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Regress, FilterPanel)
{
    const Panel p = synthetic_panel(3, 30, 0.1, 9);
    const Panel q = filter_panel(p, 6, 24);
    EXPECT_EQ(q.rows.size(), 72u);
    EXPECT_TRUE(filter_panel(p, 10, 24).rows.empty());
}
