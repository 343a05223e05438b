#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropyts/error.hpp"

namespace entropyts {

struct PanelRow {
    std::string entity;
    std::string date;  ///< ISO-8601 YYYY-MM-DD
    double excess_return = 0.0;
};

struct FactorRow {
    double mkt = 0.0;
    double smb = 0.0;
    double hml = 0.0;
};

/// Dates are ISO strings, so lexicographic order is chronological.
using DatedSeries = std::map<std::string, double>;

inline const std::string kZVol = "RV";
inline const std::string kZApEn = "ApEn";

struct Panel {
    std::vector<PanelRow> rows;
    std::map<std::string, FactorRow> factors;
    std::map<std::string, DatedSeries> conditioning;  ///< name -> dated values

    /// Throws on duplicate (entity, date).
    void validate() const;
};

/// Mean 0, sd 1 (1/(n-1)) over the full sample.
std::vector<double> standardize(std::span<const double> z);
DatedSeries standardize(const DatedSeries& z);

enum class Model {
    Capm,              ///< [1, mkt]
    CondVol,           ///< + mkt*Z_RV
    CondApEn,          ///< + mkt*Z_ApEn
    CondCombined,      ///< + mkt*Z_ApEn*Z_RV
    CondVolApEn,       ///< + mkt*Z_RV + mkt*Z_ApEn
    CondVolCombined,   ///< + mkt*Z_RV + mkt*Z_ApEn*Z_RV
    CondApEnCombined,  ///< + mkt*Z_ApEn + mkt*Z_ApEn*Z_RV
    CondAll,           ///< all three interactions
    FF3,               ///< [1, mkt, smb, hml]
    FF3CondMkt,        ///< + mkt*Z_ApEn
    FF3CondAll,        ///< + mkt*Z_ApEn + smb*Z_ApEn + hml*Z_ApEn
};

const char* to_string(Model m);
Model model_from_string(const std::string& s);
std::vector<Model> all_models();

struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> names;
    std::vector<std::size_t> rows_used;  ///< indices into Panel::rows
};

/// Last value dated strictly before the first day of date's month.
const double* lagged_value(const DatedSeries& z, const std::string& date);

/// Rows without a lagged Z are dropped; a missing factor date is an error.
Design build_design(const Panel& panel, Model model);

/// Drops the first drop_first observations of each entity and then any
/// entity with fewer than min_obs rows left.
Panel filter_panel(const Panel& panel, std::size_t drop_first, std::size_t min_obs);

struct FitResult {
    std::vector<std::string> names;
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    Eigen::VectorXd tstat;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double f_stat = 0.0;  ///< all non-intercept coefficients zero
    int df_model = 0;
    int df_resid = 0;
    std::size_t n_obs = 0;
    double sse = 0.0;
    double sst = 0.0;
};

/// OLS via column-pivoting Householder QR; classical standard errors.
/// Column 0 is taken as the intercept for R^2 and F.
template <typename DX, typename DY>
FitResult pooled_ols(const Eigen::MatrixBase<DX>& X, const Eigen::MatrixBase<DY>& y, std::vector<std::string> names = {})
{
    using Mat = Eigen::MatrixXd;
    const Eigen::Index n = X.rows(), k = X.cols();
    if (y.size() != n) throw DomainError("pooled_ols: design and response lengths differ");
    if (k < 1 || n <= k) throw DomainError("pooled_ols: need more observations than columns");
    const Mat Xd = X.template cast<double>();
    const Eigen::VectorXd yd = y.template cast<double>();
    Eigen::ColPivHouseholderQR<Mat> qr(Xd);
    if (qr.rank() < k) throw DomainError("pooled_ols: design matrix is rank deficient");

    FitResult f;
    f.coef = qr.solve(yd);
    const Eigen::VectorXd resid = yd - Xd * f.coef;
    f.sse = resid.squaredNorm();
    f.sst = (yd.array() - yd.mean()).square().sum();
    f.n_obs = static_cast<std::size_t>(n);
    f.df_resid = static_cast<int>(n - k);
    f.df_model = static_cast<int>(k - 1);

    const Mat R = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Mat Rinv = R.template triangularView<Eigen::Upper>().solve(Mat::Identity(k, k));
    const Mat cov_perm = Rinv * Rinv.transpose();
    const auto& P = qr.colsPermutation();
    const Mat unscaled = P * cov_perm * P.transpose();
    const double sigma2 = f.sse / f.df_resid;
    f.se = (sigma2 * unscaled.diagonal()).cwiseSqrt();
    f.tstat = Eigen::VectorXd(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (f.se(i) > 0.0) f.tstat(i) = f.coef(i) / f.se(i);
        else f.tstat(i) = f.coef(i) == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), f.coef(i));
    }
    f.r2 = f.sst > 0.0 ? 1.0 - f.sse / f.sst : 0.0;
    f.adj_r2 = 1.0 - (1.0 - f.r2) * static_cast<double>(n - 1) / static_cast<double>(f.df_resid);
    if (f.df_model > 0) {
        const double explained = (f.sst - f.sse) / f.df_model;
        const double noise = f.sse / f.df_resid;
        f.f_stat = noise > 0.0 ? explained / noise : std::numeric_limits<double>::infinity();
    } else {
        f.f_stat = std::numeric_limits<double>::quiet_NaN();
    }
    if (names.empty())
        for (Eigen::Index i = 0; i < k; ++i) names.push_back("x" + std::to_string(i));
    if (static_cast<Eigen::Index>(names.size()) != k) throw DomainError("pooled_ols: name count differs from column count");
    f.names = std::move(names);
    return f;
}

FitResult fit_model(const Panel& panel, Model model);

}  // namespace entropyts
