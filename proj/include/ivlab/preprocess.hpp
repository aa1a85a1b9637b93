#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ivlab/learners.hpp"

namespace ivlab {

struct AdfResult {
    double statistic = 0.0;     // t-ratio of the lagged-level coefficient; NaN on an exact fit
    double critical_5pct = 0.0;
    bool stationary = false;
    int lags = 0;
    int nobs = 0;               // regression rows
};

/// floor(12 * (n / 100)^(1/4))
int schwert_lag(std::size_t n);

/// MacKinnon (2010) 5% critical value, constant-only, one variable.
double mackinnon_critical_5pct(int nobs);

/// Augmented Dickey-Fuller with a constant and a fixed lag order: regresses
/// dx_t on x_{t-1}, dx_{t-1..t-max_lag} and a constant. Throws
/// ErrorKind::computation on a singular design or a too-short series.
AdfResult adf_test(std::span<const double> x, int max_lag);

struct ScalerParams {
    double mean = 0.0;
    double std = 1.0;
    bool operator==(const ScalerParams&) const = default;
};

struct PreprocessOptions {
    bool standardize = true;
    bool select = true;
    std::optional<int> adf_lag;  // empty = Schwert rule on the training length
    AdaBoostParams selector;
};

/// Per-window transformation fitted on training rows only. Column indices
/// refer to the input columns.
struct PreprocessPlan {
    std::vector<std::string> input_columns;
    std::vector<bool> differenced;
    bool standardized = false;
    std::vector<std::size_t> retained;    // columns surviving the zero-variance rule
    std::vector<ScalerParams> scaler;      // aligned with `retained`
    std::vector<std::size_t> selected;    // ordered subset of `retained`

    std::vector<std::string> differenced_columns() const;
    std::vector<std::string> selected_columns() const;
    bool operator==(const PreprocessPlan&) const = default;
};

/// Differencing flags: true where ADF does not reject a unit root. Columns
/// whose regression is singular are left as they are.
std::vector<bool> fit_stationarity(const Eigen::MatrixXd& train, std::optional<int> lag = std::nullopt);

/// First-differences the flagged columns and drops the leading row.
Eigen::MatrixXd apply_stationarity(const Eigen::MatrixXd& rows, const std::vector<bool>& differenced);

/// Population mean/std per column; columns with zero spread are not retained.
void fit_scaler(const Eigen::MatrixXd& train, std::vector<std::size_t>& retained,
                std::vector<ScalerParams>& params);

/// Scales the retained columns (output has retained.size() columns).
Eigen::MatrixXd standardize(const Eigen::MatrixXd& X, const std::vector<std::size_t>& retained,
                            const std::vector<ScalerParams>& params);

/// Columns whose AdaBoost importance exceeds the mean importance 1/d, in
/// column order. Throws on a single-class label vector.
std::vector<std::size_t> select_features(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                         const AdaBoostParams& params = {});

/// Fits the whole plan. `train` holds the raw training rows; `labels` belong
/// to rows 1..n-1 (the first row is consumed by differencing).
PreprocessPlan fit_preprocess(const Eigen::MatrixXd& train, const std::vector<std::string>& names,
                              const std::vector<int>& labels, const PreprocessOptions& options);

/// Replays a plan. `rows` must include one leading row preceding the rows to
/// transform; the output has rows.rows() - 1 rows and plan.selected.size() columns.
Eigen::MatrixXd apply_preprocess(const Eigen::MatrixXd& rows, const PreprocessPlan& plan);

/// One-line JSON record for --dump-plan.
std::string plan_record(const PreprocessPlan& plan);

}  // namespace ivlab
