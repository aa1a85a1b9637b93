#include "ivlab/preprocess.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "ivlab/error.hpp"
#include "ivlab/log.hpp"

namespace ivlab {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

int schwert_lag(std::size_t n) {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

double mackinnon_critical_5pct(int nobs) {
    const double n = nobs;
    return -2.86154 - 2.8903 / n - 4.234 / (n * n) - 40.040 / (n * n * n);
}

AdfResult adf_test(std::span<const double> x, int max_lag) {
    if (max_lag < 0) throw Error(ErrorKind::usage, "ADF lag order must be non-negative");
    const auto n = static_cast<Index>(x.size());
    if (n <= max_lag + 10) {
        throw Error(ErrorKind::computation, "ADF needs more than max_lag + 10 observations");
    }
    const Index p = max_lag;
    const Index rows = n - 1 - p;
    const Index k = p + 2;
    MatrixXd Z(rows, k);
    VectorXd dy(rows);
    for (Index r = 0; r < rows; ++r) {
        const Index t = r + p + 1;  // dx_t = x_t - x_{t-1}
        dy(r) = x[static_cast<std::size_t>(t)] - x[static_cast<std::size_t>(t - 1)];
        Z(r, 0) = x[static_cast<std::size_t>(t - 1)];
        for (Index l = 1; l <= p; ++l) {
            Z(r, l) = x[static_cast<std::size_t>(t - l)] - x[static_cast<std::size_t>(t - l - 1)];
        }
        Z(r, k - 1) = 1.0;
    }
    const Eigen::ColPivHouseholderQR<MatrixXd> qr(Z);
    if (qr.rank() < k) throw Error(ErrorKind::computation, "singular ADF regression matrix");
    const VectorXd beta = qr.solve(dy);
    const VectorXd resid = dy - Z * beta;
    const double rss = resid.squaredNorm();

    AdfResult out;
    out.lags = static_cast<int>(p);
    out.nobs = static_cast<int>(rows);
    out.critical_5pct = mackinnon_critical_5pct(out.nobs);
    const double scale = std::max(dy.squaredNorm(), Z.col(0).squaredNorm());
    if (rss <= 1e-24 * scale) {
        out.statistic = std::numeric_limits<double>::quiet_NaN();
        out.stationary = false;
        return out;
    }
    const double sigma2 = rss / static_cast<double>(rows - k);
    const MatrixXd ztz_inv = (Z.transpose() * Z).inverse();
    out.statistic = beta(0) / std::sqrt(sigma2 * ztz_inv(0, 0));
    out.stationary = out.statistic < out.critical_5pct;
    return out;
}

std::vector<std::string> PreprocessPlan::differenced_columns() const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < differenced.size(); ++j) {
        if (differenced[j]) out.push_back(input_columns[j]);
    }
    return out;
}

std::vector<std::string> PreprocessPlan::selected_columns() const {
    std::vector<std::string> out;
    for (const auto j : selected) out.push_back(input_columns[j]);
    return out;
}

std::vector<bool> fit_stationarity(const MatrixXd& train, std::optional<int> lag) {
    const int p = lag.value_or(schwert_lag(static_cast<std::size_t>(train.rows())));
    std::vector<bool> out(static_cast<std::size_t>(train.cols()), false);
    std::vector<double> col(static_cast<std::size_t>(train.rows()));
    for (Index j = 0; j < train.cols(); ++j) {
        for (Index r = 0; r < train.rows(); ++r) col[static_cast<std::size_t>(r)] = train(r, j);
        try {
            out[static_cast<std::size_t>(j)] = !adf_test(col, p).stationary;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::computation) throw;
            out[static_cast<std::size_t>(j)] = false;
        }
    }
    return out;
}

MatrixXd apply_stationarity(const MatrixXd& rows, const std::vector<bool>& differenced) {
    if (static_cast<std::size_t>(rows.cols()) != differenced.size()) {
        throw Error(ErrorKind::computation, "stationarity plan does not match column count");
    }
    if (rows.rows() < 2) throw Error(ErrorKind::computation, "differencing needs at least two rows");
    MatrixXd out = rows.bottomRows(rows.rows() - 1);
    for (Index j = 0; j < rows.cols(); ++j) {
        if (differenced[static_cast<std::size_t>(j)]) {
            out.col(j) -= rows.col(j).head(rows.rows() - 1);
        }
    }
    return out;
}

void fit_scaler(const MatrixXd& train, std::vector<std::size_t>& retained,
                std::vector<ScalerParams>& params) {
    retained.clear();
    params.clear();
    const auto n = static_cast<double>(train.rows());
    std::size_t dropped = 0;
    for (Index j = 0; j < train.cols(); ++j) {
        const double mean = train.col(j).mean();
        const double var = (train.col(j).array() - mean).square().sum() / n;
        const double sd = std::sqrt(var);
        if (!(sd > 1e-12 * (1.0 + std::abs(mean)))) {
            ++dropped;
            continue;
        }
        retained.push_back(static_cast<std::size_t>(j));
        params.push_back({mean, sd});
    }
    if (dropped > 0 && retained.empty()) {
        throw Error(ErrorKind::computation, "every training column has zero variance");
    }
}

MatrixXd standardize(const MatrixXd& X, const std::vector<std::size_t>& retained,
                     const std::vector<ScalerParams>& params) {
    MatrixXd out(X.rows(), static_cast<Index>(retained.size()));
    for (std::size_t c = 0; c < retained.size(); ++c) {
        out.col(static_cast<Index>(c)) =
            (X.col(static_cast<Index>(retained[c])).array() - params[c].mean) / params[c].std;
    }
    return out;
}

std::vector<std::size_t> select_features(const MatrixXd& X, const std::vector<int>& y,
                                         const AdaBoostParams& params) {
    const auto model = fit_adaboost(TrainSet{X, y}, params);
    const auto imp = feature_importances(model);
    const double mean = 1.0 / static_cast<double>(imp.size());
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < imp.size(); ++j) {
        if (imp[j] > mean) out.push_back(j);
    }
    if (out.empty()) {
        // Only possible when every importance equals the mean exactly.
        for (std::size_t j = 0; j < imp.size(); ++j) out.push_back(j);
    }
    return out;
}

PreprocessPlan fit_preprocess(const MatrixXd& train, const std::vector<std::string>& names,
                              const std::vector<int>& labels, const PreprocessOptions& options) {
    if (static_cast<std::size_t>(train.cols()) != names.size()) {
        throw Error(ErrorKind::computation, "column names do not match the training matrix");
    }
    if (static_cast<std::size_t>(train.rows()) != labels.size() + 1) {
        throw Error(ErrorKind::computation, "labels must cover every training row after the first");
    }
    PreprocessPlan plan;
    plan.input_columns = names;
    plan.differenced = fit_stationarity(train, options.adf_lag);
    const MatrixXd transformed = apply_stationarity(train, plan.differenced);

    plan.standardized = options.standardize;
    if (options.standardize) {
        fit_scaler(transformed, plan.retained, plan.scaler);
    } else {
        for (std::size_t j = 0; j < names.size(); ++j) plan.retained.push_back(j);
    }
    if (options.select) {
        const MatrixXd X = options.standardize ? standardize(transformed, plan.retained, plan.scaler)
                                               : MatrixXd(transformed);
        for (const auto c : select_features(X, labels, options.selector)) {
            plan.selected.push_back(plan.retained[c]);
        }
    } else {
        plan.selected = plan.retained;
    }
    return plan;
}

MatrixXd apply_preprocess(const MatrixXd& rows, const PreprocessPlan& plan) {
    const MatrixXd transformed = apply_stationarity(rows, plan.differenced);
    MatrixXd out(transformed.rows(), static_cast<Index>(plan.selected.size()));
    std::size_t r = 0;
    for (std::size_t c = 0; c < plan.selected.size(); ++c) {
        const auto j = plan.selected[c];
        auto col = transformed.col(static_cast<Index>(j)).array();
        if (plan.standardized) {
            while (plan.retained[r] != j) ++r;  // selected is an ordered subset of retained
            out.col(static_cast<Index>(c)) = (col - plan.scaler[r].mean) / plan.scaler[r].std;
        } else {
            out.col(static_cast<Index>(c)) = col;
        }
    }
    return out;
}

std::string plan_record(const PreprocessPlan& plan) {
    nlohmann::json j;
    j["differenced"] = plan.differenced_columns();
    j["selected"] = plan.selected_columns();
    if (plan.standardized) {
        nlohmann::json scaler = nlohmann::json::object();
        for (std::size_t c = 0; c < plan.retained.size(); ++c) {
            scaler[plan.input_columns[plan.retained[c]]] = {plan.scaler[c].mean, plan.scaler[c].std};
        }
        j["scaler"] = std::move(scaler);
    }
    return j.dump();
}

}  // namespace ivlab
