#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ivlab {

enum class ModelKind { logistic, svm_rbf, adaboost };

std::string_view to_string(ModelKind kind);
/// Accepts "logistic", "svm" (or "svm_rbf"), "adaboost".
ModelKind parse_model_kind(std::string_view text);

/// Rows are days in temporal order, labels are 0/1.
struct TrainSet {
    Eigen::MatrixXd X;
    std::vector<int> y;

    /// Throws unless shapes agree, values are finite, labels are 0/1 and both classes occur.
    void validate() const;
};

struct LogisticParams {
    double reg_strength = 1.0;
    double tol = 1e-4;
    int max_iter = 1000;
};

struct SvmParams {
    double C = 1.0;
    std::optional<double> gamma;  // empty = 1 / (d * Var(X))
    double tol = 1e-3;
    long max_iter = 10'000'000;
};

struct AdaBoostParams {
    int n_rounds = 50;
    double learning_rate = 1.0;
};

struct LogisticModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // objective after each accepted step, starting at w = 0
};

struct SvmModel {
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd dual_coef;  // alpha_i * y_i for each support vector
    Eigen::VectorXd alpha;      // all training multipliers, in training order
    double bias = 0.0;          // decision = sum dual_coef K(sv, x) + bias
    double gamma = 0.0;
    double C = 0.0;
    double platt_a = 0.0;       // P(up | f) = 1 / (1 + exp(platt_a * f + platt_b))
    double platt_b = 0.0;
    long iterations = 0;
    bool converged = false;
};

/// Predicts +polarity when x[feature] > threshold, otherwise -polarity.
struct Stump {
    Eigen::Index feature = 0;
    double threshold = 0.0;
    int polarity = 1;
    double stage_weight = 0.0;
    double weighted_error = 0.0;

    int vote(double value) const { return value > threshold ? polarity : -polarity; }
};

struct AdaBoostModel {
    std::vector<Stump> stumps;
    std::vector<std::vector<double>> weight_trace;  // sample weights entering each round
};

struct FittedModel {
    ModelKind kind = ModelKind::logistic;
    Eigen::Index n_features = 0;
    std::uint64_t seed = 0;
    std::variant<LogisticModel, SvmModel, AdaBoostModel> params;
};

/// Bit-level equality of every fitted parameter.
bool identical(const FittedModel& a, const FittedModel& b);

// Logistic regression: sum of log-losses + reg/2 * ||w||^2 (bias unpenalized).
double logistic_objective(const Eigen::MatrixXd& X, std::span<const int> y, double reg,
                          const Eigen::VectorXd& w, double b);
/// Gradient with respect to (w, b); the last entry is the bias component.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, std::span<const int> y, double reg,
                                  const Eigen::VectorXd& w, double b);
FittedModel fit_logistic(const TrainSet& train, const LogisticParams& params = {},
                         std::uint64_t seed = 0);

// RBF-kernel SVM.
double auto_gamma(const Eigen::MatrixXd& X);
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma);
/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij with y mapped to +-1.
double svm_dual_objective(const Eigen::MatrixXd& K, std::span<const int> y, const Eigen::VectorXd& alpha);
FittedModel fit_svm_rbf(const TrainSet& train, const SvmParams& params = {}, std::uint64_t seed = 0);

// Discrete AdaBoost over decision stumps.
FittedModel fit_adaboost(const TrainSet& train, const AdaBoostParams& params = {},
                         std::uint64_t seed = 0);
/// Normalized sum of |stage weight| per feature. Throws unless kind == adaboost.
std::vector<double> feature_importances(const FittedModel& model);

/// Raw decision score (logit, SVM margin, or stage-weighted vote).
Eigen::VectorXd decision_function(const FittedModel& model, const Eigen::MatrixXd& X);

struct Prediction {
    std::vector<int> labels;           // 1 iff probability > 0.5
    std::vector<double> probabilities;  // P(up)
};

Prediction predict(const FittedModel& model, const Eigen::MatrixXd& X);

/// One-line JSON record of the fitted parameters.
std::string model_record(const FittedModel& model);

}  // namespace ivlab
