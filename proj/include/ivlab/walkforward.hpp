#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivlab/date.hpp"
#include "ivlab/feature_factory.hpp"
#include "ivlab/learners.hpp"
#include "ivlab/preprocess.hpp"

namespace ivlab {

/// Train on rows [train_begin, train_end), test on row `test` (= train_end).
struct Split {
    std::size_t train_begin = 0;
    std::size_t train_end = 0;
    std::size_t test = 0;
    bool operator==(const Split&) const = default;
};

struct SplitPlan {
    std::size_t window = 0;
    std::vector<Split> splits;
};

/// usable_days - window sliding splits. Throws (usage) unless usable_days > window >= 1.
SplitPlan make_splits(std::size_t usable_days, std::size_t window);

struct ScenarioSpec {
    int id = 0;
    SourceMask sources;
    std::string description;
};

const std::vector<ScenarioSpec>& all_scenarios();
const ScenarioSpec& scenario(int id);
/// "1,3,5" -> ids; duplicates and unknown ids are usage errors.
std::vector<int> parse_scenario_list(std::string_view text);
std::vector<ModelKind> parse_model_list(std::string_view text);

struct ModelConfig {
    LogisticParams logistic;
    SvmParams svm;
    AdaBoostParams adaboost;
    AdaBoostParams selector;
    std::optional<int> adf_lag;
};

struct IterationFit {
    PreprocessPlan plan;
    FittedModel model;
    Eigen::MatrixXd test_row;  // transformed features of the test day
};

/// Fits preprocessing and model on the split's training rows of an already
/// masked matrix. Throws ErrorKind::computation on a single-class window.
IterationFit fit_iteration(const Split& split, const FeatureMatrix& masked, ModelKind kind,
                           const ModelConfig& config, std::uint64_t seed);

struct PredictionRecord {
    int scenario = 0;
    ModelKind model = ModelKind::logistic;
    std::size_t split_index = 0;
    Date date;
    double prob_up = 0.0;
    int pred = 0;
    int label = 0;
    bool skipped = false;
    std::string skip_reason;
    std::string plan_json;   // filled when diagnostics are requested
    std::string model_json;
};

PredictionRecord run_iteration(const Split& split, std::size_t split_index, const FeatureMatrix& masked,
                               const ScenarioSpec& scenario, ModelKind kind, const ModelConfig& config,
                               std::uint64_t seed, bool keep_diagnostics = false);

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const int> predictions, std::span<const int> labels);
/// Mean of the per-class recalls. Throws (computation) when a class is absent.
double balanced_accuracy(std::span<const int> predictions, std::span<const int> labels);
double balanced_accuracy(const Confusion& cm);

struct CellResult {
    int scenario = 0;
    ModelKind model = ModelKind::logistic;
    Confusion cm;
    std::size_t n_skipped = 0;
    double balanced_accuracy = 0.0;  // NaN when the evaluated labels hold a single class
    std::vector<PredictionRecord> records;  // every split, skipped ones included
};

struct ClassDistribution {
    std::size_t down = 0;
    std::size_t up = 0;
};

struct ExperimentReport {
    SplitPlan plan;
    std::vector<CellResult> cells;  // scenario-major, then model, in request order
    ClassDistribution distribution;  // test labels over the split plan
    std::vector<std::string> errors;  // one line per skipped iteration
};

struct AblationOptions {
    std::vector<int> scenarios{1, 2, 3, 4, 5};
    std::vector<ModelKind> models{ModelKind::logistic, ModelKind::svm_rbf, ModelKind::adaboost};
    std::size_t window = 379;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    bool keep_diagnostics = false;
    ModelConfig config;
};

/// Seed for one (scenario, model, split) iteration, derived from the run seed.
std::uint64_t iteration_seed(std::uint64_t seed, int scenario, ModelKind kind, std::size_t split_index);

ExperimentReport run_ablation(const FeatureMatrix& matrix, const AblationOptions& options);

// report.csv / predictions.csv bodies (no header comments).
std::string format_report_csv(const ExperimentReport& report);
std::string format_predictions_csv(const ExperimentReport& report);

struct ReportRow {
    int scenario = 0;
    std::string model;
    double balanced_accuracy = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0, n_skipped = 0;
};

std::vector<ReportRow> parse_report_csv(std::string_view text, const std::string& source_name);
/// Scenario rows by model columns, balanced accuracy in percent.
std::string format_table(const std::vector<ReportRow>& rows);
std::string format_class_distribution(const ClassDistribution& dist);

}  // namespace ivlab
