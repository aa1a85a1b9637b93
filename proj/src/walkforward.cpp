#include "ivlab/walkforward.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "ivlab/csv.hpp"
#include "ivlab/error.hpp"

namespace ivlab {

SplitPlan make_splits(std::size_t usable_days, std::size_t window) {
    if (window < 1) throw Error(ErrorKind::usage, "window must be at least 1");
    if (window >= usable_days) {
        throw Error(ErrorKind::usage, "window (" + std::to_string(window) +
                                          ") must be smaller than the usable days (" +
                                          std::to_string(usable_days) + ")");
    }
    SplitPlan plan;
    plan.window = window;
    plan.splits.reserve(usable_days - window);
    for (std::size_t i = 0; i + window < usable_days; ++i) {
        plan.splits.push_back({i, i + window, i + window});
    }
    return plan;
}

const std::vector<ScenarioSpec>& all_scenarios() {
    static const std::vector<ScenarioSpec> specs = {
        {1, {Source::market, Source::option}, "Market data"},
        {2, {Source::news, Source::wikipedia}, "News counts, Wikipedia traffic"},
        {3, {Source::market, Source::option, Source::wikipedia}, "Market data, Wikipedia traffic"},
        {4, {Source::market, Source::option, Source::news}, "Market data, News counts"},
        {5, SourceMask::all(), "Market data, Wikipedia traffic, News counts"},
    };
    return specs;
}

const ScenarioSpec& scenario(int id) {
    for (const auto& s : all_scenarios()) {
        if (s.id == id) return s;
    }
    throw Error(ErrorKind::usage, "unknown scenario " + std::to_string(id) + " (expected 1-5)");
}

std::vector<int> parse_scenario_list(std::string_view text) {
    std::vector<int> out;
    for (const auto& field : csv::split(text)) {
        int id = 0;
        try {
            id = static_cast<int>(csv::parse_int(field, 0, "scenario"));
        } catch (const Error&) {
            throw Error(ErrorKind::usage, "invalid scenario '" + field + "'");
        }
        scenario(id);
        if (std::find(out.begin(), out.end(), id) != out.end()) {
            throw Error(ErrorKind::usage, "duplicate scenario " + field);
        }
        out.push_back(id);
    }
    if (out.empty()) throw Error(ErrorKind::usage, "no scenarios given");
    return out;
}

std::vector<ModelKind> parse_model_list(std::string_view text) {
    std::vector<ModelKind> out;
    for (const auto& field : csv::split(text)) {
        const auto kind = parse_model_kind(field);
        if (std::find(out.begin(), out.end(), kind) != out.end()) {
            throw Error(ErrorKind::usage, "duplicate model " + field);
        }
        out.push_back(kind);
    }
    if (out.empty()) throw Error(ErrorKind::usage, "no models given");
    return out;
}

namespace {

std::vector<std::size_t> all_columns(const FeatureMatrix& m) {
    std::vector<std::size_t> cols(m.cols());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    return cols;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t iteration_seed(std::uint64_t seed, int scenario_id, ModelKind kind, std::size_t split_index) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ static_cast<std::uint64_t>(scenario_id));
    h = splitmix(h ^ static_cast<std::uint64_t>(kind));
    return splitmix(h ^ static_cast<std::uint64_t>(split_index));
}

IterationFit fit_iteration(const Split& split, const FeatureMatrix& masked, ModelKind kind,
                           const ModelConfig& config, std::uint64_t seed) {
    if (split.train_end != split.test || split.train_begin + 2 > split.train_end ||
        split.test >= masked.rows()) {
        throw Error(ErrorKind::computation, "split does not fit the feature matrix");
    }
    if (masked.cols() == 0) throw Error(ErrorKind::computation, "scenario has no feature columns");
    const auto cols = all_columns(masked);
    const Eigen::MatrixXd train = masked.block(split.train_begin, split.train_end, cols);
    // Differencing consumes the first training row; labels follow the remaining rows.
    const std::vector<int> labels(masked.target.begin() + static_cast<std::ptrdiff_t>(split.train_begin + 1),
                                  masked.target.begin() + static_cast<std::ptrdiff_t>(split.train_end));
    const bool up = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool down = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!up || !down) throw Error(ErrorKind::computation, "single-class training window");

    PreprocessOptions popts;
    popts.adf_lag = config.adf_lag;
    popts.selector = config.selector;
    popts.standardize = kind != ModelKind::adaboost;
    popts.select = kind != ModelKind::adaboost;

    IterationFit fit;
    fit.plan = fit_preprocess(train, masked.names(cols), labels, popts);
    TrainSet set{apply_preprocess(train, fit.plan), labels};
    switch (kind) {
        case ModelKind::logistic: fit.model = fit_logistic(set, config.logistic, seed); break;
        case ModelKind::svm_rbf: fit.model = fit_svm_rbf(set, config.svm, seed); break;
        case ModelKind::adaboost: fit.model = fit_adaboost(set, config.adaboost, seed); break;
    }
    fit.test_row = apply_preprocess(masked.block(split.test - 1, split.test + 1, cols), fit.plan);
    return fit;
}

PredictionRecord run_iteration(const Split& split, std::size_t split_index, const FeatureMatrix& masked,
                               const ScenarioSpec& spec, ModelKind kind, const ModelConfig& config,
                               std::uint64_t seed, bool keep_diagnostics) {
    PredictionRecord rec;
    rec.scenario = spec.id;
    rec.model = kind;
    rec.split_index = split_index;
    rec.date = masked.dates.at(split.test);
    rec.label = masked.target.at(split.test);
    try {
        const auto fit = fit_iteration(split, masked, kind, config, seed);
        const auto p = predict(fit.model, fit.test_row);
        rec.prob_up = p.probabilities.front();
        rec.pred = p.labels.front();
        if (keep_diagnostics) {
            rec.plan_json = plan_record(fit.plan);
            rec.model_json = model_record(fit.model);
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::computation) throw;
        rec.skipped = true;
        rec.skip_reason = e.what();
        rec.prob_up = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

Confusion confusion(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw Error(ErrorKind::computation, "predictions and labels differ in length");
    }
    Confusion cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool p = predictions[i] == 1;
        const bool l = labels[i] == 1;
        if (p && l) ++cm.tp;
        else if (p) ++cm.fp;
        else if (l) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

double balanced_accuracy(const Confusion& cm) {
    if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
        throw Error(ErrorKind::computation, "balanced accuracy needs both classes among the labels");
    }
    const double recall_up = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    const double recall_down = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
    return (recall_up + recall_down) / 2.0;
}

double balanced_accuracy(std::span<const int> predictions, std::span<const int> labels) {
    return balanced_accuracy(confusion(predictions, labels));
}

ExperimentReport run_ablation(const FeatureMatrix& matrix, const AblationOptions& options) {
    if (options.scenarios.empty() || options.models.empty()) {
        throw Error(ErrorKind::usage, "at least one scenario and one model are required");
    }
    ExperimentReport report;
    report.plan = make_splits(matrix.rows(), options.window);
    for (const auto& s : report.plan.splits) {
        (matrix.target[s.test] == 1 ? report.distribution.up : report.distribution.down) += 1;
    }

    std::map<int, FeatureMatrix> masked;
    for (const int id : options.scenarios) masked.emplace(id, matrix.masked(scenario(id).sources));

    for (const int id : options.scenarios) {
        for (const auto kind : options.models) {
            CellResult cell;
            cell.scenario = id;
            cell.model = kind;
            cell.records.resize(report.plan.splits.size());
            report.cells.push_back(std::move(cell));
        }
    }

    // Every (cell, split) task writes only its own slot, so the merge order is fixed.
    const std::size_t n_splits = report.plan.splits.size();
    const std::size_t n_tasks = report.cells.size() * n_splits;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) {
            auto& cell = report.cells[t / n_splits];
            const std::size_t k = t % n_splits;
            try {
                cell.records[k] = run_iteration(report.plan.splits[k], k, masked.at(cell.scenario),
                                                scenario(cell.scenario), cell.model, options.config,
                                                iteration_seed(options.seed, cell.scenario, cell.model, k),
                                                options.keep_diagnostics);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_tasks;
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_tasks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& cell : report.cells) {
        std::vector<int> preds, labels;
        for (const auto& r : cell.records) {
            if (r.skipped) {
                ++cell.n_skipped;
                report.errors.push_back("scenario " + std::to_string(r.scenario) + " " +
                                        std::string(to_string(r.model)) + " " + r.date.iso() +
                                        ": skipped (" + r.skip_reason + ")");
                continue;
            }
            preds.push_back(r.pred);
            labels.push_back(r.label);
        }
        cell.cm = confusion(preds, labels);
        try {
            cell.balanced_accuracy = balanced_accuracy(cell.cm);
        } catch (const Error&) {
            cell.balanced_accuracy = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return report;
}

std::string format_report_csv(const ExperimentReport& report) {
    std::string out = "scenario,model,balanced_accuracy,tp,fp,tn,fn,n_skipped\n";
    for (const auto& c : report.cells) {
        out += std::to_string(c.scenario) + ',' + std::string(to_string(c.model)) + ',' +
               csv::fixed(c.balanced_accuracy, 6) + ',' + std::to_string(c.cm.tp) + ',' +
               std::to_string(c.cm.fp) + ',' + std::to_string(c.cm.tn) + ',' + std::to_string(c.cm.fn) +
               ',' + std::to_string(c.n_skipped) + '\n';
    }
    return out;
}

std::string format_predictions_csv(const ExperimentReport& report) {
    std::string out = "scenario,model,date,prob_up,pred,label\n";
    for (const auto& c : report.cells) {
        for (const auto& r : c.records) {
            if (r.skipped) continue;
            out += std::to_string(r.scenario) + ',' + std::string(to_string(r.model)) + ',' + r.date.iso() +
                   ',' + csv::fixed(r.prob_up, 6) + ',' + std::to_string(r.pred) + ',' +
                   std::to_string(r.label) + '\n';
        }
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view text, const std::string& source_name) {
    const auto table = csv::parse(text, source_name);
    csv::require_header(table, {"scenario", "model", "balanced_accuracy", "tp", "fp", "tn", "fn", "n_skipped"},
                        source_name);
    auto count = [&](const std::string& f, std::size_t line, const char* what) {
        const auto v = csv::parse_int(f, line, what);
        if (v < 0) throw Error(ErrorKind::schema, source_name + ":" + std::to_string(line) + ": negative " + what);
        return static_cast<std::size_t>(v);
    };
    std::vector<ReportRow> rows;
    for (const auto& r : table.rows) {
        ReportRow row;
        row.scenario = static_cast<int>(csv::parse_int(r.fields[0], r.line, "scenario"));
        row.model = std::string(to_string(parse_model_kind(r.fields[1])));
        if (r.fields[2] == "nan") {
            row.balanced_accuracy = std::numeric_limits<double>::quiet_NaN();
        } else {
            row.balanced_accuracy = csv::parse_double(r.fields[2], r.line, "balanced_accuracy");
            if (row.balanced_accuracy < 0.0 || row.balanced_accuracy > 1.0) {
                throw Error(ErrorKind::schema, source_name + ":" + std::to_string(r.line) +
                                                   ": balanced_accuracy outside [0, 1]");
            }
        }
        row.tp = count(r.fields[3], r.line, "tp");
        row.fp = count(r.fields[4], r.line, "fp");
        row.tn = count(r.fields[5], r.line, "tn");
        row.fn = count(r.fields[6], r.line, "fn");
        row.n_skipped = count(r.fields[7], r.line, "n_skipped");
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string model_heading(const std::string& model) {
    if (model == "logistic") return "Logistic Regression";
    if (model == "svm") return "SVM";
    if (model == "adaboost") return "AdaBoost";
    return model;
}

}  // namespace

std::string format_table(const std::vector<ReportRow>& rows) {
    std::vector<int> scenarios;
    std::vector<std::string> models;
    std::map<std::pair<int, std::string>, double> cell;
    for (const auto& r : rows) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end()) {
            scenarios.push_back(r.scenario);
        }
        if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
        cell[{r.scenario, r.model}] = r.balanced_accuracy;
    }
    std::vector<std::size_t> widths;
    for (const auto& m : models) widths.push_back(std::max<std::size_t>(model_heading(m).size(), 7));

    std::string out = "Scenario";
    for (std::size_t c = 0; c < models.size(); ++c) out += "  " + pad(model_heading(models[c]), widths[c]);
    out += '\n';
    for (const int s : scenarios) {
        out += pad(std::to_string(s), 8);
        for (std::size_t c = 0; c < models.size(); ++c) {
            const auto it = cell.find({s, models[c]});
            std::string text = "-";
            if (it != cell.end()) {
                text = std::isnan(it->second) ? "n/a" : csv::fixed(100.0 * it->second, 1) + "%";
            }
            out += "  " + pad(text, widths[c]);
        }
        out += '\n';
    }
    return out;
}

std::string format_class_distribution(const ClassDistribution& dist) {
    const double n = static_cast<double>(dist.down + dist.up);
    auto pct = [&](std::size_t k) {
        return n > 0 ? csv::fixed(100.0 * static_cast<double>(k) / n, 0) + "%" : std::string("n/a");
    };
    std::string out = "Down Movement  Up Movement\n";
    out += pad(pct(dist.down), 13) + "  " + pad(pct(dist.up), 11) + '\n';
    out += pad("(" + std::to_string(dist.down) + ")", 13) + "  " + pad("(" + std::to_string(dist.up) + ")", 11) + '\n';
    return out;
}

}  // namespace ivlab
