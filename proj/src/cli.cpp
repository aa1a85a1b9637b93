#include "ivlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ivlab/csv.hpp"
#include "ivlab/data_ingest.hpp"
#include "ivlab/error.hpp"
#include "ivlab/feature_factory.hpp"
#include "ivlab/ivol_engine.hpp"
#include "ivlab/log.hpp"
#include "ivlab/pageviews.hpp"
#include "ivlab/walkforward.hpp"

namespace ivlab::cli {

namespace fs = std::filesystem;

std::uint64_t config_hash(const ConfigRecord& record) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](std::string_view s) {
        for (const unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& [k, v] : record) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

std::string output_header(const ConfigRecord& record, std::uint64_t seed) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash(record)));
    std::string out = "# ivol-lab " + std::string(version) + " config_hash=" + hex +
                      " seed=" + std::to_string(seed) + "\n# config:";
    for (const auto& [k, v] : record) out += " " + k + "=" + v;
    return out + "\n";
}

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return usage_error;
        case ErrorKind::missing_file: return missing_file_error;
        case ErrorKind::schema: return schema_error;
        case ErrorKind::computation: return computation_error;
        case ErrorKind::network: return network_error;
    }
    return internal_error;
}

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

Date parse_date_flag(const std::string& text, const std::string& flag) {
    try {
        return Date::parse(text);
    } catch (const Error&) {
        throw Error(ErrorKind::usage, flag + ": expected YYYY-MM-DD, got '" + text + "'");
    }
}

void require_file(const std::string& path, const std::string& flag) {
    if (!fs::exists(path)) throw Error(ErrorKind::missing_file, flag + ": no such file '" + path + "'");
}

struct Settings {
    std::uint64_t seed = 42;

    // compute-ivol
    std::string options_path, bars_path, rates_path, ivol_out = "ivol.csv", interp = "variance";
    int target_days = 30;
    double rate = 0.01;
    int min_days = 7;
    bool clamp = false;

    // fetch-wiki
    std::string article, start, end, wiki_out = "wiki.csv", cache_dir;
    bool network = false;

    // build-features
    std::string ivol_path, news_path, wiki_path, policy = "sum-into-next", sources = "market,option,news,wikipedia",
                                                 features_out = "features.csv";

    // run
    std::string features_path, scenarios = "1,2,3,4,5", models = "logistic,svm,adaboost",
                               report_out = "report.csv", predictions_out, dump_plan, dump_models;
    std::size_t window = 379;
    unsigned threads = 1;

    // report
    std::string report_in, report_predictions;
};

void write_output(const std::string& path, const ConfigRecord& record, std::uint64_t seed, const std::string& body) {
    csv::write_text(path, output_header(record, seed) + body);
}

int cmd_compute_ivol(const Settings& s, std::ostream& out) {
    require_file(s.options_path, "--options");
    IvolOptions opts;
    opts.target_days = s.target_days;
    opts.rate = s.rate;
    opts.min_days = s.min_days;
    opts.interpolation.clamp = s.clamp;
    if (s.interp == "variance") {
        opts.interpolation.space = InterpolationSpace::variance;
    } else if (s.interp == "volatility") {
        opts.interpolation.space = InterpolationSpace::volatility;
    } else {
        throw Error(ErrorKind::usage, "--interp: expected variance or volatility");
    }
    if (!s.rates_path.empty()) {
        require_file(s.rates_path, "--rates");
        opts.rate_curve = load_rates(s.rates_path);
    }
    const auto quotes = load_options(s.options_path);
    TradingCalendar cal;
    if (!s.bars_path.empty()) {
        require_file(s.bars_path, "--bars");
        cal = TradingCalendar::from_bars(load_bars(s.bars_path));
    } else {
        std::set<Date> days;
        for (const auto& q : quotes) days.insert(q.trade_date);
        cal = TradingCalendar(std::vector<Date>(days.begin(), days.end()));
    }
    const auto points = daily_ivol_series(quotes, cal, opts);

    const ConfigRecord rec = {
        {"command", "compute-ivol"}, {"options", s.options_path}, {"bars", s.bars_path},
        {"rates", s.rates_path}, {"target_days", std::to_string(s.target_days)},
        {"rate", csv::shortest(s.rate)}, {"min_days", std::to_string(s.min_days)},
        {"clamp", s.clamp ? "true" : "false"}, {"interp", s.interp},
    };
    write_output(s.ivol_out, rec, s.seed, format_ivol(points));
    out << "wrote " << points.size() << " days to " << s.ivol_out << "\n";
    return ok;
}

int cmd_fetch_wiki(const Settings& s, std::ostream& out) {
    PageviewsOptions opts;
    opts.allow_network = s.network;
    if (!s.cache_dir.empty()) {
        opts.cache_root = s.cache_dir;
    } else if (const char* env = std::getenv("IVOL_LAB_CACHE"); env && *env) {
        opts.cache_root = env;
    }
    const Date start = parse_date_flag(s.start, "--start");
    const Date end = parse_date_flag(s.end, "--end");
    if (end < start) throw Error(ErrorKind::usage, "--end precedes --start");
    PageviewsClient client(opts, std::make_shared<HttplibTransport>());
    const auto result = client.fetch(s.article, start, end);

    const ConfigRecord rec = {
        {"command", "fetch-wiki"}, {"article", s.article}, {"start", s.start}, {"end", s.end},
    };
    write_output(s.wiki_out, rec, s.seed, format_counts(result.observations));
    out << "wrote " << result.observations.size() << " days to " << s.wiki_out << " ("
        << result.network_requests << " network requests, " << result.missing_days.size()
        << " missing days)\n";
    return ok;
}

int cmd_build_features(const Settings& s, std::ostream& out) {
    require_file(s.ivol_path, "--ivol");
    require_file(s.bars_path, "--bars");
    require_file(s.news_path, "--news");
    require_file(s.wiki_path, "--wiki");
    const auto policy = parse_alignment_policy(s.policy);
    const auto mask = SourceMask::parse(s.sources);
    const auto bars = load_bars(s.bars_path);
    const auto cal = TradingCalendar::from_bars(bars);
    const auto ivol = to_series(load_ivol(s.ivol_path));
    const auto news = align_to_calendar(load_counts(s.news_path), cal, policy, "news");
    const auto wiki = align_to_calendar(load_counts(s.wiki_path), cal, policy, "wiki");
    const auto matrix = build_feature_matrix(assemble_originals(bars, ivol, news, wiki), mask);

    const ConfigRecord rec = {
        {"command", "build-features"}, {"ivol", s.ivol_path}, {"bars", s.bars_path},
        {"news", s.news_path}, {"wiki", s.wiki_path}, {"policy", std::string(to_string(policy))},
        {"sources", mask.to_string()},
    };
    write_output(s.features_out, rec, s.seed, format_features(matrix));
    out << "wrote " << matrix.rows() << " rows x " << matrix.cols() << " features to " << s.features_out << "\n";
    return ok;
}

int cmd_run(const Settings& s, std::ostream& out) {
    require_file(s.features_path, "--features");
    AblationOptions opts;
    opts.scenarios = parse_scenario_list(s.scenarios);
    opts.models = parse_model_list(s.models);
    opts.window = s.window;
    opts.seed = s.seed;
    opts.threads = s.threads;
    opts.keep_diagnostics = !s.dump_plan.empty() || !s.dump_models.empty();
    const auto matrix = load_features(s.features_path);
    const auto report = run_ablation(matrix, opts);

    std::string scen, mods;
    for (const int id : opts.scenarios) scen += (scen.empty() ? "" : ",") + std::to_string(id);
    for (const auto m : opts.models) mods += (mods.empty() ? "" : ",") + std::string(to_string(m));
    // Thread count does not affect results and is left out of the record.
    const ConfigRecord rec = {
        {"command", "run"}, {"features", s.features_path}, {"window", std::to_string(s.window)},
        {"scenarios", scen}, {"models", mods},
    };
    const std::string predictions =
        s.predictions_out.empty() ? (fs::path(s.report_out).parent_path() / "predictions.csv").string()
                                  : s.predictions_out;
    write_output(s.report_out, rec, s.seed, format_report_csv(report));
    write_output(predictions, rec, s.seed, format_predictions_csv(report));

    auto dump = [&](const std::string& path, bool plans) {
        if (path.empty()) return;
        std::string body;
        for (const auto& cell : report.cells) {
            for (const auto& r : cell.records) {
                if (r.skipped) continue;
                nlohmann::json j;
                j["scenario"] = r.scenario;
                j["model"] = std::string(to_string(r.model));
                j["date"] = r.date.iso();
                j[plans ? "plan" : "fit"] = nlohmann::json::parse(plans ? r.plan_json : r.model_json);
                body += j.dump() + "\n";
            }
        }
        write_output(path, rec, s.seed, body);
    };
    dump(s.dump_plan, true);
    dump(s.dump_models, false);

    for (const auto& e : report.errors) log::warn(e);
    out << report.plan.splits.size() << " splits, window " << report.plan.window << "\n";
    out << format_class_distribution(report.distribution) << "\n";
    std::vector<ReportRow> rows = parse_report_csv(format_report_csv(report), s.report_out);
    out << format_table(rows);
    return ok;
}

int cmd_report(const Settings& s, std::ostream& out) {
    require_file(s.report_in, "--in");
    std::ifstream in(s.report_in, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    out << format_table(parse_report_csv(buf.str(), s.report_in));

    const std::string pred = s.report_predictions.empty()
                                 ? (fs::path(s.report_in).parent_path() / "predictions.csv").string()
                                 : s.report_predictions;
    if (!s.report_predictions.empty()) require_file(pred, "--predictions");
    if (fs::exists(pred)) {
        const auto table = csv::read(pred);
        csv::require_header(table, {"scenario", "model", "date", "prob_up", "pred", "label"}, pred);
        std::set<std::string> seen;
        ClassDistribution dist;
        for (const auto& r : table.rows) {
            if (!seen.insert(r.fields[2]).second) continue;
            (csv::parse_int(r.fields[5], r.line, "label") == 1 ? dist.up : dist.down) += 1;
        }
        out << "\n" << format_class_distribution(dist);
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Implied-volatility movement research pipeline", "ivol-lab"};
    app.set_version_flag("--version", std::string(version));
    app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    Settings s;
    app.add_option("--seed", s.seed, "Seed for every randomized step")->capture_default_str();

    auto* ivol = app.add_subcommand("compute-ivol", "Daily constant-maturity implied volatility from option quotes");
    ivol->add_option("--options", s.options_path, "Option quotes CSV")->required();
    ivol->add_option("--bars", s.bars_path, "Daily bars CSV defining the trading calendar");
    ivol->add_option("--target-days", s.target_days, "Constant maturity in calendar days")
        ->capture_default_str()->check(CLI::PositiveNumber);
    ivol->add_option("--rate", s.rate, "Flat continuously compounded rate")->capture_default_str();
    ivol->add_option("--rates", s.rates_path, "Rate curve CSV (date,rate)");
    ivol->add_option("--min-days", s.min_days, "Shortest usable expiry in days")->capture_default_str();
    ivol->add_flag("--clamp", s.clamp, "Use the nearest term instead of extrapolating");
    ivol->add_option("--interp", s.interp, "variance or volatility")->capture_default_str();
    ivol->add_option("--out", s.ivol_out, "Output CSV")->capture_default_str();

    auto* wiki = app.add_subcommand("fetch-wiki", "Daily Wikipedia pageviews with a local cache");
    wiki->add_option("--article", s.article, "Article title")->required();
    wiki->add_option("--start", s.start, "First day (YYYY-MM-DD)")->required();
    wiki->add_option("--end", s.end, "Last day (YYYY-MM-DD)")->required();
    wiki->add_option("--out", s.wiki_out, "Output CSV")->capture_default_str();
    wiki->add_option("--cache-dir", s.cache_dir, "Cache root (default: $IVOL_LAB_CACHE or ./cache)");
    wiki->add_flag("--network", s.network, "Allow requests for uncached ranges");

    auto* feat = app.add_subcommand("build-features", "Original and technical-indicator feature matrix");
    feat->add_option("--ivol", s.ivol_path, "ivol CSV from compute-ivol")->required();
    feat->add_option("--bars", s.bars_path, "Daily bars CSV")->required();
    feat->add_option("--news", s.news_path, "Daily news counts CSV")->required();
    feat->add_option("--wiki", s.wiki_path, "Daily pageviews CSV")->required();
    feat->add_option("--policy", s.policy, "drop-non-trading, sum-into-next or carry-forward")->capture_default_str();
    feat->add_option("--sources", s.sources, "Enabled sources")->capture_default_str();
    feat->add_option("--out", s.features_out, "Output CSV")->capture_default_str();

    auto* runc = app.add_subcommand("run", "Walk-forward ablation over scenarios and models");
    runc->add_option("--features", s.features_path, "Feature matrix CSV")->required();
    runc->add_option("--window", s.window, "Training window in rows")->capture_default_str();
    runc->add_option("--scenarios", s.scenarios, "Scenario ids")->capture_default_str();
    runc->add_option("--models", s.models, "logistic, svm, adaboost")->capture_default_str();
    runc->add_option("--out", s.report_out, "report.csv path")->capture_default_str();
    runc->add_option("--predictions", s.predictions_out, "predictions.csv path (default: next to --out)");
    runc->add_option("--dump-plan", s.dump_plan, "JSON lines of every fitted preprocessing plan");
    runc->add_option("--dump-models", s.dump_models, "JSON lines of every fitted model");
    runc->add_option("--threads", s.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* rep = app.add_subcommand("report", "Print a report.csv as a scenario by model table");
    rep->add_option("--in", s.report_in, "report.csv path")->required();
    rep->add_option("--predictions", s.report_predictions, "predictions.csv for the class distribution");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            (e.get_name() == "CallForVersion" ? out << version << "\n" : out << app.help());
            return ok;
        }
        err << "error: " << one_line(e.what()) << "\n";
        return usage_error;
    }

    try {
        if (*ivol) return cmd_compute_ivol(s, out);
        if (*wiki) return cmd_fetch_wiki(s, out);
        if (*feat) return cmd_build_features(s, out);
        if (*runc) return cmd_run(s, out);
        if (*rep) return cmd_report(s, out);
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << "\n";
        return internal_error;
    }
    return internal_error;
}

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace ivlab::cli
