#include "ivlab/feature_factory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ivlab/csv.hpp"
#include "ivlab/error.hpp"
#include "ivlab/indicators.hpp"
#include "ivlab/log.hpp"

namespace ivlab {

namespace {

struct TechniqueInfo {
    Technique technique;
    const char* name;
};

constexpr TechniqueInfo kTechniques[] = {
    {Technique::ma, "MA"},
    {Technique::ma_move, "MA_Move"},
    {Technique::ema, "EMA"},
    {Technique::ema_move, "EMA_Move"},
    {Technique::roc, "ROC"},
    {Technique::roc_move, "ROC_Move"},
    {Technique::disparity, "Disparity"},
    {Technique::disparity_move, "Disparity_Move"},
    {Technique::momentum1, "Momentum1"},
    {Technique::momentum2, "Momentum2"},
    {Technique::rsi, "RSI"},
    {Technique::rsi_move, "RSI_Move"},
    {Technique::williams_r, "WilliamsR"},
    {Technique::stochastic_k, "StochasticK"},
};

const char* technique_name(Technique t) {
    for (const auto& info : kTechniques) {
        if (info.technique == t) return info.name;
    }
    return "?";
}

const std::vector<double>& series_values(const OriginalSeries& s, std::string_view name) {
    if (name == "open") return s.open;
    if (name == "high") return s.high;
    if (name == "low") return s.low;
    if (name == "close") return s.close;
    if (name == "volume") return s.volume;
    if (name == "ivol") return s.ivol;
    if (name == "news") return s.news;
    if (name == "wiki") return s.wiki;
    throw Error(ErrorKind::schema, "unknown series '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(Source source) {
    switch (source) {
        case Source::market: return "market";
        case Source::option: return "option";
        case Source::news: return "news";
        case Source::wikipedia: return "wikipedia";
    }
    return "?";
}

SourceMask::SourceMask(std::initializer_list<Source> sources) {
    for (const auto s : sources) bits_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
}

SourceMask SourceMask::parse(std::string_view text) {
    SourceMask mask;
    for (const auto& token : csv::split(text)) {
        bool found = false;
        for (const auto s : {Source::market, Source::option, Source::news, Source::wikipedia}) {
            if (token == ivlab::to_string(s)) {
                mask.bits_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
                found = true;
            }
        }
        if (!found) throw Error(ErrorKind::usage, "unknown data source '" + token + "'");
    }
    return mask;
}

std::string SourceMask::to_string() const {
    std::string out;
    for (const auto s : {Source::market, Source::option, Source::news, Source::wikipedia}) {
        if (contains(s)) out += (out.empty() ? "" : ",") + std::string(ivlab::to_string(s));
    }
    return out;
}

void OriginalSeries::validate() const {
    const std::size_t n = dates.size();
    for (const auto* name : {"open", "high", "low", "close", "volume", "ivol", "news", "wiki"}) {
        const auto& v = series_values(*this, name);
        if (v.size() != n) {
            throw Error(ErrorKind::schema, std::string("series '") + name + "' misaligned: " +
                                               std::to_string(v.size()) + " values for " +
                                               std::to_string(n) + " dates");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(v[i])) {
                throw Error(ErrorKind::schema,
                            std::string("series '") + name + "' non-finite on " + dates[i].iso());
            }
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw Error(ErrorKind::schema, "original series dates not strictly increasing");
        }
    }
}

OriginalSeries assemble_originals(const std::vector<Bar>& bars, const DailySeries& ivol,
                                  const DailySeries& news, const DailySeries& wiki) {
    OriginalSeries out;
    for (const auto& b : bars) {
        out.dates.push_back(b.date);
        out.open.push_back(b.open);
        out.high.push_back(b.high);
        out.low.push_back(b.low);
        out.close.push_back(b.close);
        out.volume.push_back(static_cast<double>(b.volume));
    }
    for (const auto* s : {&ivol, &news, &wiki}) {
        if (s->dates != out.dates) {
            throw Error(ErrorKind::schema, "series '" + s->name + "' is not aligned to the bar calendar");
        }
    }
    out.ivol = ivol.values;
    out.news = news.values;
    out.wiki = wiki.values;
    out.validate();
    return out;
}

const std::vector<std::string>& original_series_names() {
    static const std::vector<std::string> names{"open", "high",  "low",  "close",
                                                "volume", "ivol", "news", "wiki"};
    return names;
}

Source source_of_series(std::string_view series) {
    if (series == "open" || series == "high" || series == "low" || series == "close" ||
        series == "volume") {
        return Source::market;
    }
    if (series == "ivol") return Source::option;
    if (series == "news") return Source::news;
    if (series == "wiki") return Source::wikipedia;
    throw Error(ErrorKind::schema, "unknown series '" + std::string(series) + "'");
}

Source source_of_column(std::string_view column) {
    const auto pos = column.rfind('_');
    return source_of_series(pos == std::string_view::npos ? column : column.substr(pos + 1));
}

std::string IndicatorSpec::column_name() const {
    return std::string(technique_name(technique)) + '_' + std::to_string(n) + '_' + applied_to;
}

int IndicatorSpec::first_valid_index() const {
    switch (technique) {
        case Technique::ma:
        case Technique::ema:
        case Technique::disparity:
        case Technique::williams_r:
        case Technique::stochastic_k:
            return n - 1;
        case Technique::ma_move:
        case Technique::ema_move:
        case Technique::disparity_move:
            return n;
        case Technique::roc:
        case Technique::momentum1:
        case Technique::momentum2:
        case Technique::rsi:
            return n;
        case Technique::roc_move:
        case Technique::rsi_move:
            return n + 1;
    }
    return n;
}

std::vector<IndicatorSpec> generated_feature_specs() {
    std::vector<IndicatorSpec> specs;
    for (const char* series : {"ivol", "news", "wiki"}) {
        for (const auto& [technique, windows] :
             std::vector<std::pair<Technique, std::vector<int>>>{
                 {Technique::ma, {3, 5, 10}},
                 {Technique::ma_move, {3, 5, 10}},
                 {Technique::ema, {3, 5, 10}},
                 {Technique::ema_move, {3, 5, 10}},
                 {Technique::roc, {5}},
                 {Technique::roc_move, {5}},
                 {Technique::disparity, {3, 5}},
                 {Technique::disparity_move, {3, 5}},
                 {Technique::momentum1, {5}},
                 {Technique::momentum2, {5}},
             }) {
            for (const int n : windows) specs.push_back({technique, n, series});
        }
    }
    for (const char* series : {"ivol", "news", "wiki", "close"}) {
        specs.push_back({Technique::rsi, 14, series});
        specs.push_back({Technique::rsi_move, 14, series});
    }
    specs.push_back({Technique::williams_r, 14, "close"});
    specs.push_back({Technique::stochastic_k, 14, "close"});
    return specs;
}

int warmup_rows() {
    int warmup = 0;
    for (const auto& spec : generated_feature_specs()) warmup = std::max(warmup, spec.first_valid_index());
    return warmup;
}

std::vector<double> compute_indicator(const IndicatorSpec& spec, const OriginalSeries& s) {
    namespace ind = indicators;
    const auto& x = series_values(s, spec.applied_to);
    switch (spec.technique) {
        case Technique::ma: return ind::sma(x, spec.n);
        case Technique::ma_move: return ind::move_of(ind::sma(x, spec.n));
        case Technique::ema: return ind::ema(x, spec.n);
        case Technique::ema_move: return ind::move_of(ind::ema(x, spec.n));
        case Technique::roc: return ind::roc(x, spec.n);
        case Technique::roc_move: return ind::move_of(ind::roc(x, spec.n));
        case Technique::disparity: return ind::disparity(x, spec.n);
        case Technique::disparity_move: return ind::move_of(ind::disparity(x, spec.n));
        case Technique::momentum1: return ind::momentum1(x, spec.n);
        case Technique::momentum2: return ind::momentum2(x, spec.n);
        case Technique::rsi: return ind::rsi(x, spec.n);
        case Technique::rsi_move: return ind::move_of(ind::rsi(x, spec.n));
        case Technique::williams_r: return ind::williams_r(s.high, s.low, x, spec.n);
        case Technique::stochastic_k: return ind::stochastic_k(s.high, s.low, x, spec.n);
    }
    throw Error(ErrorKind::usage, "unknown technique");
}

std::vector<std::size_t> FeatureMatrix::column_indices(const SourceMask& mask) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (mask.contains(columns[j].source)) out.push_back(j);
    }
    return out;
}

FeatureMatrix FeatureMatrix::masked(const SourceMask& mask) const {
    FeatureMatrix out;
    out.dates = dates;
    out.target = target;
    for (const auto j : column_indices(mask)) out.columns.push_back(columns[j]);
    return out;
}

Eigen::MatrixXd FeatureMatrix::block(std::size_t row_begin, std::size_t row_end,
                                     const std::vector<std::size_t>& cols) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(row_end - row_begin),
                        static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& values = columns[cols[c]].values;
        for (std::size_t r = row_begin; r < row_end; ++r) {
            out(static_cast<Eigen::Index>(r - row_begin), static_cast<Eigen::Index>(c)) = values[r];
        }
    }
    return out;
}

std::vector<std::string> FeatureMatrix::names(const std::vector<std::size_t>& cols) const {
    std::vector<std::string> out;
    out.reserve(cols.size());
    for (const auto j : cols) out.push_back(columns[j].name);
    return out;
}

std::vector<int> make_target(std::span<const double> ivol) {
    std::vector<int> out;
    if (ivol.size() < 2) return out;
    out.reserve(ivol.size() - 1);
    for (std::size_t i = 0; i + 1 < ivol.size(); ++i) out.push_back(ivol[i + 1] - ivol[i] > 0.0 ? 1 : 0);
    return out;
}

FeatureMatrix build_feature_matrix(const OriginalSeries& series, const SourceMask& mask) {
    if (mask.empty()) throw Error(ErrorKind::usage, "scenario enables no data source");
    series.validate();

    std::vector<FeatureColumn> columns;
    for (const auto& name : original_series_names()) {
        const Source src = source_of_series(name);
        if (mask.contains(src)) columns.push_back({name, src, series_values(series, name)});
    }
    for (const auto& spec : generated_feature_specs()) {
        if (mask.contains(spec.source())) {
            columns.push_back({spec.column_name(), spec.source(), compute_indicator(spec, series)});
        }
    }

    const auto target = make_target(series.ivol);
    const std::size_t warmup = static_cast<std::size_t>(warmup_rows());
    const std::size_t n = series.size();
    if (n < warmup + 2) {
        throw Error(ErrorKind::computation, "need at least " + std::to_string(warmup + 2) +
                                                " trading days, got " + std::to_string(n));
    }

    FeatureMatrix out;
    out.columns.reserve(columns.size());
    for (const auto& c : columns) out.columns.push_back({c.name, c.source, {}});
    std::size_t excluded = 0;
    for (std::size_t t = warmup; t + 1 < n; ++t) {
        const bool complete = std::all_of(columns.begin(), columns.end(),
                                          [&](const FeatureColumn& c) { return std::isfinite(c.values[t]); });
        if (!complete) {
            ++excluded;
            continue;
        }
        out.dates.push_back(series.dates[t]);
        out.target.push_back(target[t]);
        for (std::size_t j = 0; j < columns.size(); ++j) out.columns[j].values.push_back(columns[j].values[t]);
    }
    if (excluded > 0) {
        log::warn(std::to_string(excluded) + " row(s) excluded: undefined indicator value (zero denominator)");
    }
    return out;
}

std::string format_features(const FeatureMatrix& m) {
    std::string out = "date";
    for (const auto& c : m.columns) out += ',' + c.name;
    out += ",target\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += m.dates[r].iso();
        for (const auto& c : m.columns) out += ',' + csv::shortest(c.values[r]);
        out += ',' + std::to_string(m.target[r]) + '\n';
    }
    return out;
}

FeatureMatrix parse_features(std::string_view text, const std::string& source) {
    const auto table = csv::parse(text, source);
    const auto& header = table.header;
    if (header.size() < 3 || header.front() != "date" || header.back() != "target") {
        throw Error(ErrorKind::schema, source + ": header must be 'date,<features...>,target'");
    }
    FeatureMatrix m;
    for (std::size_t j = 1; j + 1 < header.size(); ++j) {
        try {
            m.columns.push_back({header[j], source_of_column(header[j]), {}});
        } catch (const Error&) {
            throw Error(ErrorKind::schema, source + ": cannot tag column '" + header[j] + "' with a source");
        }
    }
    for (const auto& row : table.rows) {
        try {
            const Date d = Date::parse(row.fields.front());
            if (!m.dates.empty() && !(m.dates.back() < d)) {
                throw Error(ErrorKind::schema, "dates must be strictly increasing");
            }
            m.dates.push_back(d);
            for (std::size_t j = 0; j < m.columns.size(); ++j) {
                m.columns[j].values.push_back(csv::parse_double(row.fields[j + 1], row.line, header[j + 1]));
            }
            const auto label = csv::parse_int(row.fields.back(), row.line, "target");
            if (label != 0 && label != 1) throw Error(ErrorKind::schema, "target must be 0 or 1");
            m.target.push_back(static_cast<int>(label));
        } catch (const Error& e) {
            throw Error(ErrorKind::schema, source + ": line " + std::to_string(row.line) + ": " + e.what());
        }
    }
    return m;
}

FeatureMatrix load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::missing_file, "cannot open " + path.string());
    return parse_features(std::string(std::istreambuf_iterator<char>(in), {}), path.string());
}

}  // namespace ivlab
