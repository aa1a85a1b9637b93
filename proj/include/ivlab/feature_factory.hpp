#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ivlab/data_ingest.hpp"
#include "ivlab/series.hpp"

namespace ivlab {

enum class Source : std::uint8_t { market, option, news, wikipedia };

std::string_view to_string(Source source);

/// Set of enabled data sources.
class SourceMask {
public:
    SourceMask() = default;
    SourceMask(std::initializer_list<Source> sources);
    static SourceMask all() { return {Source::market, Source::option, Source::news, Source::wikipedia}; }
    /// Comma-separated source names, e.g. "market,option,news".
    static SourceMask parse(std::string_view text);

    bool contains(Source s) const { return (bits_ >> static_cast<unsigned>(s)) & 1u; }
    bool empty() const { return bits_ == 0; }
    std::string to_string() const;
    bool operator==(const SourceMask&) const = default;

private:
    std::uint8_t bits_ = 0;
};

/// The eight original daily series on a common trading calendar.
struct OriginalSeries {
    std::vector<Date> dates;
    std::vector<double> open, high, low, close, volume, ivol, news, wiki;

    std::size_t size() const { return dates.size(); }
    /// Throws on misaligned lengths or non-finite values.
    void validate() const;
};

/// Throws (schema) unless every series is indexed by exactly the bar dates.
OriginalSeries assemble_originals(const std::vector<Bar>& bars, const DailySeries& ivol,
                                  const DailySeries& news, const DailySeries& wiki);

/// Original series names in column order and their source tags.
const std::vector<std::string>& original_series_names();
Source source_of_series(std::string_view series);
/// Source tag implied by a canonical column name (`<technique>_<n>_<series>` or a series name).
Source source_of_column(std::string_view column);

enum class Technique {
    ma, ma_move, ema, ema_move, roc, roc_move, disparity, disparity_move,
    momentum1, momentum2, rsi, rsi_move, williams_r, stochastic_k,
};

struct IndicatorSpec {
    Technique technique;
    int n;
    std::string applied_to;

    std::string column_name() const;
    Source source() const { return source_of_series(applied_to); }
    /// Index of the first defined value on a gap-free series.
    int first_valid_index() const;
};

/// The 70 generated-feature specifications in column order.
std::vector<IndicatorSpec> generated_feature_specs();

/// Leading rows without a complete indicator set (max first-valid index).
int warmup_rows();

std::vector<double> compute_indicator(const IndicatorSpec& spec, const OriginalSeries& series);

struct FeatureColumn {
    std::string name;
    Source source;
    std::vector<double> values;
};

struct FeatureMatrix {
    std::vector<Date> dates;
    std::vector<FeatureColumn> columns;
    std::vector<int> target;  // 1 = next-day ivol up

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return columns.size(); }

    std::vector<std::size_t> column_indices(const SourceMask& mask) const;
    FeatureMatrix masked(const SourceMask& mask) const;
    /// Dense copy of rows [row_begin, row_end) restricted to `cols`.
    Eigen::MatrixXd block(std::size_t row_begin, std::size_t row_end,
                          const std::vector<std::size_t>& cols) const;
    std::vector<std::string> names(const std::vector<std::size_t>& cols) const;
};

/// Up (1) when the next day's ivol is strictly higher, else 0; n values give n-1 labels.
std::vector<int> make_target(std::span<const double> ivol);

/// Originals plus the generated indicators for the enabled sources. Warm-up rows and
/// the final (unlabelled) day are dropped, as are rows where an indicator is
/// undefined (zero denominators).
FeatureMatrix build_feature_matrix(const OriginalSeries& series, const SourceMask& mask = SourceMask::all());

// features.csv: date,<columns...>,target
std::string format_features(const FeatureMatrix& matrix);
FeatureMatrix parse_features(std::string_view text, const std::string& source_name);
FeatureMatrix load_features(const std::filesystem::path& path);

}  // namespace ivlab
