#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ivlab/date.hpp"
#include "ivlab/series.hpp"

namespace ivlab {

struct Bar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    long long volume = 0;
};

struct CountObservation {
    Date date;
    long long count = 0;
};

struct RawOptionQuote {
    Date trade_date;
    Date expiry;
    double strike = 0.0;
    bool is_call = false;
    double bid = 0.0;
    double ask = 0.0;

    double mid() const { return 0.5 * (bid + ask); }
};

struct RatePoint {
    Date date;
    double rate = 0.0;
};

/// Ordered trading days of the study window.
class TradingCalendar {
public:
    TradingCalendar() = default;
    /// Throws unless strictly increasing and weekend-free.
    explicit TradingCalendar(std::vector<Date> days);

    static TradingCalendar from_bars(const std::vector<Bar>& bars);
    /// NYSE-style calendar: weekdays in [start, end] minus exchange holidays.
    static TradingCalendar exchange(Date start, Date end);

    const std::vector<Date>& days() const { return days_; }
    std::size_t size() const { return days_.size(); }
    bool contains(Date d) const;

private:
    std::vector<Date> days_;
};

/// NYSE full-day closures for a calendar year (observed dates).
std::vector<Date> exchange_holidays(int year);

// Canonical CSV schemas.
//   bars.csv    date,open,high,low,close,volume
//   counts.csv  date,count
//   options.csv trade_date,expiry,strike,type,bid,ask   (type in {C,P})
//   rates.csv   date,rate

std::vector<Bar> load_bars(const std::filesystem::path& path);
std::vector<Bar> parse_bars(std::string_view text, const std::string& source_name);
std::string format_bars(const std::vector<Bar>& bars);

std::vector<CountObservation> load_counts(const std::filesystem::path& path);
std::vector<CountObservation> parse_counts(std::string_view text, const std::string& source_name);
std::string format_counts(const std::vector<CountObservation>& counts);

std::vector<RawOptionQuote> load_options(const std::filesystem::path& path);
std::vector<RawOptionQuote> parse_options(std::string_view text, const std::string& source_name);
std::string format_options(const std::vector<RawOptionQuote>& quotes);

std::vector<RatePoint> load_rates(const std::filesystem::path& path);

enum class AlignmentPolicy {
    drop_non_trading,  // keep trading-day observations only; a missing trading day is an error
    sum_into_next,     // non-trading-day counts are added to the next trading day
    carry_forward,     // missing trading day reuses the previous trading day's value
};

AlignmentPolicy parse_alignment_policy(std::string_view text);
std::string_view to_string(AlignmentPolicy policy);

/// Output is indexed exactly by `calendar`. Throws (schema) naming the first
/// trading day that has no derivable value under `policy`.
DailySeries align_to_calendar(const std::vector<CountObservation>& series,
                              const TradingCalendar& calendar, AlignmentPolicy policy,
                              std::string name);

}  // namespace ivlab
