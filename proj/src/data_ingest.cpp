#include "ivlab/data_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>

#include "ivlab/csv.hpp"
#include "ivlab/error.hpp"

namespace ivlab {

namespace {

[[noreturn]] void schema_error(const std::string& source, std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::schema, source + ": line " + std::to_string(line) + ": " + msg);
}

double price_field(const csv::Row& row, std::size_t i, const std::string& source,
                   const std::string& what) {
    double v = 0.0;
    try {
        v = csv::parse_double(row.fields[i], row.line, what);
    } catch (const Error& e) {
        throw Error(ErrorKind::schema, source + ": " + e.what());
    }
    if (v < 0.0) schema_error(source, row.line, "negative " + what);
    return v;
}

Date date_field(const csv::Row& row, std::size_t i, const std::string& source) {
    try {
        return Date::parse(row.fields[i]);
    } catch (const Error& e) {
        schema_error(source, row.line, e.what());
    }
}

long long count_field(const csv::Row& row, std::size_t i, const std::string& source,
                      const std::string& what) {
    long long v = 0;
    try {
        v = csv::parse_int(row.fields[i], row.line, what);
    } catch (const Error& e) {
        throw Error(ErrorKind::schema, source + ": " + e.what());
    }
    if (v < 0) schema_error(source, row.line, "negative " + what);
    return v;
}

Date easter_sunday(int y) {
    // Anonymous Gregorian algorithm.
    const int a = y % 19, b = y / 100, c = y % 100, d = b / 4, e = b % 4;
    const int f = (b + 8) / 25, g = (b - f + 1) / 3;
    const int h = (19 * a + b - d - g + 15) % 30;
    const int i = c / 4, k = c % 4;
    const int l = (32 + 2 * e + 2 * i - h - k) % 7;
    const int m = (a + 11 * h + 22 * l) / 451;
    const int month = (h + l - 7 * m + 114) / 31;
    const int day = (h + l - 7 * m + 114) % 31 + 1;
    return Date(y, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

Date nth_weekday(int y, unsigned month, std::chrono::weekday wd, unsigned n) {
    using namespace std::chrono;
    return Date(sys_days{year_month_weekday{year{y}, std::chrono::month{month}, wd[n]}});
}

Date last_weekday(int y, unsigned month, std::chrono::weekday wd) {
    using namespace std::chrono;
    return Date(sys_days{year_month_weekday_last{year{y}, std::chrono::month{month}, wd[last]}});
}

// Saturday holidays move to Friday, Sunday holidays to Monday.
Date observed(Date d) {
    const std::chrono::weekday wd{d.sys_days()};
    if (wd == std::chrono::Saturday) return d - 1;
    if (wd == std::chrono::Sunday) return d + 1;
    return d;
}

}  // namespace

void DailySeries::validate(bool allow_nan) const {
    if (dates.size() != values.size()) {
        throw Error(ErrorKind::schema, "series '" + name + "': dates/values length mismatch");
    }
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw Error(ErrorKind::schema,
                        "series '" + name + "': dates not strictly increasing at " + dates[i].iso());
        }
    }
    if (!allow_nan) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw Error(ErrorKind::schema,
                            "series '" + name + "': non-finite value on " + dates[i].iso());
            }
        }
    }
}

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
    for (std::size_t i = 0; i < days_.size(); ++i) {
        if (days_[i].is_weekend()) {
            throw Error(ErrorKind::schema, "trading calendar contains weekend day " + days_[i].iso());
        }
        if (i > 0 && !(days_[i - 1] < days_[i])) {
            throw Error(ErrorKind::schema,
                        "trading calendar not strictly increasing at " + days_[i].iso());
        }
    }
}

TradingCalendar TradingCalendar::from_bars(const std::vector<Bar>& bars) {
    std::vector<Date> days;
    days.reserve(bars.size());
    for (const auto& b : bars) days.push_back(b.date);
    return TradingCalendar(std::move(days));
}

TradingCalendar TradingCalendar::exchange(Date start, Date end) {
    std::vector<Date> holidays;
    for (int y = start.year(); y <= end.year() + 1; ++y) {
        auto h = exchange_holidays(y);
        holidays.insert(holidays.end(), h.begin(), h.end());
    }
    std::sort(holidays.begin(), holidays.end());
    std::vector<Date> days;
    for (Date d = start; d <= end; d = d + 1) {
        if (d.is_weekend()) continue;
        if (std::binary_search(holidays.begin(), holidays.end(), d)) continue;
        days.push_back(d);
    }
    return TradingCalendar(std::move(days));
}

bool TradingCalendar::contains(Date d) const {
    return std::binary_search(days_.begin(), days_.end(), d);
}

std::vector<Date> exchange_holidays(int y) {
    using namespace std::chrono;
    std::vector<Date> out;
    // New Year's Day: a Saturday holiday is not observed on the prior Friday.
    Date ny(y, 1, 1);
    if (weekday{ny.sys_days()} == Sunday) {
        out.push_back(ny + 1);
    } else if (weekday{ny.sys_days()} != Saturday) {
        out.push_back(ny);
    }
    out.push_back(nth_weekday(y, 1, Monday, 3));   // Martin Luther King Jr. Day
    out.push_back(nth_weekday(y, 2, Monday, 3));   // Washington's Birthday
    out.push_back(easter_sunday(y) - 2);           // Good Friday
    out.push_back(last_weekday(y, 5, Monday));     // Memorial Day
    if (y >= 2022) out.push_back(observed(Date(y, 6, 19)));
    out.push_back(observed(Date(y, 7, 4)));
    out.push_back(nth_weekday(y, 9, Monday, 1));   // Labor Day
    out.push_back(nth_weekday(y, 11, Thursday, 4));  // Thanksgiving
    out.push_back(observed(Date(y, 12, 25)));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Bar> parse_bars(std::string_view text, const std::string& source) {
    const auto table = csv::parse(text, source);
    csv::require_header(table, {"date", "open", "high", "low", "close", "volume"}, source);
    std::vector<Bar> bars;
    bars.reserve(table.rows.size());
    std::vector<std::size_t> lines;
    for (const auto& row : table.rows) {
        Bar b;
        b.date = date_field(row, 0, source);
        b.open = price_field(row, 1, source, "open");
        b.high = price_field(row, 2, source, "high");
        b.low = price_field(row, 3, source, "low");
        b.close = price_field(row, 4, source, "close");
        b.volume = count_field(row, 5, source, "volume");
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close) ||
            b.low > b.high) {
            schema_error(source, row.line, "OHLC invariant violated on " + b.date.iso());
        }
        bars.push_back(b);
        lines.push_back(row.line);
    }
    std::vector<std::size_t> order(bars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return bars[a].date < bars[b].date; });
    std::vector<Bar> sorted;
    sorted.reserve(bars.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && bars[order[k]].date == bars[order[k - 1]].date) {
            schema_error(source, lines[order[k]], "duplicate date " + bars[order[k]].date.iso());
        }
        sorted.push_back(bars[order[k]]);
    }
    return sorted;
}

std::vector<Bar> load_bars(const std::filesystem::path& path) {
    const auto table_text = [&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::missing_file, "cannot open " + path.string());
        return std::string(std::istreambuf_iterator<char>(in), {});
    }();
    return parse_bars(table_text, path.string());
}

std::string format_bars(const std::vector<Bar>& bars) {
    std::string out = "date,open,high,low,close,volume\n";
    for (const auto& b : bars) {
        out += b.date.iso() + ',' + csv::shortest(b.open) + ',' + csv::shortest(b.high) + ',' +
               csv::shortest(b.low) + ',' + csv::shortest(b.close) + ',' +
               std::to_string(b.volume) + '\n';
    }
    return out;
}

std::vector<CountObservation> parse_counts(std::string_view text, const std::string& source) {
    const auto table = csv::parse(text, source);
    csv::require_header(table, {"date", "count"}, source);
    std::map<Date, CountObservation> by_date;
    for (const auto& row : table.rows) {
        CountObservation obs{date_field(row, 0, source), count_field(row, 1, source, "count")};
        if (!by_date.emplace(obs.date, obs).second) {
            schema_error(source, row.line, "duplicate date " + obs.date.iso());
        }
    }
    std::vector<CountObservation> out;
    out.reserve(by_date.size());
    for (const auto& [d, obs] : by_date) out.push_back(obs);
    return out;
}

std::vector<CountObservation> load_counts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::missing_file, "cannot open " + path.string());
    return parse_counts(std::string(std::istreambuf_iterator<char>(in), {}), path.string());
}

std::string format_counts(const std::vector<CountObservation>& counts) {
    std::string out = "date,count\n";
    for (const auto& c : counts) out += c.date.iso() + ',' + std::to_string(c.count) + '\n';
    return out;
}

std::vector<RawOptionQuote> parse_options(std::string_view text, const std::string& source) {
    const auto table = csv::parse(text, source);
    csv::require_header(table, {"trade_date", "expiry", "strike", "type", "bid", "ask"}, source);
    std::vector<RawOptionQuote> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        RawOptionQuote q;
        q.trade_date = date_field(row, 0, source);
        q.expiry = date_field(row, 1, source);
        q.strike = price_field(row, 2, source, "strike");
        const auto& type = row.fields[3];
        if (type == "C") {
            q.is_call = true;
        } else if (type == "P") {
            q.is_call = false;
        } else {
            schema_error(source, row.line, "option type must be C or P, got '" + type + "'");
        }
        q.bid = price_field(row, 4, source, "bid");
        q.ask = price_field(row, 5, source, "ask");
        if (q.strike <= 0.0) schema_error(source, row.line, "strike must be positive");
        if (q.bid > q.ask) schema_error(source, row.line, "bid exceeds ask");
        if (!(q.trade_date < q.expiry)) {
            schema_error(source, row.line, "expiry must be after trade date");
        }
        out.push_back(q);
    }
    return out;
}

std::vector<RawOptionQuote> load_options(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::missing_file, "cannot open " + path.string());
    return parse_options(std::string(std::istreambuf_iterator<char>(in), {}), path.string());
}

std::string format_options(const std::vector<RawOptionQuote>& quotes) {
    std::string out = "trade_date,expiry,strike,type,bid,ask\n";
    for (const auto& q : quotes) {
        out += q.trade_date.iso() + ',' + q.expiry.iso() + ',' + csv::shortest(q.strike) + ',' +
               (q.is_call ? "C" : "P") + ',' + csv::shortest(q.bid) + ',' + csv::shortest(q.ask) +
               '\n';
    }
    return out;
}

std::vector<RatePoint> load_rates(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, {"date", "rate"}, source);
    std::vector<RatePoint> out;
    for (const auto& row : table.rows) {
        RatePoint p{date_field(row, 0, source), 0.0};
        try {
            p.rate = csv::parse_double(row.fields[1], row.line, "rate");
        } catch (const Error& e) {
            throw Error(ErrorKind::schema, source + ": " + e.what());
        }
        if (!out.empty() && !(out.back().date < p.date)) {
            schema_error(source, row.line, "rate dates must be strictly increasing");
        }
        out.push_back(p);
    }
    return out;
}

AlignmentPolicy parse_alignment_policy(std::string_view text) {
    if (text == "drop-non-trading" || text == "drop") return AlignmentPolicy::drop_non_trading;
    if (text == "sum-into-next" || text == "sum") return AlignmentPolicy::sum_into_next;
    if (text == "carry-forward" || text == "carry") return AlignmentPolicy::carry_forward;
    throw Error(ErrorKind::usage, "unknown alignment policy '" + std::string(text) + "'");
}

std::string_view to_string(AlignmentPolicy policy) {
    switch (policy) {
        case AlignmentPolicy::drop_non_trading: return "drop-non-trading";
        case AlignmentPolicy::sum_into_next: return "sum-into-next";
        case AlignmentPolicy::carry_forward: return "carry-forward";
    }
    return "?";
}

DailySeries align_to_calendar(const std::vector<CountObservation>& series,
                              const TradingCalendar& calendar, AlignmentPolicy policy,
                              std::string name) {
    if (series.empty()) throw Error(ErrorKind::schema, "series '" + name + "' is empty");
    std::map<Date, long long> by_date;
    for (const auto& obs : series) {
        if (!by_date.emplace(obs.date, obs.count).second) {
            throw Error(ErrorKind::schema, "series '" + name + "': duplicate date " + obs.date.iso());
        }
    }

    DailySeries out;
    out.name = std::move(name);
    out.dates = calendar.days();
    out.values.reserve(calendar.size());

    auto missing = [&](Date d) {
        return Error(ErrorKind::schema, "series '" + out.name + "': no value derivable for trading day " +
                                            d.iso() + " under policy " +
                                            std::string(to_string(policy)));
    };

    const auto& days = calendar.days();
    for (std::size_t k = 0; k < days.size(); ++k) {
        const Date d = days[k];
        switch (policy) {
            case AlignmentPolicy::drop_non_trading: {
                const auto it = by_date.find(d);
                if (it == by_date.end()) throw missing(d);
                out.values.push_back(static_cast<double>(it->second));
                break;
            }
            case AlignmentPolicy::sum_into_next: {
                const auto first = k == 0 ? by_date.lower_bound(d) : by_date.upper_bound(days[k - 1]);
                const auto last = by_date.upper_bound(d);
                if (first == last) throw missing(d);
                long long total = 0;
                for (auto it = first; it != last; ++it) total += it->second;
                out.values.push_back(static_cast<double>(total));
                break;
            }
            case AlignmentPolicy::carry_forward: {
                const auto it = by_date.find(d);
                if (it != by_date.end()) {
                    out.values.push_back(static_cast<double>(it->second));
                } else if (k == 0) {
                    throw missing(d);
                } else {
                    out.values.push_back(out.values.back());
                }
                break;
            }
        }
    }
    return out;
}

}  // namespace ivlab
