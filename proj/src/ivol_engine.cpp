#include "ivlab/ivol_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ivlab/csv.hpp"
#include "ivlab/error.hpp"
#include "ivlab/log.hpp"

namespace ivlab {

namespace {

struct StrikeQuotes {
    const RawOptionQuote* call = nullptr;
    const RawOptionQuote* put = nullptr;
};

std::map<double, StrikeQuotes> by_strike(const ExpirySlice& slice) {
    std::map<double, StrikeQuotes> out;
    for (const auto& q : slice.quotes) {
        auto& entry = out[q.strike];
        auto& slot = q.is_call ? entry.call : entry.put;
        if (slot != nullptr) {
            throw Error(ErrorKind::schema, "duplicate " + std::string(q.is_call ? "call" : "put") +
                                               " quote at strike " + csv::shortest(q.strike) +
                                               " for expiry " + slice.expiry.iso());
        }
        slot = &q;
    }
    return out;
}

double rate_on(Date day, const IvolOptions& options) {
    if (options.rate_curve.empty()) return options.rate;
    const auto it = std::upper_bound(options.rate_curve.begin(), options.rate_curve.end(), day,
                                     [](Date d, const RatePoint& p) { return d < p.date; });
    if (it == options.rate_curve.begin()) {
        throw Error(ErrorKind::schema, "rate curve starts after " + day.iso());
    }
    return std::prev(it)->rate;
}

}  // namespace

double forward_level(const ExpirySlice& slice) {
    const auto strikes = by_strike(slice);
    std::optional<double> best_strike;
    double best_gap = std::numeric_limits<double>::infinity();
    double best_diff = 0.0;
    for (const auto& [k, q] : strikes) {
        if (q.call == nullptr || q.put == nullptr) continue;
        const double c = q.call->mid();
        const double p = q.put->mid();
        if (!(c > 0.0 && p > 0.0)) continue;
        const double gap = std::abs(c - p);
        // Strict comparison keeps the lowest strike on ties (map iterates ascending).
        if (gap < best_gap) {
            best_gap = gap;
            best_strike = k;
            best_diff = c - p;
        }
    }
    if (!best_strike) {
        throw Error(ErrorKind::computation,
                    "expiry " + slice.expiry.iso() + ": no strike quoted on both sides");
    }
    return *best_strike + std::exp(slice.rate * slice.years) * best_diff;
}

VarianceStrip select_strip(const ExpirySlice& slice, double forward) {
    const auto strikes = by_strike(slice);
    if (strikes.empty()) throw Error(ErrorKind::computation, "empty option slice");

    auto k0_it = strikes.upper_bound(forward);
    if (k0_it == strikes.begin()) {
        throw Error(ErrorKind::computation, "expiry " + slice.expiry.iso() +
                                                ": forward below the lowest listed strike");
    }
    --k0_it;

    VarianceStrip strip;
    strip.forward = forward;
    strip.k0 = k0_it->first;

    std::vector<StripEntry> entries;
    {
        const auto& q = k0_it->second;
        double mid = 0.0;
        if (q.call != nullptr && q.put != nullptr) {
            mid = 0.5 * (q.call->mid() + q.put->mid());
        } else {
            mid = (q.call != nullptr ? q.call : q.put)->mid();
        }
        entries.push_back({strip.k0, 0.0, mid, StripSide::both});
    }

    // Puts below K0, walking down.
    int zero_run = 0;
    for (auto it = std::make_reverse_iterator(k0_it); it != strikes.rend(); ++it) {
        const auto* put = it->second.put;
        if (put == nullptr) continue;
        if (put->bid <= 0.0) {
            if (++zero_run == 2) break;
            continue;
        }
        zero_run = 0;
        entries.push_back({it->first, 0.0, put->mid(), StripSide::put});
    }
    // Calls above K0, walking up.
    zero_run = 0;
    for (auto it = std::next(k0_it); it != strikes.end(); ++it) {
        const auto* call = it->second.call;
        if (call == nullptr) continue;
        if (call->bid <= 0.0) {
            if (++zero_run == 2) break;
            continue;
        }
        zero_run = 0;
        entries.push_back({it->first, 0.0, call->mid(), StripSide::call});
    }

    std::sort(entries.begin(), entries.end(),
              [](const StripEntry& a, const StripEntry& b) { return a.strike < b.strike; });

    const std::size_t n = entries.size();
    if (n == 1) {
        double spacing = std::numeric_limits<double>::infinity();
        for (const auto& [k, q] : strikes) {
            if (k != strip.k0) spacing = std::min(spacing, std::abs(k - strip.k0));
        }
        if (!std::isfinite(spacing)) {
            throw Error(ErrorKind::computation,
                        "expiry " + slice.expiry.iso() + ": single listed strike, no strike interval");
        }
        entries[0].delta_k = spacing;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) {
                entries[i].delta_k = entries[1].strike - entries[0].strike;
            } else if (i + 1 == n) {
                entries[i].delta_k = entries[i].strike - entries[i - 1].strike;
            } else {
                entries[i].delta_k = 0.5 * (entries[i + 1].strike - entries[i - 1].strike);
            }
        }
    }
    strip.contributions = std::move(entries);
    return strip;
}

double term_variance(const VarianceStrip& strip, double years, double rate) {
    if (strip.contributions.empty()) throw Error(ErrorKind::computation, "empty variance strip");
    if (!(years > 0.0)) throw Error(ErrorKind::computation, "time to expiry must be positive");
    const double growth = std::exp(rate * years);
    double sum = 0.0;
    for (const auto& c : strip.contributions) {
        sum += c.delta_k / (c.strike * c.strike) * growth * c.mid;
    }
    const double adj = strip.forward / strip.k0 - 1.0;
    const double sigma2 = 2.0 / years * sum - adj * adj / years;
    if (sigma2 < 0.0) {
        throw Error(ErrorKind::computation,
                    "degenerate chain: negative term variance " + csv::shortest(sigma2));
    }
    return sigma2;
}

double slice_variance(const ExpirySlice& slice) {
    const double f = forward_level(slice);
    return term_variance(select_strip(slice, f), slice.years, slice.rate);
}

double interpolate_constant_maturity(TermPoint near, std::optional<TermPoint> next,
                                     double target_years, const InterpolationOptions& options) {
    if (near.sigma2 < 0.0 || (next && next->sigma2 < 0.0)) {
        throw Error(ErrorKind::computation, "negative term variance");
    }
    if (!next) {
        if (!options.clamp) {
            throw Error(ErrorKind::computation, "single expiry available and clamping disabled");
        }
        log::warn("constant-maturity interpolation clamped to the only available term");
        return 100.0 * std::sqrt(near.sigma2);
    }
    if (!(near.years < next->years)) {
        throw Error(ErrorKind::computation, "near term must expire before next term");
    }
    const bool bracketed = near.years <= target_years && target_years <= next->years;
    if (!bracketed) {
        if (!options.clamp) {
            throw Error(ErrorKind::computation, "both terms on the same side of the target");
        }
        log::warn("constant-maturity interpolation clamped to the nearest term");
        const TermPoint& nearest = target_years < near.years ? near : *next;
        return 100.0 * std::sqrt(nearest.sigma2);
    }
    const double w_near = (next->years - target_years) / (next->years - near.years);
    const double w_next = (target_years - near.years) / (next->years - near.years);
    if (options.space == InterpolationSpace::volatility) {
        return 100.0 * (w_near * std::sqrt(near.sigma2) + w_next * std::sqrt(next->sigma2));
    }
    if (w_next == 0.0) return 100.0 * std::sqrt(near.sigma2);
    const double total = w_near * near.years * near.sigma2 + w_next * next->years * next->sigma2;
    return 100.0 * std::sqrt(total / target_years);
}

std::vector<ExpirySlice> make_slices(const std::vector<RawOptionQuote>& quotes, Date trade_date,
                                     double rate) {
    std::map<Date, ExpirySlice> slices;
    for (const auto& q : quotes) {
        if (q.trade_date != trade_date) continue;
        auto& s = slices[q.expiry];
        if (s.quotes.empty()) {
            s.expiry = q.expiry;
            s.years = static_cast<double>(q.expiry - trade_date) / 365.0;
            s.rate = rate;
        }
        s.quotes.push_back(q);
    }
    std::vector<ExpirySlice> out;
    out.reserve(slices.size());
    for (auto& [d, s] : slices) out.push_back(std::move(s));
    return out;
}

std::vector<IvolPoint> daily_ivol_series(const std::vector<RawOptionQuote>& quotes,
                                         const TradingCalendar& calendar,
                                         const IvolOptions& options) {
    std::map<Date, std::vector<RawOptionQuote>> by_day;
    std::size_t off_calendar = 0;
    for (const auto& q : quotes) {
        if (calendar.contains(q.trade_date)) {
            by_day[q.trade_date].push_back(q);
        } else {
            ++off_calendar;
        }
    }
    if (off_calendar > 0) {
        log::warn(std::to_string(off_calendar) + " option quote(s) on non-calendar days ignored");
    }

    const double target_years = options.target_days / 365.0;
    std::vector<IvolPoint> out;
    std::vector<std::string> failures;

    for (const Date day : calendar.days()) {
        const auto it = by_day.find(day);
        if (it == by_day.end()) {
            failures.push_back(day.iso() + " (no quotes)");
            continue;
        }
        struct Usable {
            Date expiry;
            int days;
            TermPoint term;
        };
        std::vector<Usable> usable;
        for (const auto& slice : make_slices(it->second, day, rate_on(day, options))) {
            const int dte = slice.expiry - day;
            if (dte < options.min_days) continue;
            try {
                usable.push_back({slice.expiry, dte, {slice.years, slice_variance(slice)}});
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::computation) throw;
            }
        }
        if (usable.empty()) {
            failures.push_back(day.iso() + " (no usable expiry)");
            continue;
        }

        std::size_t near_idx = 0;
        std::optional<std::size_t> next_idx;
        const auto after = std::find_if(usable.begin(), usable.end(),
                                        [&](const Usable& u) { return u.days > options.target_days; });
        if (after == usable.end()) {
            if (usable.size() >= 2) {
                near_idx = usable.size() - 2;
                next_idx = usable.size() - 1;
            } else {
                near_idx = 0;
            }
        } else if (after == usable.begin()) {
            near_idx = 0;
            if (usable.size() >= 2) next_idx = 1;
        } else {
            next_idx = static_cast<std::size_t>(after - usable.begin());
            near_idx = *next_idx - 1;
        }

        try {
            std::optional<TermPoint> next;
            if (next_idx) next = usable[*next_idx].term;
            const double ivol = interpolate_constant_maturity(usable[near_idx].term, next,
                                                              target_years, options.interpolation);
            out.push_back({day, ivol, usable[near_idx].expiry,
                           next_idx ? usable[*next_idx].expiry : usable[near_idx].expiry});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::computation) throw;
            failures.push_back(day.iso() + " (" + e.what() + ")");
        }
    }

    if (!failures.empty()) {
        std::string msg = "no usable option chain on " + std::to_string(failures.size()) + " day(s): ";
        for (std::size_t i = 0; i < failures.size(); ++i) msg += (i ? ", " : "") + failures[i];
        throw Error(ErrorKind::computation, msg);
    }
    return out;
}

DailySeries to_series(const std::vector<IvolPoint>& points) {
    DailySeries s;
    s.name = "ivol";
    for (const auto& p : points) {
        s.dates.push_back(p.date);
        s.values.push_back(p.ivol);
    }
    return s;
}

std::string format_ivol(const std::vector<IvolPoint>& points) {
    std::string out = "date,ivol,near_expiry,next_expiry\n";
    for (const auto& p : points) {
        out += p.date.iso() + ',' + csv::fixed(p.ivol, 6) + ',' + p.near_expiry.iso() + ',' +
               p.next_expiry.iso() + '\n';
    }
    return out;
}

std::vector<IvolPoint> load_ivol(const std::filesystem::path& path) {
    const auto source = path.string();
    const auto table = csv::read(path);
    csv::require_header(table, {"date", "ivol", "near_expiry", "next_expiry"}, source);
    std::vector<IvolPoint> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        try {
            IvolPoint p{Date::parse(row.fields[0]), csv::parse_double(row.fields[1], row.line, "ivol"),
                        Date::parse(row.fields[2]), Date::parse(row.fields[3])};
            if (p.ivol < 0.0) throw Error(ErrorKind::schema, "negative ivol");
            if (!out.empty() && !(out.back().date < p.date)) {
                throw Error(ErrorKind::schema, "dates must be strictly increasing");
            }
            out.push_back(p);
        } catch (const Error& e) {
            throw Error(ErrorKind::schema, source + ": line " + std::to_string(row.line) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ivlab
