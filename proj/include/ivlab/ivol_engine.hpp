#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ivlab/data_ingest.hpp"
#include "ivlab/series.hpp"

namespace ivlab {

/// Quotes for one expiry on one trade date.
struct ExpirySlice {
    Date expiry;
    double years = 0.0;  // time to expiry, calendar days / 365
    double rate = 0.0;   // continuously compounded risk-free rate to expiry
    std::vector<RawOptionQuote> quotes;
};

enum class StripSide { put, call, both };

struct StripEntry {
    double strike = 0.0;
    double delta_k = 0.0;
    double mid = 0.0;
    StripSide side = StripSide::both;
};

/// Out-of-the-money strip entering the variance sum, sorted by strike.
struct VarianceStrip {
    double forward = 0.0;
    double k0 = 0.0;
    std::vector<StripEntry> contributions;
};

struct TermPoint {
    double years = 0.0;
    double sigma2 = 0.0;
};

enum class InterpolationSpace { variance, volatility };

struct InterpolationOptions {
    bool clamp = false;
    InterpolationSpace space = InterpolationSpace::variance;
};

struct IvolOptions {
    int target_days = 30;
    double rate = 0.01;
    std::vector<RatePoint> rate_curve;  // overrides `rate` when non-empty
    int min_days = 7;
    InterpolationOptions interpolation;
};

struct IvolPoint {
    Date date;
    double ivol = 0.0;  // volatility points (x100)
    Date near_expiry;
    Date next_expiry;
};

/// F = K* + e^{RT} (C(K*) - P(K*)) at the strike minimizing |C - P| among
/// strikes with both mids positive; ties go to the lowest strike.
double forward_level(const ExpirySlice& slice);

/// Selects K0 and the out-of-the-money strip. Zero-bid quotes are skipped and
/// each side stops after two consecutive zero bids.
VarianceStrip select_strip(const ExpirySlice& slice, double forward);

/// Annualized variance of one term. Throws ErrorKind::computation for a
/// negative result (degenerate chain).
double term_variance(const VarianceStrip& strip, double years, double rate);

/// Convenience: forward, strip and variance of a slice.
double slice_variance(const ExpirySlice& slice);

/// Constant-maturity implied volatility (x100). Total variance is interpolated
/// linearly in time; `next` may be empty only when clamping is enabled.
double interpolate_constant_maturity(TermPoint near, std::optional<TermPoint> next,
                                     double target_years, const InterpolationOptions& options = {});

/// Groups one trade date's quotes into slices (sorted by expiry).
std::vector<ExpirySlice> make_slices(const std::vector<RawOptionQuote>& quotes, Date trade_date,
                                     double rate);

/// One point per calendar day. Throws ErrorKind::computation listing every
/// day without a usable pair of expiries.
std::vector<IvolPoint> daily_ivol_series(const std::vector<RawOptionQuote>& quotes,
                                         const TradingCalendar& calendar,
                                         const IvolOptions& options);

DailySeries to_series(const std::vector<IvolPoint>& points);

// ivol.csv: date,ivol,near_expiry,next_expiry
std::string format_ivol(const std::vector<IvolPoint>& points);
std::vector<IvolPoint> load_ivol(const std::filesystem::path& path);

}  // namespace ivlab
