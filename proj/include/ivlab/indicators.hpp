#pragma once

#include <span>
#include <vector>

// Technical indicators over aligned daily values. Entries that are undefined
// (warm-up, zero denominators) are NaN. Every value at index t depends only
// on inputs at indices <= t.
namespace ivlab::indicators {

std::vector<double> sma(std::span<const double> x, int n);

/// Recursive EMA with alpha = 2/(n+1), seeded at index n-1 by the n-point mean.
std::vector<double> ema(std::span<const double> x, int n);

/// 100 * (x_t - x_{t-n}) / x_{t-n}
std::vector<double> roc(std::span<const double> x, int n);

/// 100 * x_t / SMA_n(x)_t
std::vector<double> disparity(std::span<const double> x, int n);

/// x_t - x_{t-n}
std::vector<double> momentum1(std::span<const double> x, int n);

/// x_t / x_{t-n}
std::vector<double> momentum2(std::span<const double> x, int n);

/// Wilder RSI in [0, 100]; first value at index n. A window with neither
/// gains nor losses yields 50.
std::vector<double> rsi(std::span<const double> x, int n);

/// -100 * (HH_n - close) / (HH_n - LL_n); -50 when the range is empty.
std::vector<double> williams_r(std::span<const double> high, std::span<const double> low,
                               std::span<const double> close, int n);

/// 100 * (close - LL_n) / (HH_n - LL_n); 50 when the range is empty.
std::vector<double> stochastic_k(std::span<const double> high, std::span<const double> low,
                                 std::span<const double> close, int n);

/// 1 if indicator_t > indicator_{t-1}, else 0; NaN where either is undefined.
std::vector<double> move_of(std::span<const double> indicator);

}  // namespace ivlab::indicators
