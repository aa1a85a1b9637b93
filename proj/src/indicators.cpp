#include "ivlab/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ivlab/error.hpp"

namespace ivlab::indicators {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check(std::size_t length, int n, std::size_t min_length, const char* name) {
    if (n < 1) throw Error(ErrorKind::usage, std::string(name) + ": window must be >= 1");
    if (length < min_length) {
        throw Error(ErrorKind::computation, std::string(name) + ": series of length " +
                                                std::to_string(length) + " shorter than required " +
                                                std::to_string(min_length));
    }
}

double ratio_or_nan(double num, double den) { return den == 0.0 ? kNaN : num / den; }

struct Range {
    double highest;
    double lowest;
};

Range window_range(std::span<const double> high, std::span<const double> low, std::size_t t, int n) {
    Range r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t k = t + 1 - static_cast<std::size_t>(n); k <= t; ++k) {
        r.highest = std::max(r.highest, high[k]);
        r.lowest = std::min(r.lowest, low[k]);
    }
    return r;
}

void check_panel(std::span<const double> high, std::span<const double> low,
                 std::span<const double> close, int n, const char* name) {
    if (high.size() != close.size() || low.size() != close.size()) {
        throw Error(ErrorKind::schema, std::string(name) + ": misaligned high/low/close");
    }
    check(close.size(), n, static_cast<std::size_t>(std::max(n, 1)), name);
}

}  // namespace

std::vector<double> sma(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)), "sma");
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n) - 1; t < x.size(); ++t) {
        double sum = 0.0;
        for (std::size_t k = t + 1 - static_cast<std::size_t>(n); k <= t; ++k) sum += x[k];
        out[t] = sum / n;
    }
    return out;
}

std::vector<double> ema(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)), "ema");
    std::vector<double> out(x.size(), kNaN);
    const double alpha = 2.0 / (n + 1.0);
    const auto seed_at = static_cast<std::size_t>(n) - 1;
    double seed = 0.0;
    for (std::size_t k = 0; k <= seed_at; ++k) seed += x[k];
    out[seed_at] = seed / n;
    for (std::size_t t = seed_at + 1; t < x.size(); ++t) {
        out[t] = out[t - 1] + alpha * (x[t] - out[t - 1]);
    }
    return out;
}

std::vector<double> roc(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)) + 1, "roc");
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < x.size(); ++t) {
        const double base = x[t - static_cast<std::size_t>(n)];
        out[t] = ratio_or_nan(100.0 * (x[t] - base), base);
    }
    return out;
}

std::vector<double> disparity(std::span<const double> x, int n) {
    const auto ma = sma(x, n);
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (!std::isnan(ma[t])) out[t] = ratio_or_nan(100.0 * x[t], ma[t]);
    }
    return out;
}

std::vector<double> momentum1(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)) + 1, "momentum1");
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < x.size(); ++t) {
        out[t] = x[t] - x[t - static_cast<std::size_t>(n)];
    }
    return out;
}

std::vector<double> momentum2(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)) + 1, "momentum2");
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n); t < x.size(); ++t) {
        out[t] = ratio_or_nan(x[t], x[t - static_cast<std::size_t>(n)]);
    }
    return out;
}

std::vector<double> rsi(std::span<const double> x, int n) {
    check(x.size(), n, static_cast<std::size_t>(std::max(n, 1)) + 1, "rsi");
    std::vector<double> out(x.size(), kNaN);
    auto value = [](double gain, double loss) {
        if (loss == 0.0) return gain == 0.0 ? 50.0 : 100.0;
        return 100.0 - 100.0 / (1.0 + gain / loss);
    };
    double gain = 0.0;
    double loss = 0.0;
    const auto first = static_cast<std::size_t>(n);
    for (std::size_t k = 1; k <= first; ++k) {
        const double d = x[k] - x[k - 1];
        gain += std::max(d, 0.0);
        loss += std::max(-d, 0.0);
    }
    gain /= n;
    loss /= n;
    out[first] = value(gain, loss);
    for (std::size_t t = first + 1; t < x.size(); ++t) {
        const double d = x[t] - x[t - 1];
        gain = (gain * (n - 1) + std::max(d, 0.0)) / n;
        loss = (loss * (n - 1) + std::max(-d, 0.0)) / n;
        // Both averages shrink by the same factor on a flat day, so the ratio is unchanged.
        out[t] = d == 0.0 ? out[t - 1] : value(gain, loss);
    }
    return out;
}

std::vector<double> williams_r(std::span<const double> high, std::span<const double> low,
                               std::span<const double> close, int n) {
    check_panel(high, low, close, n, "williams_r");
    std::vector<double> out(close.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n) - 1; t < close.size(); ++t) {
        const auto r = window_range(high, low, t, n);
        const double span = r.highest - r.lowest;
        out[t] = span == 0.0 ? -50.0 : -100.0 * (r.highest - close[t]) / span;
    }
    return out;
}

std::vector<double> stochastic_k(std::span<const double> high, std::span<const double> low,
                                 std::span<const double> close, int n) {
    check_panel(high, low, close, n, "stochastic_k");
    std::vector<double> out(close.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n) - 1; t < close.size(); ++t) {
        const auto r = window_range(high, low, t, n);
        const double span = r.highest - r.lowest;
        out[t] = span == 0.0 ? 50.0 : 100.0 * (close[t] - r.lowest) / span;
    }
    return out;
}

std::vector<double> move_of(std::span<const double> indicator) {
    std::vector<double> out(indicator.size(), kNaN);
    for (std::size_t t = 1; t < indicator.size(); ++t) {
        const double prev = indicator[t - 1];
        const double cur = indicator[t];
        if (std::isnan(prev) || std::isnan(cur)) continue;
        out[t] = cur > prev ? 1.0 : 0.0;
    }
    return out;
}

}  // namespace ivlab::indicators
