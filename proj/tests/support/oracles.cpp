#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace ivlab::oracle {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> undefined(std::size_t n) { return std::vector<double>(n, nan); }

}  // namespace

std::vector<double> sma(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    for (std::size_t t = n - 1; t < x.size(); ++t) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += x[t - j];
        out[t] = s / n;
    }
    return out;
}

std::vector<double> ema(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    const long double a = 2.0L / (n + 1);
    long double seed = 0;
    for (int j = 0; j < n; ++j) seed += x[j];
    seed /= n;
    for (std::size_t t = n - 1; t < x.size(); ++t) {
        const auto steps = static_cast<int>(t - (n - 1));
        long double v = std::pow(1 - a, steps) * seed;
        for (int j = 0; j < steps; ++j) v += a * std::pow(1 - a, j) * x[t - j];
        out[t] = static_cast<double>(v);
    }
    return out;
}

std::vector<double> ema_move(const std::vector<double>& x, int n) {
    using boost::multiprecision::cpp_int;
    // Every double is m * 2^e with integer m; rescale all of them to one common exponent.
    int common = std::numeric_limits<int>::max();
    for (const double v : x) {
        int e = 0;
        if (v != 0) std::frexp(v, &e);
        common = std::min(common, e - 53);
    }
    std::vector<cpp_int> m;
    for (const double v : x) {
        int e = 0;
        const double f = std::frexp(v, &e);
        cpp_int k = static_cast<long long>(std::ldexp(f, 53));
        m.push_back(v == 0 ? cpp_int(0) : cpp_int(k << (e - 53 - common)));
    }
    // EMA_t = P_t / (n * (n+1)^k) with k = t - n + 1, so each comparison stays in integers.
    auto out = undefined(x.size());
    cpp_int p = 0;
    for (int j = 0; j < n; ++j) p += m[j];
    cpp_int scale = 1;  // (n+1)^k for the previous day
    for (std::size_t t = n; t < x.size(); ++t) {
        const cpp_int lhs = m[t] * n * scale;
        out[t] = lhs > p ? 1.0 : 0.0;
        p = (n - 1) * p + 2 * lhs;
        scale *= n + 1;
    }
    return out;
}

std::vector<double> roc(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    for (std::size_t t = n; t < x.size(); ++t) {
        if (x[t - n] != 0) out[t] = 100.0 * (x[t] - x[t - n]) / x[t - n];
    }
    return out;
}

std::vector<double> disparity(const std::vector<double>& x, int n) {
    const auto m = sma(x, n);
    auto out = undefined(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (!std::isnan(m[t]) && m[t] != 0) out[t] = 100.0 * x[t] / m[t];
    }
    return out;
}

std::vector<double> momentum1(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    for (std::size_t t = n; t < x.size(); ++t) out[t] = x[t] - x[t - n];
    return out;
}

std::vector<double> momentum2(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    for (std::size_t t = n; t < x.size(); ++t) {
        if (x[t - n] != 0) out[t] = x[t] / x[t - n];
    }
    return out;
}

std::vector<double> rsi(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    std::vector<long double> g(x.size(), 0), l(x.size(), 0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const long double d = static_cast<long double>(x[i]) - x[i - 1];
        g[i] = std::max(d, 0.0L);
        l[i] = std::max(-d, 0.0L);
    }
    long double g0 = 0, l0 = 0;
    for (int i = 1; i <= n; ++i) {
        g0 += g[i];
        l0 += l[i];
    }
    g0 /= n;
    l0 /= n;
    const long double keep = (n - 1.0L) / n;
    for (std::size_t t = n; t < x.size(); ++t) {
        const auto steps = static_cast<int>(t - n);
        long double ag = std::pow(keep, steps) * g0;
        long double al = std::pow(keep, steps) * l0;
        for (int j = 0; j < steps; ++j) {
            ag += std::pow(keep, j) * g[t - j] / n;
            al += std::pow(keep, j) * l[t - j] / n;
        }
        if (ag == 0 && al == 0) {
            out[t] = 50.0;
        } else {
            out[t] = static_cast<double>(100 * ag / (ag + al));
        }
    }
    return out;
}

std::vector<double> rsi_move(const std::vector<double>& x, int n) {
    auto out = undefined(x.size());
    double loss_sum = 0, gain_sum = 0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double d = x[t] - x[t - 1];
        if (t > static_cast<std::size_t>(n)) {
            // A rise lifts the index unless it was already pinned at 100 (no losses so far).
            // A fall or a flat day never lifts it, except the first rise off the flat 50.
            const bool pinned_high = loss_sum == 0 && gain_sum > 0;
            out[t] = d > 0 && !pinned_high ? 1.0 : 0.0;
        }
        gain_sum += std::max(d, 0.0);
        loss_sum += std::max(-d, 0.0);
    }
    return out;
}

namespace {

template <class F>
std::vector<double> range_oscillator(const std::vector<double>& h, const std::vector<double>& l,
                                     const std::vector<double>& c, int n, double flat, F f) {
    auto out = undefined(c.size());
    for (std::size_t t = n - 1; t < c.size(); ++t) {
        double hh = -std::numeric_limits<double>::infinity();
        double ll = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            hh = std::max(hh, h[t - j]);
            ll = std::min(ll, l[t - j]);
        }
        out[t] = hh == ll ? flat : f(hh, ll, c[t]);
    }
    return out;
}

}  // namespace

std::vector<double> williams_r(const std::vector<double>& h, const std::vector<double>& l,
                               const std::vector<double>& c, int n) {
    return range_oscillator(h, l, c, n, -50.0,
                            [](double hh, double ll, double cl) { return -100.0 * (hh - cl) / (hh - ll); });
}

std::vector<double> stochastic_k(const std::vector<double>& h, const std::vector<double>& l,
                                 const std::vector<double>& c, int n) {
    return range_oscillator(h, l, c, n, 50.0,
                            [](double hh, double ll, double cl) { return 100.0 * (cl - ll) / (hh - ll); });
}

std::vector<double> move_of(const std::vector<double>& x) {
    auto out = undefined(x.size());
    for (std::size_t t = 1; t < x.size(); ++t) {
        if (!std::isnan(x[t]) && !std::isnan(x[t - 1])) out[t] = x[t] > x[t - 1] ? 1.0 : 0.0;
    }
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool na = std::isnan(a[i]), nb = std::isnan(b[i]);
        if (na && nb) continue;
        if (na != nb) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace ivlab::oracle
