#include "ivlab/date.hpp"

#include <cstdio>

#include "ivlab/error.hpp"

namespace ivlab {

using namespace std::chrono;

Date::Date(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::schema, "invalid calendar date " + std::to_string(y) + "-" +
                                           std::to_string(m) + "-" + std::to_string(d));
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    auto digits = [&](std::size_t from, std::size_t len) {
        int v = 0;
        for (std::size_t i = from; i < from + len; ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') return -1;
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw Error(ErrorKind::schema, "bad date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const int y = digits(0, 4);
    const int m = digits(5, 2);
    const int d = digits(8, 2);
    if (y < 0 || m < 0 || d < 0) {
        throw Error(ErrorKind::schema, "bad date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    const auto v = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                  static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
    return buf;
}

bool Date::is_weekend() const {
    const weekday wd{days_};
    return wd == Saturday || wd == Sunday;
}

}  // namespace ivlab
