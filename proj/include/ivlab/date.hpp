#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace ivlab {

/// Calendar day with ISO-8601 (YYYY-MM-DD) text form.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Throws ivlab::Error (schema) on anything other than a valid YYYY-MM-DD.
    static Date parse(std::string_view text);

    std::string iso() const;
    std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
    std::chrono::sys_days sys_days() const { return days_; }
    int year() const { return static_cast<int>(ymd().year()); }
    bool is_weekend() const;

    Date operator+(int days) const { return Date{days_ + std::chrono::days{days}}; }
    Date operator-(int days) const { return Date{days_ - std::chrono::days{days}}; }
    /// Signed calendar-day difference.
    int operator-(const Date& other) const {
        return static_cast<int>((days_ - other.days_).count());
    }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace ivlab

template <>
struct std::hash<ivlab::Date> {
    std::size_t operator()(const ivlab::Date& d) const noexcept {
        return std::hash<long long>{}(d.sys_days().time_since_epoch().count());
    }
};
