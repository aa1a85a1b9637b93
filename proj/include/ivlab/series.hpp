#pragma once

#include <string>
#include <vector>

#include "ivlab/date.hpp"

namespace ivlab {

/// Date-indexed scalar series on trading days.
struct DailySeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    /// Same length, strictly increasing dates. Values may be NaN only where
    /// `allow_nan` is set (indicator warm-up).
    void validate(bool allow_nan = false) const;
};

}  // namespace ivlab
