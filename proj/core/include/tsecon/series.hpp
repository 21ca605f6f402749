#pragma once

#include "tsecon/date.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tsecon {

/// Dated price/index level series. Invariants: dates strictly increasing,
/// values finite and > 0, equal lengths, at least two observations.
struct ObservationSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return values.size(); }

    /// Validates the invariants; throws DataError on violation.
    static ObservationSeries create(std::vector<Date> dates, std::vector<double> values,
                                    std::string label);
};

/// Log-return (or differenced) series. All values finite.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::string source_label;

    std::size_t size() const { return values.size(); }

    static ReturnSeries create(std::vector<Date> dates, std::vector<double> values,
                               std::string source_label);
};

/// values[t] = ln(level[t+1]) - ln(level[t]); dates taken from the later
/// observation. Requires length >= 2.
ReturnSeries log_returns(const ObservationSeries& series);

/// d-fold first differences; length shrinks by d. d = 0 returns the input.
ReturnSeries difference(const ReturnSeries& series, int d);

} // namespace tsecon
