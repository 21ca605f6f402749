#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tsecon {

/// Calendar date in the proleptic Gregorian calendar. Parsing and formatting
/// are fixed to ISO-8601 `YYYY-MM-DD`.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Parse `YYYY-MM-DD`; throws DataError on malformed or invalid dates.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    /// Days since 1970-01-01 (negative before the epoch).
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);

    Date next_day() const { return from_serial(serial() + 1); }
};

bool is_valid_date(int year, int month, int day);

/// Consecutive calendar days starting at `start` (used by simulators to
/// attach dates to synthetic series).
std::vector<Date> date_range(Date start, std::size_t n);

} // namespace tsecon
