#pragma once

#include "tsecon/series.hpp"

#include <filesystem>
#include <string>

namespace tsecon {

/// Load a dated level series from a headered CSV file. Dates must be
/// ISO-8601 `YYYY-MM-DD`; rows are sorted by date on load. Throws DataError
/// for a missing file, unknown column, unparseable row (reported with its
/// 1-based line number), duplicate date, or non-positive value.
ObservationSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                           const std::string& value_column);

/// Load an already-computed return/residual series (any finite values) from
/// a headered CSV file. Same parsing and sorting rules as load_csv.
ReturnSeries load_returns_csv(const std::filesystem::path& path, const std::string& date_column,
                              const std::string& value_column);

/// Write a dated series as `date,value` CSV with a header row.
void write_series_csv(const std::filesystem::path& path, const ReturnSeries& series,
                      const std::string& value_header = "value");
void write_series_csv(const std::filesystem::path& path, const ObservationSeries& series,
                      const std::string& value_header = "value");

} // namespace tsecon
