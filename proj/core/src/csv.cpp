#include "tsecon/csv.hpp"

#include "tsecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace tsecon {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

namespace {

struct RawColumns {
    std::vector<Date> dates;
    std::vector<double> values;
};

RawColumns read_columns(const std::filesystem::path& path, const std::string& date_column,
                        const std::string& value_column, bool require_positive) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path.string());

    const auto header = split_line(line);
    const auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError(path.string() + ": column '" + name + "' not found in header");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_idx = find_col(date_column);
    const std::size_t value_idx = find_col(value_column);

    RawColumns out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() <= std::max(date_idx, value_idx))
            throw DataError(path.string() + ": row " + std::to_string(lineno) +
                            ": too few fields");
        Date d;
        try {
            d = Date::parse(fields[date_idx]);
        } catch (const DataError& e) {
            throw DataError(path.string() + ": row " + std::to_string(lineno) + ": " + e.what());
        }
        const std::string& raw = fields[value_idx];
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (raw.empty() || end != raw.c_str() + raw.size())
            throw DataError(path.string() + ": row " + std::to_string(lineno) +
                            ": unparseable value '" + raw + "'");
        if (!std::isfinite(v) || (require_positive && v <= 0.0))
            throw DataError(path.string() + ": row " + std::to_string(lineno) +
                            ": non-positive level " + raw + " on " + d.to_string());
        out.dates.push_back(d);
        out.values.push_back(v);
    }

    // Sort by date; duplicate dates are rejected by the series factories.
    std::vector<std::size_t> order(out.dates.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.dates[a] < out.dates[b]; });
    RawColumns sorted;
    sorted.dates.resize(out.dates.size());
    sorted.values.resize(out.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.dates[i] = out.dates[order[i]];
        sorted.values[i] = out.values[order[i]];
    }
    return sorted;
}

} // namespace

ObservationSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                           const std::string& value_column) {
    auto cols = read_columns(path, date_column, value_column, true);
    return ObservationSeries::create(std::move(cols.dates), std::move(cols.values),
                                     path.stem().string());
}

ReturnSeries load_returns_csv(const std::filesystem::path& path, const std::string& date_column,
                              const std::string& value_column) {
    auto cols = read_columns(path, date_column, value_column, false);
    return ReturnSeries::create(std::move(cols.dates), std::move(cols.values),
                                path.stem().string());
}

namespace {

template <typename Series>
void write_csv_impl(const std::filesystem::path& path, const Series& series,
                    const std::string& value_header) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "date," << value_header << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.size(); ++i)
        out << series.dates[i].to_string() << "," << series.values[i] << "\n";
}

} // namespace

void write_series_csv(const std::filesystem::path& path, const ReturnSeries& series,
                      const std::string& value_header) {
    write_csv_impl(path, series, value_header);
}

void write_series_csv(const std::filesystem::path& path, const ObservationSeries& series,
                      const std::string& value_header) {
    write_csv_impl(path, series, value_header);
}

} // namespace tsecon
