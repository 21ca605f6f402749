#include "tsecon/series.hpp"

#include "tsecon/errors.hpp"

#include <cmath>
#include <utility>

namespace tsecon {

ObservationSeries ObservationSeries::create(std::vector<Date> dates, std::vector<double> values,
                                            std::string label) {
    if (dates.size() != values.size())
        throw DataError("series '" + label + "': dates and values differ in length");
    if (values.size() < 2)
        throw DataError("series '" + label + "': need at least 2 observations");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0)
            throw DataError("series '" + label + "': non-positive level at " +
                            dates[i].to_string());
        if (i > 0 && !(dates[i - 1] < dates[i])) {
            if (dates[i - 1] == dates[i])
                throw DataError("series '" + label + "': duplicate date " + dates[i].to_string());
            throw DataError("series '" + label + "': dates not increasing at " +
                            dates[i].to_string());
        }
    }
    return ObservationSeries{std::move(dates), std::move(values), std::move(label)};
}

ReturnSeries ReturnSeries::create(std::vector<Date> dates, std::vector<double> values,
                                  std::string source_label) {
    if (dates.size() != values.size())
        throw DataError("return series '" + source_label + "': dates and values differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw DataError("return series '" + source_label + "': non-finite value at " +
                            dates[i].to_string());
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw DataError("return series '" + source_label + "': dates not increasing at " +
                            dates[i].to_string());
    }
    return ReturnSeries{std::move(dates), std::move(values), std::move(source_label)};
}

ReturnSeries log_returns(const ObservationSeries& series) {
    if (series.size() < 2) throw DataError("log_returns: need at least 2 observations");
    const std::size_t n = series.size();
    std::vector<double> r(n - 1);
    std::vector<Date> dates(series.dates.begin() + 1, series.dates.end());
    for (std::size_t t = 0; t + 1 < n; ++t)
        r[t] = std::log(series.values[t + 1]) - std::log(series.values[t]);
    return ReturnSeries{std::move(dates), std::move(r), series.label};
}

ReturnSeries difference(const ReturnSeries& series, int d) {
    if (d < 0) throw DataError("difference: order must be non-negative");
    if (static_cast<std::size_t>(d) >= series.size() && d > 0)
        throw DataError("difference: series too short for order " + std::to_string(d));
    ReturnSeries out = series;
    for (int k = 0; k < d; ++k) {
        const std::size_t n = out.values.size();
        if (n < 2) throw DataError("difference: series too short for order " + std::to_string(d));
        std::vector<double> v(n - 1);
        for (std::size_t t = 0; t + 1 < n; ++t) v[t] = out.values[t + 1] - out.values[t];
        out.values = std::move(v);
        out.dates.erase(out.dates.begin());
    }
    return out;
}

} // namespace tsecon
