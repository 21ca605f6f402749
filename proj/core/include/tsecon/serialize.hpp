#pragma once

#include "tsecon/arima.hpp"
#include "tsecon/dcc.hpp"
#include "tsecon/descriptive.hpp"
#include "tsecon/garch.hpp"
#include "tsecon/hypothesis.hpp"

#include <string>

namespace tsecon {

/// JSON renderings of result types (indented, stable key order). Test
/// results carry statistic, p_value, lags and the 5% decision.
std::string to_json_string(const TestResult& result);
std::string to_json_string(const DescriptiveStats& stats);
std::string to_json_string(const ArimaFit& fit);
std::string to_json_string(const SelectionTable& table);
std::string to_json_string(const GarchFit& fit, long n);
std::string to_json_string(const DccFit& fit);

} // namespace tsecon
