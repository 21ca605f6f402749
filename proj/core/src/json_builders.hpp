// Internal JSON builders shared by serialize.cpp and pipeline.cpp.
#pragma once

#include "tsecon/arima.hpp"
#include "tsecon/dcc.hpp"
#include "tsecon/descriptive.hpp"
#include "tsecon/garch.hpp"
#include "tsecon/hypothesis.hpp"

#include <json.hpp>

namespace tsecon::detail {

using ordered_json = nlohmann::ordered_json;

ordered_json json_of(const TestResult& r);
ordered_json json_of(const DescriptiveStats& s);
ordered_json json_of(const ArimaFit& fit);
ordered_json json_of(const SelectionTable& table);
ordered_json json_of(const GarchFit& fit, long n);
ordered_json json_of(const DccFit& fit);
ordered_json json_of_matrix(const Eigen::MatrixXd& m);

} // namespace tsecon::detail
