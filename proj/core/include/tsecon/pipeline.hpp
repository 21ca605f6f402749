#pragma once

#include "tsecon/garch.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tsecon {

/// Full-pipeline configuration: ingest -> transform -> tests -> ARIMA
/// selection -> GARCH fits -> (optional) DCC -> forecasts.
struct PipelineConfig {
    std::vector<std::filesystem::path> inputs; // one series, or several for DCC
    std::string date_column = "date";
    std::string value_column = "value";

    int arima_p_max = 5;
    int arima_q_max = 5;
    std::vector<int> arima_d_set = {0, 1};

    std::vector<GarchFamily> garch_families = {GarchFamily::garch, GarchFamily::egarch};
    Innovation innovation = Innovation::student_t;
    int garch_p = 1;
    int garch_q = 1;
    bool arch_lag_search = true; // criteria table for ARCH(q), q = 1..4

    int horizon_univariate = 30;
    int horizon_dcc = 100;

    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;

    void validate() const; // throws DataError on bad settings
};

/// Runs the full analysis and writes `report.json` plus one CSV per
/// figure-equivalent into output_dir. Deterministic given config and seed.
/// Returns the path of the written report. Errors carry a stage label,
/// e.g. "[arima] ...".
std::filesystem::path run_pipeline(const PipelineConfig& config);

} // namespace tsecon
