#pragma once

#include <stdexcept>
#include <string>

namespace tsecon {

/// Bad or unreadable input data (missing file, malformed row, invariant
/// violation in a series).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (bad grid bounds, horizons, missing inputs).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical estimation failure (degenerate regression, singular system,
/// optimizer breakdown that cannot be reported as a flagged fit).
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsecon
