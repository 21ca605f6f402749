#pragma once

#include <span>
#include <vector>

namespace tsecon {

/// Sample (partial) autocorrelations with the +/- 1.96/sqrt(n) white-noise
/// band. For acf() lags run 0..max_lag with value 1 at lag 0; for pacf()
/// lags run 1..max_lag.
struct AcfResult {
    std::vector<int> lags;
    std::vector<double> values;
    double conf_bound = 0.0;
};

/// rho(k) = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2, the biased
/// textbook estimator using the lag-0 denominator.
AcfResult acf(std::span<const double> series, int max_lag);

/// Partial autocorrelations via the Durbin-Levinson recursion on the sample
/// ACF. Throws EstimationError on recursion breakdown (pivot <= 0).
AcfResult pacf(std::span<const double> series, int max_lag);

} // namespace tsecon
