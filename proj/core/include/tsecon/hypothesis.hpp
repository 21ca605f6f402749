#pragma once

#include <span>
#include <string>

namespace tsecon {

/// Outcome of a hypothesis test. For table-based tests (ADF, KPSS) the
/// p-value is interval-censored: `p_censored` is set when the statistic falls
/// outside the tabulated range and the reported value sits at `p_floor` or
/// `p_ceiling`.
struct TestResult {
    std::string test_name;
    std::string null_hypothesis;
    double statistic = 0.0;
    double p_value = 1.0;
    int lags = 0;
    bool p_censored = false;
    double p_floor = 0.0;
    double p_ceiling = 1.0;

    bool reject_at(double level) const { return p_value < level; }
};

/// Default Ljung-Box lag choice: min(10, n/5).
int default_ljung_box_lags(std::size_t n);

/// Q = n(n+2) sum_{k=1..lags} rho_k^2 / (n-k); p-value from chi-square with
/// lags - fit_df degrees of freedom. fit_df is the number of parameters
/// estimated when the series is a model residual (p+q for ARMA).
TestResult ljung_box(std::span<const double> series, int lags, int fit_df = 0);

enum class AdfTrend {
    constant,       // demeaned regression
    constant_trend, // demeaned and detrended regression
};

/// Augmented Dickey-Fuller unit-root test: regression of dx_t on x_{t-1},
/// lag_order lagged differences and deterministic terms; t-statistic on the
/// x_{t-1} coefficient. p-value interpolated from embedded Dickey-Fuller
/// tables, censored to [0.01, 0.99]. lag_order < 0 selects the default
/// floor((n-1)^(1/3)).
TestResult adf_test(std::span<const double> series, int lag_order = -1,
                    AdfTrend trend = AdfTrend::constant_trend);

/// KPSS level-stationarity test with Bartlett-kernel long-run variance at
/// bandwidth floor(4 (n/100)^(1/4)). p-value interpolated from the embedded
/// table, censored to [0.01, 0.10].
TestResult kpss_test(std::span<const double> series);

/// Engle's ARCH-LM test: auxiliary regression of squared residuals on their
/// own lags; statistic = (#obs used) * R^2, chi-square(lags) p-value.
TestResult arch_lm_test(std::span<const double> residuals, int lags);

} // namespace tsecon
