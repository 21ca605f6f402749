#pragma once

#include "tsecon/acf.hpp"
#include "tsecon/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tsecon {

/// Model orders. p, q are capped at 5 and d at 2 (the selection grid bound).
struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    bool include_intercept = true;

    std::string name() const;
};

/// Estimated ARIMA model in the regression form
///   y_t = c + sum_i ar_i y_{t-i} + e_t + sum_j ma_j e_{t-j},
/// fitted to the d-fold differenced series by exact Gaussian maximum
/// likelihood (state-space innovations recursion). The unconditional mean of
/// the modeled series is c / (1 - sum ar).
struct ArimaFit {
    ArimaSpec spec;
    double intercept = 0.0;
    Eigen::VectorXd ar;
    Eigen::VectorXd ma;
    double sigma2 = 0.0;
    double loglik = 0.0;
    Eigen::VectorXd se; // for (c if present, ar..., ma...)
    std::vector<std::string> param_names;
    std::vector<double> residuals; // one-step prediction errors
    std::vector<double> pred_var_ratio; // F_t: prediction variance / sigma2
    std::vector<Date> dates;       // dates of the modeled (differenced) series
    std::vector<double> working;   // the modeled series itself
    int n_effective = 0;
    bool converged = true;
    bool boundary_root = false;
    std::vector<std::string> warnings;

    // Final filter state, kept for forecasting.
    Eigen::VectorXd final_state;
    Eigen::MatrixXd final_state_cov;

    double mean() const;  // c / (1 - sum ar)
    int n_params() const; // p + q + intercept + 1 (sigma2 counted)
};

ArimaFit fit_arima(const ReturnSeries& returns, const ArimaSpec& spec);

/// (AIC, BIC) = (-2 loglik + 2k, -2 loglik + k ln n).
std::pair<double, double> information_criteria(double loglik, int k, long n);
std::pair<double, double> information_criteria(const ArimaFit& fit);

struct SelectionRow {
    ArimaSpec spec;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

/// Grid-search result, sorted by BIC (ties: fewer parameters, then lower q).
struct SelectionTable {
    std::vector<SelectionRow> rows;
    ArimaSpec best_by_aic;
    ArimaSpec best_by_bic;
    std::vector<std::string> warnings;
};

SelectionTable select_arima(const ReturnSeries& returns, int p_max, const std::vector<int>& d_set,
                            int q_max);

struct ArimaDiagnostics {
    std::vector<double> std_residuals;
    AcfResult residual_acf;
    std::vector<int> lb_lags;
    std::vector<double> lb_pvalues; // Ljung-Box with fit_df = p + q
};

ArimaDiagnostics arima_diagnostics(const ArimaFit& fit, int max_lag);

struct ForecastResult {
    int horizon = 0;
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
    std::string band_rule = "point +/- 2*sd";
};

/// Minimum-MSE h-step forecasts from the final filter state with
/// +/- 2 * sqrt(forecast error variance) bands. For d >= 1 the forecasts
/// apply to the differenced series the model was fitted on.
ForecastResult forecast_arima(const ArimaFit& fit, int h);

/// Simulate an ARIMA path (burn-in of 500 discarded; deterministic per
/// seed). For d >= 1 the ARMA recursion output is integrated d times.
ReturnSeries simulate_arima(const ArimaSpec& spec, double intercept, const Eigen::VectorXd& ar,
                            const Eigen::VectorXd& ma, double sigma, int n, std::uint64_t seed,
                            Date start_date = Date{2020, 1, 1});

} // namespace tsecon
