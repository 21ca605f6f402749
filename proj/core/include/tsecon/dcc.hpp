#pragma once

#include "tsecon/acf.hpp"
#include "tsecon/garch.hpp"
#include "tsecon/hypothesis.hpp"
#include "tsecon/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace tsecon {

/// Aligned multivariate return/residual panel: n rows, d >= 2 columns.
struct MultiSeries {
    std::vector<std::string> labels;
    std::vector<Date> dates;
    Eigen::MatrixXd values; // n x d

    std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
    int dim() const { return static_cast<int>(values.cols()); }

    static MultiSeries create(std::vector<std::string> labels, std::vector<Date> dates,
                              Eigen::MatrixXd values);
    /// Column-bind return series; dates must match exactly across inputs.
    static MultiSeries align(const std::vector<ReturnSeries>& series);
};

/// Constant-conditional-correlation fit: univariate GARCH(1,1) per column,
/// P = sample correlation of the standardized residuals, H_t = D_t P D_t.
struct CccFit {
    std::vector<GarchFit> univariate;
    Eigen::MatrixXd correlation;
    double loglik = 0.0; // Gaussian, both stages
    std::vector<std::string> labels;
    std::vector<Date> dates;
    std::vector<std::string> warnings;
};

CccFit fit_ccc(const MultiSeries& series);

/// DCC-GARCH(1,1) two-step Gaussian QMLE fit. Stage 1 devolatilizes each
/// column with a univariate GARCH(1,1); stage 2 maximizes the correlation
/// likelihood over (a, b) on the standardized residuals, with a > 0, b >= 0
/// and a + b < 1 enforced by transform. Q_0 = S, the sample correlation of
/// the standardized residuals.
struct DccFit {
    std::vector<GarchFit> univariate;
    double a = 0.0;
    double b = 0.0;
    double se_a = 0.0;
    double se_b = 0.0;
    Eigen::MatrixXd S;
    std::vector<Eigen::MatrixXd> Q_path;
    std::vector<Eigen::MatrixXd> P_path;
    std::vector<Eigen::MatrixXd> H_path;
    Eigen::MatrixXd eta;    // n x d innovations from the symmetric H^{-1/2}
    Eigen::MatrixXd std_resid; // n x d stage-1 standardized residuals
    double loglik = 0.0;    // sum of both stages
    double stage2_loglik = 0.0;
    std::vector<std::string> labels;
    std::vector<Date> dates;
    std::vector<std::string> warnings;
};

DccFit fit_dcc(const MultiSeries& series);

/// rho_ij,t = (P_t)_{ij} for all t.
std::vector<double> dcc_correlations(const DccFit& fit, int i, int j);

struct DccForecast {
    std::vector<Eigen::MatrixXd> H;
    std::vector<Eigen::MatrixXd> P;
    Eigen::MatrixXd variances; // h x d per-series conditional variances
};

/// Univariate variances forecast by the GARCH recursion; E[Q_{t+k}] =
/// (1-a-b) S + (a+b) E[Q_{t+k-1}]; P from normalized Q; H = D P D.
DccForecast dcc_forecast(const DccFit& fit, int h);

struct DccSeriesDiagnostics {
    AcfResult before_acf;  // ACF of premodel squared residuals
    AcfResult after_acf;   // ACF of eta^2
    AcfResult before_pacf;
    AcfResult after_pacf;
    TestResult lb_before;
    TestResult lb_after;
};

struct DccDiagnostics {
    std::vector<DccSeriesDiagnostics> series;
};

DccDiagnostics dcc_diagnostics(const DccFit& fit, int max_lag);

/// Simulate a DCC-GARCH(1,1) panel (burn-in 1000 discarded; deterministic
/// per seed). garch_params holds one parameter set per column, or a single
/// set broadcast to all columns. S must be a correlation matrix (unit
/// diagonal, positive definite).
MultiSeries simulate_dcc(int d, const std::vector<GarchParams>& garch_params, double a, double b,
                         const Eigen::MatrixXd& S, int n, std::uint64_t seed,
                         Date start_date = Date{2020, 1, 1});

} // namespace tsecon
