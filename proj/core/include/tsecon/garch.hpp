#pragma once

#include "tsecon/acf.hpp"
#include "tsecon/descriptive.hpp"
#include "tsecon/hypothesis.hpp"
#include "tsecon/ks.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsecon {

enum class GarchFamily { arch, garch, egarch };
enum class Innovation { normal, student_t };

std::string to_string(GarchFamily family);
std::string to_string(Innovation innovation);

/// Conditional-variance model orders. q counts shock lags (alpha terms),
/// p counts variance lags (beta terms, 0 for ARCH). Orders are capped at 2
/// by default (the usual practical bound) unless relaxed via max_order.
struct GarchSpec {
    GarchFamily family = GarchFamily::garch;
    int p = 1;
    int q = 1;
    Innovation innovation = Innovation::normal;
    int max_order = 2; // configurable cap; ARCH lag search uses up to 4

    std::string name() const;
};

/// Parameter bundle for simulation and recursion evaluation.
struct GarchParams {
    double omega = 0.0;
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    Eigen::VectorXd phi; // EGARCH asymmetry terms, one per shock lag
    double shape = 0.0;  // Student-t degrees of freedom (> 2)
};

struct GarchFit {
    GarchSpec spec;
    double omega = 0.0;
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    Eigen::VectorXd phi;
    double shape = 0.0;
    double loglik = 0.0;
    std::vector<double> cond_variance; // sigma_t^2 > 0 for all t
    std::vector<double> std_residuals; // Z_t = eps_t / sigma_t
    Eigen::VectorXd se;
    Eigen::VectorXd tstats;
    std::vector<std::string> param_names;
    bool converged = true;
    std::vector<std::string> warnings;

    double persistence() const; // sum(alpha) + sum(beta)
    /// omega / (1 - persistence) for ARCH/GARCH (NaN at or beyond the
    /// boundary); exp(omega / (1 - sum beta)) for EGARCH.
    double unconditional_variance() const;
    int n_params() const;
    GarchParams params() const;
};

/// Fit by (quasi-)maximum likelihood on a residual series. Student-t
/// innovations use the unit-variance t density with shape > 2. The variance
/// recursion is initialized at the sample variance of the residuals.
GarchFit fit_garch(std::span<const double> residuals, const GarchSpec& spec);

/// Log-likelihood of a residual series at given parameters (same recursion
/// and initialization as fit_garch). Throws EstimationError when the
/// recursion degenerates.
double garch_loglik(std::span<const double> residuals, const GarchSpec& spec,
                    const GarchParams& params);

/// Conditional-variance path at given parameters.
std::vector<double> garch_variance_path(std::span<const double> residuals, const GarchSpec& spec,
                                        const GarchParams& params);

struct GarchCriteria {
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double aic_per_obs = 0.0;
    double bic_per_obs = 0.0;
};

GarchCriteria garch_criteria(double loglik, int k, long n);
GarchCriteria garch_criteria(const GarchFit& fit, long n);

struct GarchDiagnostics {
    AcfResult resid_acf;   // ACF of Z_t
    AcfResult resid2_acf;  // ACF of Z_t^2
    TestResult lb_resid;
    TestResult lb_resid2;
    KsResult ks;           // Z_t against the fitted innovation law
    QqData qq;
};

GarchDiagnostics garch_diagnostics(const GarchFit& fit, int max_lag);

struct VarianceForecast {
    std::vector<double> variance;
    std::vector<double> band_lower; // -2 * sigma(h) return-level band
    std::vector<double> band_upper;
    bool has_unconditional_target = true;
    double unconditional = 0.0;
};

/// h-step conditional-variance forecasts via the GARCH recursion with
/// E[Z^2] = 1. For EGARCH the log-variance recursion is iterated with future
/// shock terms at their zero mean and exponentiated.
VarianceForecast forecast_variance(const GarchFit& fit, int h);

/// Simulate a residual path (burn-in of 1000 discarded; deterministic per
/// seed). Throws on non-stationary parameters.
std::vector<double> simulate_garch(const GarchSpec& spec, const GarchParams& params, int n,
                                   std::uint64_t seed);

} // namespace tsecon
