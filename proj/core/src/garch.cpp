#include "tsecon/garch.hpp"

#include "tsecon/arima.hpp"
#include "tsecon/distributions.hpp"
#include "tsecon/errors.hpp"
#include "tsecon/optimize.hpp"
#include "tsecon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace tsecon {

namespace {

constexpr double kBig = 1e100;
constexpr double kMinShape = 2.01;

double sample_variance(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double v = 0.0;
    for (double e : x) v += (e - mean) * (e - mean);
    return v / n;
}

// log-density of the unit-variance Student-t, with the normalization
// precomputed once per parameter vector.
struct StdTDensity {
    double logc;
    double df;

    explicit StdTDensity(double df_) : df(df_) {
        logc = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
               0.5 * std::log(M_PI * (df - 2.0));
    }
    double logpdf(double z) const {
        return logc - 0.5 * (df + 1.0) * std::log1p(z * z / (df - 2.0));
    }
};

struct Recursion {
    bool ok = false;
    double loglik = 0.0;
    std::vector<double> sigma2;
};

Recursion garch_recursion(std::span<const double> eps, const GarchSpec& spec,
                          const GarchParams& par, bool want_path) {
    const std::size_t n = eps.size();
    const int p = spec.p, q = spec.q;
    const double v0 = sample_variance(eps);
    const bool egarch = spec.family == GarchFamily::egarch;
    const bool student = spec.innovation == Innovation::student_t;

    Recursion out;
    std::vector<double> sigma2(n);
    double loglik = 0.0;
    const StdTDensity tdens(student ? par.shape : 3.0);
    const double e_abs_z = student ? dist::std_t_abs_moment(par.shape) : dist::norm_abs_moment();

    const double log_v0 = std::log(std::max(v0, 1e-300));
    for (std::size_t t = 0; t < n; ++t) {
        double s2;
        if (!egarch) {
            s2 = par.omega;
            for (int j = 1; j <= q; ++j) {
                const double e2 = (static_cast<int>(t) - j >= 0)
                                      ? eps[t - static_cast<std::size_t>(j)] *
                                            eps[t - static_cast<std::size_t>(j)]
                                      : v0;
                s2 += par.alpha[j - 1] * e2;
            }
            for (int i = 1; i <= p; ++i) {
                const double s2lag = (static_cast<int>(t) - i >= 0)
                                         ? sigma2[t - static_cast<std::size_t>(i)]
                                         : v0;
                s2 += par.beta[i - 1] * s2lag;
            }
        } else {
            double ls = par.omega;
            for (int i = 1; i <= p; ++i) {
                const double lag = (static_cast<int>(t) - i >= 0)
                                       ? std::log(sigma2[t - static_cast<std::size_t>(i)])
                                       : log_v0;
                ls += par.beta[i - 1] * lag;
            }
            for (int j = 1; j <= q; ++j) {
                if (static_cast<int>(t) - j >= 0) {
                    const std::size_t tj = t - static_cast<std::size_t>(j);
                    const double z = eps[tj] / std::sqrt(sigma2[tj]);
                    ls += par.alpha[j - 1] * z + par.phi[j - 1] * (std::abs(z) - e_abs_z);
                }
            }
            if (ls > 700.0) return out; // diverged
            s2 = std::exp(ls);
        }
        if (!(s2 > 0.0) || !std::isfinite(s2)) return out;
        sigma2[t] = s2;

        const double z = eps[t] / std::sqrt(s2);
        if (student)
            loglik += tdens.logpdf(z) - 0.5 * std::log(s2);
        else
            loglik += -0.5 * (std::log(2.0 * M_PI) + std::log(s2) + z * z);
    }
    if (!std::isfinite(loglik)) return out;
    out.ok = true;
    out.loglik = loglik;
    if (want_path) out.sigma2 = std::move(sigma2);
    return out;
}

// Natural parameter vector layout: omega, alpha_1..q, beta_1..p,
// [phi_1..q for EGARCH], [shape for student-t].
GarchParams unpack(const Eigen::VectorXd& x, const GarchSpec& spec) {
    GarchParams par;
    int c = 0;
    par.omega = x[c++];
    par.alpha = x.segment(c, spec.q);
    c += spec.q;
    par.beta = x.segment(c, spec.p);
    c += spec.p;
    if (spec.family == GarchFamily::egarch) {
        par.phi = x.segment(c, spec.q);
        c += spec.q;
    }
    if (spec.innovation == Innovation::student_t) par.shape = x[c++];
    return par;
}

Parameterization make_parameterization(const GarchSpec& spec) {
    Parameterization param;
    const bool egarch = spec.family == GarchFamily::egarch;
    if (egarch)
        param.params.push_back({"omega", Transform::identity, 0.0, 0.0});
    else
        param.params.push_back({"omega", Transform::log_lower, 0.0, 0.0});
    for (int j = 1; j <= spec.q; ++j)
        param.params.push_back({"alpha" + std::to_string(j),
                                egarch ? Transform::identity : Transform::simplex, 0.0, 0.0});
    for (int i = 1; i <= spec.p; ++i)
        param.params.push_back({"beta" + std::to_string(i),
                                egarch ? Transform::logistic : Transform::simplex,
                                -1.0 + 1e-6, 1.0 - 1e-6});
    if (egarch)
        for (int j = 1; j <= spec.q; ++j)
            param.params.push_back({"phi" + std::to_string(j), Transform::identity, 0.0, 0.0});
    if (spec.innovation == Innovation::student_t)
        param.params.push_back({"shape", Transform::log_lower, kMinShape, 0.0});
    return param;
}

void validate_spec(const GarchSpec& spec) {
    if (spec.q < 1) throw DataError("garch: q must be >= 1");
    if (spec.p < 0) throw DataError("garch: p must be >= 0");
    if (spec.family == GarchFamily::arch && spec.p != 0)
        throw DataError("garch: ARCH requires p = 0");
    if (spec.family != GarchFamily::arch && spec.p < 1)
        throw DataError("garch: GARCH/EGARCH require p >= 1");
    const int cap = std::max(spec.max_order, spec.family == GarchFamily::arch ? 4 : 2);
    if (spec.p > cap || spec.q > cap)
        throw DataError("garch: orders exceed the configured cap of " + std::to_string(cap));
}

void validate_params(const GarchSpec& spec, const GarchParams& par) {
    if (par.alpha.size() != spec.q || par.beta.size() != spec.p)
        throw DataError("garch: parameter lengths do not match the spec");
    if (spec.family == GarchFamily::egarch) {
        if (par.phi.size() != spec.q) throw DataError("garch: phi length must equal q");
        for (int i = 0; i < spec.p; ++i)
            if (!(std::abs(par.beta[i]) < 1.0))
                throw DataError("garch: EGARCH requires |beta| < 1");
    } else {
        if (!(par.omega > 0.0)) throw DataError("garch: omega must be positive");
        if ((par.alpha.array() < 0.0).any() || (par.beta.array() < 0.0).any())
            throw DataError("garch: alpha and beta must be non-negative");
        if (!(par.alpha.sum() + par.beta.sum() < 1.0))
            throw DataError("garch: non-stationary parameters (sum alpha + sum beta >= 1)");
    }
    if (spec.innovation == Innovation::student_t && !(par.shape > 2.0))
        throw DataError("garch: student-t shape must exceed 2");
}

} // namespace

std::string to_string(GarchFamily family) {
    switch (family) {
    case GarchFamily::arch:
        return "arch";
    case GarchFamily::garch:
        return "garch";
    case GarchFamily::egarch:
        return "egarch";
    }
    return "";
}

std::string to_string(Innovation innovation) {
    return innovation == Innovation::normal ? "normal" : "student_t";
}

std::string GarchSpec::name() const {
    std::ostringstream os;
    if (innovation == Innovation::student_t) os << "t-";
    switch (family) {
    case GarchFamily::arch:
        os << "ARCH(" << q << ")";
        break;
    case GarchFamily::garch:
        os << "GARCH(" << p << "," << q << ")";
        break;
    case GarchFamily::egarch:
        os << "EGARCH(" << p << "," << q << ")";
        break;
    }
    return os.str();
}

double GarchFit::persistence() const { return alpha.sum() + beta.sum(); }

double GarchFit::unconditional_variance() const {
    if (spec.family == GarchFamily::egarch) {
        const double bsum = beta.sum();
        return std::abs(bsum) < 1.0 ? std::exp(omega / (1.0 - bsum))
                                    : std::numeric_limits<double>::quiet_NaN();
    }
    const double pers = persistence();
    return pers < 1.0 ? omega / (1.0 - pers) : std::numeric_limits<double>::quiet_NaN();
}

int GarchFit::n_params() const {
    int k = 1 + spec.q + spec.p;
    if (spec.family == GarchFamily::egarch) k += spec.q;
    if (spec.innovation == Innovation::student_t) k += 1;
    return k;
}

GarchParams GarchFit::params() const { return GarchParams{omega, alpha, beta, phi, shape}; }

GarchFit fit_garch(std::span<const double> residuals, const GarchSpec& spec) {
    validate_spec(spec);
    const std::size_t n = residuals.size();
    if (static_cast<int>(n) <= 10 * (spec.p + spec.q))
        throw DataError("fit_garch: need more than 10*(p+q) observations");
    const double v0 = sample_variance(residuals);
    if (!(v0 > 0.0)) throw DataError("fit_garch: degenerate residual series");

    const bool egarch = spec.family == GarchFamily::egarch;
    const bool student = spec.innovation == Innovation::student_t;

    // Start values targeting the sample variance as the unconditional level.
    Eigen::VectorXd init(1 + spec.q + spec.p + (egarch ? spec.q : 0) + (student ? 1 : 0));
    {
        int c = 0;
        const double alpha_mass = spec.family == GarchFamily::arch ? 0.4 : 0.15;
        const double beta_mass = spec.p > 0 ? 0.7 : 0.0;
        if (egarch) {
            init[c++] = std::log(v0) * (1.0 - 0.9);
            for (int j = 0; j < spec.q; ++j) init[c++] = -0.05;
            for (int i = 0; i < spec.p; ++i) init[c++] = 0.9 / spec.p;
            for (int j = 0; j < spec.q; ++j) init[c++] = 0.2;
        } else {
            init[c++] = v0 * (1.0 - alpha_mass - beta_mass);
            for (int j = 0; j < spec.q; ++j) init[c++] = alpha_mass / spec.q;
            for (int i = 0; i < spec.p; ++i) init[c++] = beta_mass / spec.p;
        }
        if (student) init[c++] = 8.0;
    }

    const auto objective = [&](const Eigen::VectorXd& x) {
        const GarchParams par = unpack(x, spec);
        if (student && !(par.shape > kMinShape)) return kBig;
        const auto rec = garch_recursion(residuals, spec, par, false);
        return rec.ok ? -rec.loglik : kBig;
    };

    const auto param = make_parameterization(spec);
    const auto opt = minimize(objective, init, param, 1e-8);

    GarchFit fit;
    fit.spec = spec;
    const GarchParams par = unpack(opt.minimizer, spec);
    fit.omega = par.omega;
    fit.alpha = par.alpha;
    fit.beta = par.beta;
    fit.phi = par.phi;
    fit.shape = par.shape;
    fit.converged = opt.converged;
    if (!opt.converged) fit.warnings.push_back("optimizer did not converge");

    const auto rec = garch_recursion(residuals, spec, par, true);
    if (!rec.ok) throw EstimationError("fit_garch: likelihood evaluation failed at the optimum");
    fit.loglik = rec.loglik;
    fit.cond_variance = rec.sigma2;
    fit.std_residuals.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        fit.std_residuals[t] = residuals[t] / std::sqrt(rec.sigma2[t]);

    if (!egarch && fit.persistence() > 1.0 - 1e-4)
        fit.warnings.push_back("integrated-variance boundary (sum alpha + sum beta ~ 1)");
    if (!egarch && spec.p > 0 && fit.alpha.sum() < 1e-4)
        fit.warnings.push_back("beta weakly identified (alpha ~ 0)");

    for (const auto& ps : param.params) fit.param_names.push_back(ps.name);
    const Eigen::MatrixXd cov = observed_information_covariance(objective, opt.minimizer, param);
    fit.se = standard_errors(cov);
    fit.tstats.resize(fit.se.size());
    for (Eigen::Index i = 0; i < fit.se.size(); ++i)
        fit.tstats[i] = opt.minimizer[i] / fit.se[i];
    if (!fit.se.allFinite())
        fit.warnings.push_back("standard errors unavailable for some parameters");
    return fit;
}

double garch_loglik(std::span<const double> residuals, const GarchSpec& spec,
                    const GarchParams& params) {
    const auto rec = garch_recursion(residuals, spec, params, false);
    if (!rec.ok) throw EstimationError("garch_loglik: recursion degenerated");
    return rec.loglik;
}

std::vector<double> garch_variance_path(std::span<const double> residuals, const GarchSpec& spec,
                                        const GarchParams& params) {
    auto rec = garch_recursion(residuals, spec, params, true);
    if (!rec.ok) throw EstimationError("garch_variance_path: recursion degenerated");
    return std::move(rec.sigma2);
}

GarchCriteria garch_criteria(double loglik, int k, long n) {
    if (n <= 0) throw DataError("garch_criteria: n must be positive");
    GarchCriteria c;
    c.loglik = loglik;
    const auto [aic, bic] = information_criteria(loglik, k, n);
    c.aic = aic;
    c.bic = bic;
    c.aic_per_obs = aic / static_cast<double>(n);
    c.bic_per_obs = bic / static_cast<double>(n);
    return c;
}

GarchCriteria garch_criteria(const GarchFit& fit, long n) {
    return garch_criteria(fit.loglik, fit.n_params(), n);
}

GarchDiagnostics garch_diagnostics(const GarchFit& fit, int max_lag) {
    const auto& z = fit.std_residuals;
    if (static_cast<std::size_t>(max_lag) >= z.size())
        throw DataError("garch_diagnostics: max_lag too large");

    std::vector<double> z2(z.size());
    for (std::size_t t = 0; t < z.size(); ++t) z2[t] = z[t] * z[t];

    GarchDiagnostics d;
    d.resid_acf = acf(z, max_lag);
    d.resid2_acf = acf(z2, max_lag);
    d.lb_resid = ljung_box(z, max_lag);
    d.lb_resid2 = ljung_box(z2, max_lag);

    if (fit.spec.innovation == Innovation::student_t) {
        // Compare on the ordinary-t scale: Z * sqrt(df/(df-2)) ~ t(df).
        const double s = std::sqrt(fit.shape / (fit.shape - 2.0));
        std::vector<double> scaled(z.size());
        for (std::size_t t = 0; t < z.size(); ++t) scaled[t] = z[t] * s;
        const auto ref = Reference::student_t(fit.shape);
        d.ks = ks_test(scaled, ref);
        d.qq = qq_data(scaled, ref);
    } else {
        const auto ref = Reference::normal(0.0, 1.0);
        d.ks = ks_test(z, ref);
        d.qq = qq_data(z, ref);
    }
    return d;
}

VarianceForecast forecast_variance(const GarchFit& fit, int h) {
    if (h < 1) throw DataError("forecast_variance: horizon must be >= 1");
    const auto& spec = fit.spec;
    const std::size_t n = fit.cond_variance.size();

    VarianceForecast out;
    out.variance.resize(static_cast<std::size_t>(h));

    if (spec.family != GarchFamily::egarch) {
        // E[eps^2_{n+m}] = E[sigma^2_{n+m}] for m >= 1 (EZ^2 = 1).
        const auto past_s2 = [&](int m) {
            return m >= 1 ? out.variance[static_cast<std::size_t>(m - 1)]
                          : fit.cond_variance[n - static_cast<std::size_t>(-m) - 1];
        };
        const auto past_e2 = [&](int m) {
            if (m >= 1) return out.variance[static_cast<std::size_t>(m - 1)];
            const std::size_t t = n - static_cast<std::size_t>(-m) - 1;
            const double z = fit.std_residuals[t];
            return z * z * fit.cond_variance[t];
        };
        for (int k = 1; k <= h; ++k) {
            double s2 = fit.omega;
            for (int j = 1; j <= spec.q; ++j) s2 += fit.alpha[j - 1] * past_e2(k - j);
            for (int i = 1; i <= spec.p; ++i) s2 += fit.beta[i - 1] * past_s2(k - i);
            out.variance[static_cast<std::size_t>(k - 1)] = s2;
        }
        out.has_unconditional_target = fit.persistence() < 1.0 - 1e-4;
        out.unconditional = out.has_unconditional_target
                                ? fit.unconditional_variance()
                                : std::numeric_limits<double>::quiet_NaN();
    } else {
        // Log-variance recursion with future shock terms at their zero mean.
        const double e_abs_z = spec.innovation == Innovation::student_t
                                   ? dist::std_t_abs_moment(fit.shape)
                                   : dist::norm_abs_moment();
        std::vector<double> logs2(static_cast<std::size_t>(h));
        const auto past_log = [&](int m) {
            return m >= 1 ? logs2[static_cast<std::size_t>(m - 1)]
                          : std::log(fit.cond_variance[n - static_cast<std::size_t>(-m) - 1]);
        };
        for (int k = 1; k <= h; ++k) {
            double ls = fit.omega;
            for (int i = 1; i <= spec.p; ++i) ls += fit.beta[i - 1] * past_log(k - i);
            for (int j = 1; j <= spec.q; ++j) {
                const int m = k - j;
                if (m <= 0) {
                    const std::size_t t = n - static_cast<std::size_t>(-m) - 1;
                    const double z = fit.std_residuals[t];
                    ls += fit.alpha[j - 1] * z + fit.phi[j - 1] * (std::abs(z) - e_abs_z);
                }
            }
            logs2[static_cast<std::size_t>(k - 1)] = ls;
            out.variance[static_cast<std::size_t>(k - 1)] = std::exp(ls);
        }
        out.has_unconditional_target = std::abs(fit.beta.sum()) < 1.0;
        out.unconditional = fit.unconditional_variance();
    }

    out.band_lower.resize(static_cast<std::size_t>(h));
    out.band_upper.resize(static_cast<std::size_t>(h));
    for (int k = 0; k < h; ++k) {
        const double sd = std::sqrt(out.variance[static_cast<std::size_t>(k)]);
        out.band_lower[static_cast<std::size_t>(k)] = -2.0 * sd;
        out.band_upper[static_cast<std::size_t>(k)] = 2.0 * sd;
    }
    return out;
}

std::vector<double> simulate_garch(const GarchSpec& spec, const GarchParams& params, int n,
                                   std::uint64_t seed) {
    validate_spec(spec);
    validate_params(spec, params);
    if (n < 1) throw DataError("simulate_garch: n must be positive");

    constexpr int kBurnIn = 1000;
    const int total = kBurnIn + n;
    const bool egarch = spec.family == GarchFamily::egarch;
    const bool student = spec.innovation == Innovation::student_t;
    const double e_abs_z = student ? dist::std_t_abs_moment(params.shape)
                                   : dist::norm_abs_moment();

    Rng rng(seed);
    const double v0 = egarch ? std::exp(params.omega / (1.0 - params.beta.sum()))
                             : params.omega / (1.0 - params.alpha.sum() - params.beta.sum());

    std::vector<double> eps(static_cast<std::size_t>(total));
    std::vector<double> sigma2(static_cast<std::size_t>(total));
    std::vector<double> z(static_cast<std::size_t>(total));
    for (int t = 0; t < total; ++t) {
        double s2;
        if (!egarch) {
            s2 = params.omega;
            for (int j = 1; j <= spec.q; ++j) {
                const double e2 = t - j >= 0 ? eps[static_cast<std::size_t>(t - j)] *
                                                   eps[static_cast<std::size_t>(t - j)]
                                             : v0;
                s2 += params.alpha[j - 1] * e2;
            }
            for (int i = 1; i <= spec.p; ++i) {
                const double lag =
                    t - i >= 0 ? sigma2[static_cast<std::size_t>(t - i)] : v0;
                s2 += params.beta[i - 1] * lag;
            }
        } else {
            double ls = params.omega;
            for (int i = 1; i <= spec.p; ++i) {
                const double lag = t - i >= 0 ? std::log(sigma2[static_cast<std::size_t>(t - i)])
                                              : std::log(v0);
                ls += params.beta[i - 1] * lag;
            }
            for (int j = 1; j <= spec.q; ++j) {
                if (t - j >= 0) {
                    const double zl = z[static_cast<std::size_t>(t - j)];
                    ls += params.alpha[j - 1] * zl + params.phi[j - 1] * (std::abs(zl) - e_abs_z);
                }
            }
            s2 = std::exp(ls);
        }
        sigma2[static_cast<std::size_t>(t)] = s2;
        const double zt = student ? rng.std_t(params.shape) : rng.normal();
        z[static_cast<std::size_t>(t)] = zt;
        eps[static_cast<std::size_t>(t)] = zt * std::sqrt(s2);
    }
    return std::vector<double>(eps.end() - n, eps.end());
}

} // namespace tsecon
