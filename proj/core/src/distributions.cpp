#include "tsecon/distributions.hpp"

#include "tsecon/errors.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_randist.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>

namespace tsecon::dist {

double norm_pdf(double x) { return gsl_ran_ugaussian_pdf(x); }
double norm_cdf(double x) { return gsl_cdf_ugaussian_P(x); }

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw EstimationError("norm_quantile: p must be in (0,1)");
    return gsl_cdf_ugaussian_Pinv(p);
}

double t_pdf(double x, double df) { return gsl_ran_tdist_pdf(x, df); }
double t_cdf(double x, double df) { return gsl_cdf_tdist_P(x, df); }

double t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw EstimationError("t_quantile: p must be in (0,1)");
    return gsl_cdf_tdist_Pinv(p, df);
}

double chisq_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gsl_cdf_chisq_Q(x, df);
}

double std_t_pdf(double z, double df) {
    if (df <= 2.0) throw EstimationError("std_t_pdf: df must exceed 2");
    const double scale = std::sqrt(df / (df - 2.0)); // maps unit-variance z to ordinary t
    return scale * gsl_ran_tdist_pdf(z * scale, df);
}

double std_t_abs_moment(double df) {
    if (df <= 2.0) throw EstimationError("std_t_abs_moment: df must exceed 2");
    // E|T_df| = 2 sqrt(df) Gamma((df+1)/2) / (sqrt(pi) (df-1) Gamma(df/2)),
    // scaled by sqrt((df-2)/df) for the unit-variance version.
    const double lg = gsl_sf_lngamma((df + 1.0) / 2.0) - gsl_sf_lngamma(df / 2.0);
    return 2.0 * std::sqrt(df - 2.0) * std::exp(lg) / (std::sqrt(M_PI) * (df - 1.0));
}

double norm_abs_moment() { return std::sqrt(2.0 / M_PI); }

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    const double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

} // namespace tsecon::dist

namespace tsecon {

Reference Reference::normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw DataError("Reference::normal: sigma must be positive");
    return Reference{Kind::normal, mu, sigma, 0.0};
}

Reference Reference::student_t(double df) {
    if (!(df > 0.0)) throw DataError("Reference::student_t: df must be positive");
    return Reference{Kind::student_t, 0.0, 1.0, df};
}

double Reference::cdf(double x) const {
    switch (kind) {
    case Kind::normal:
        return dist::norm_cdf((x - mu) / sigma);
    case Kind::student_t:
        return dist::t_cdf(x, df);
    }
    return 0.0;
}

double Reference::quantile(double p) const {
    switch (kind) {
    case Kind::normal:
        return mu + sigma * dist::norm_quantile(p);
    case Kind::student_t:
        return dist::t_quantile(p, df);
    }
    return 0.0;
}

std::string Reference::name() const {
    switch (kind) {
    case Kind::normal:
        return "normal(" + std::to_string(mu) + "," + std::to_string(sigma) + ")";
    case Kind::student_t:
        return "student_t(" + std::to_string(df) + ")";
    }
    return "";
}

} // namespace tsecon
