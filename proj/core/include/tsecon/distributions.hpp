#pragma once

#include <string>

namespace tsecon::dist {

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

/// Ordinary Student-t with df degrees of freedom (not variance-standardized).
double t_pdf(double x, double df);
double t_cdf(double x, double df);
double t_quantile(double p, double df);

/// Upper-tail probability of the chi-square distribution.
double chisq_sf(double x, double df);

/// Density of the unit-variance (standardized) Student-t; requires df > 2.
double std_t_pdf(double z, double df);
/// E|Z| for the unit-variance Student-t; requires df > 2.
double std_t_abs_moment(double df);
/// E|Z| for the standard normal, sqrt(2/pi).
double norm_abs_moment();

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 * sum_{j>=1}
/// (-1)^{j-1} exp(-2 j^2 lambda^2), truncated at j = 100.
double kolmogorov_sf(double lambda);

} // namespace tsecon::dist

namespace tsecon {

/// Reference distribution for KS tests and QQ plots.
struct Reference {
    enum class Kind { normal, student_t };

    Kind kind = Kind::normal;
    double mu = 0.0;
    double sigma = 1.0;
    double df = 0.0;

    static Reference normal(double mu = 0.0, double sigma = 1.0);
    static Reference student_t(double df);

    double cdf(double x) const;
    double quantile(double p) const;
    std::string name() const;
};

} // namespace tsecon
