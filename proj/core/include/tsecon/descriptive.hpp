#pragma once

#include "tsecon/distributions.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tsecon {

/// Sample moments. sd uses the unbiased n-1 denominator; skewness and excess
/// kurtosis are standardized central moments (1/n convention) and are NaN for
/// a degenerate (constant) sample.
struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double min = 0.0;
    double max = 0.0;
};

DescriptiveStats descriptive_stats(std::span<const double> values);

/// Equal-width histogram over [min, max]; the last bin is right-closed so
/// counts always sum to the sample size. The overlay holds the expected count
/// per bin under a normal fitted by sample mean/sd (n * width * pdf(center)).
struct Histogram {
    std::vector<double> bin_centers;
    std::vector<std::size_t> counts;
    std::vector<double> normal_overlay;
    double bin_width = 0.0;
};

Histogram histogram_data(std::span<const double> values, int bins);

/// Quantile-quantile data: sorted sample values paired with the reference
/// quantiles at plotting positions (i - 0.5)/n. The sample is not rescaled;
/// pass standardized residuals when comparing against a standardized law.
struct QqData {
    std::vector<double> theoretical;
    std::vector<double> sample;
};

QqData qq_data(std::span<const double> values, const Reference& reference);

} // namespace tsecon
