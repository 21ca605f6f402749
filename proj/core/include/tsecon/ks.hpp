#pragma once

#include "tsecon/distributions.hpp"

#include <span>

namespace tsecon {

/// Kolmogorov-Smirnov one-sample test result.
struct KsResult {
    double distance = 0.0;
    double p_value = 1.0;
};

/// distance = sup_x |F_n(x) - F(x)| evaluated at the n jump points of the
/// empirical CDF (both one-sided candidates at each point). The p-value uses
/// the asymptotic Kolmogorov distribution at lambda = sqrt(n) * distance.
/// Reference parameters are taken as given, not estimated from the sample.
KsResult ks_test(std::span<const double> sample, const Reference& reference);

} // namespace tsecon
