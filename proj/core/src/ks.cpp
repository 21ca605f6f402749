#include "tsecon/ks.hpp"

#include "tsecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tsecon {

KsResult ks_test(std::span<const double> sample, const Reference& reference) {
    const std::size_t n = sample.size();
    if (n < 1) throw DataError("ks_test: empty sample");

    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());

    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = reference.cdf(x[i]);
        const double lower = static_cast<double>(i) / static_cast<double>(n);
        const double upper = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max(d, std::max(std::abs(f - lower), std::abs(upper - f)));
    }

    KsResult r;
    r.distance = d;
    r.p_value = dist::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
    return r;
}

} // namespace tsecon
