#include "tsecon/descriptive.hpp"

#include "tsecon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsecon {

DescriptiveStats descriptive_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DataError("descriptive_stats: need at least 2 observations");

    DescriptiveStats s;
    s.n = n;
    double sum = 0.0;
    s.min = values[0];
    s.max = values[0];
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(n);

    // sd = 0 iff all values are equal; decide that exactly, not through
    // rounded central moments.
    if (s.min == s.max) {
        s.sd = 0.0;
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
        return s;
    }

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.sd = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

Histogram histogram_data(std::span<const double> values, int bins) {
    if (bins < 1) throw DataError("histogram_data: bins must be >= 1");
    if (values.empty()) throw DataError("histogram_data: empty series");

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it, hi = *max_it;
    const double width = (hi - lo) / static_cast<double>(bins);

    Histogram h;
    h.bin_width = width;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.bin_centers.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b)
        h.bin_centers[static_cast<std::size_t>(b)] = lo + (b + 0.5) * width;

    for (double v : values) {
        std::size_t b = 0;
        if (width > 0.0) {
            b = static_cast<std::size_t>((v - lo) / width);
            if (b >= h.counts.size()) b = h.counts.size() - 1; // right-closed last bin
        }
        ++h.counts[b];
    }

    h.normal_overlay.resize(h.bin_centers.size());
    if (values.size() >= 2) {
        const auto stats = descriptive_stats(values);
        for (std::size_t b = 0; b < h.bin_centers.size(); ++b) {
            const double density =
                stats.sd > 0.0
                    ? dist::norm_pdf((h.bin_centers[b] - stats.mean) / stats.sd) / stats.sd
                    : 0.0;
            h.normal_overlay[b] = static_cast<double>(values.size()) * width * density;
        }
    }
    return h;
}

QqData qq_data(std::span<const double> values, const Reference& reference) {
    const std::size_t n = values.size();
    if (n < 3) throw DataError("qq_data: need at least 3 observations");

    QqData q;
    q.sample.assign(values.begin(), values.end());
    std::sort(q.sample.begin(), q.sample.end());
    q.theoretical.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        q.theoretical[i] = reference.quantile(p);
    }
    return q;
}

} // namespace tsecon
