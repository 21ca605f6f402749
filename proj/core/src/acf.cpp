#include "tsecon/acf.hpp"

#include "tsecon/errors.hpp"

#include <cmath>
#include <numeric>

namespace tsecon {

namespace {

std::vector<double> sample_acf_values(std::span<const double> x, int max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 0) throw DataError("acf: max_lag must be non-negative");
    if (static_cast<std::size_t>(max_lag) >= n)
        throw DataError("acf: max_lag must be smaller than the series length");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) throw EstimationError("acf: zero-variance series");

    std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
    rho[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t)
            num += (x[t] - mean) * (x[t + static_cast<std::size_t>(k)] - mean);
        rho[static_cast<std::size_t>(k)] = num / denom;
    }
    return rho;
}

} // namespace

AcfResult acf(std::span<const double> series, int max_lag) {
    AcfResult r;
    r.values = sample_acf_values(series, max_lag);
    r.lags.resize(r.values.size());
    std::iota(r.lags.begin(), r.lags.end(), 0);
    r.conf_bound = 1.96 / std::sqrt(static_cast<double>(series.size()));
    return r;
}

AcfResult pacf(std::span<const double> series, int max_lag) {
    if (max_lag < 1) throw DataError("pacf: max_lag must be >= 1");
    const auto rho = sample_acf_values(series, max_lag);

    // Durbin-Levinson: phi[k][k] is the partial autocorrelation at lag k.
    const std::size_t m = static_cast<std::size_t>(max_lag);
    std::vector<double> phi_prev(m + 1, 0.0), phi_cur(m + 1, 0.0);
    std::vector<double> pacf_vals(m);
    double v = 1.0; // prediction error variance ratio
    for (std::size_t k = 1; k <= m; ++k) {
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi_prev[j] * rho[k - j];
        if (v <= 0.0)
            throw EstimationError("pacf: Durbin-Levinson breakdown (pivot <= 0) at lag " +
                                  std::to_string(k));
        const double phi_kk = num / v;
        phi_cur[k] = phi_kk;
        for (std::size_t j = 1; j < k; ++j) phi_cur[j] = phi_prev[j] - phi_kk * phi_prev[k - j];
        v *= (1.0 - phi_kk * phi_kk);
        pacf_vals[k - 1] = phi_kk;
        phi_prev = phi_cur;
    }

    AcfResult r;
    r.values = std::move(pacf_vals);
    r.lags.resize(m);
    std::iota(r.lags.begin(), r.lags.end(), 1);
    r.conf_bound = 1.96 / std::sqrt(static_cast<double>(series.size()));
    return r;
}

} // namespace tsecon
