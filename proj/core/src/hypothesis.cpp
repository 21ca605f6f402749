#include "tsecon/hypothesis.hpp"

#include "tsecon/acf.hpp"
#include "tsecon/distributions.hpp"
#include "tsecon/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace tsecon {

namespace {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd tstat;
    double r_squared = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (n <= k) throw DataError("regression: insufficient observations");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < k) throw EstimationError("regression: collinear regressors");

    OlsFit fit;
    fit.beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * fit.beta;
    const double dof = static_cast<double>(n - k);
    const double s2 = resid.squaredNorm() / dof;

    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    fit.tstat.resize(k);
    for (Eigen::Index j = 0; j < k; ++j)
        fit.tstat[j] = fit.beta[j] / std::sqrt(s2 * xtx_inv(j, j));

    const double ymean = y.mean();
    const double tss = (y.array() - ymean).matrix().squaredNorm();
    if (tss <= 0.0) throw EstimationError("regression: degenerate response");
    fit.r_squared = 1.0 - resid.squaredNorm() / tss;
    return fit;
}

// Dickey-Fuller critical values (Banerjee, Dolado, Galbraith & Hendry 1993),
// rows n = 25, 50, 100, 250, 500, inf; columns are the tabulated p-values.
constexpr std::array<double, 8> kAdfTableP = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<double, 6> kAdfTableN = {25, 50, 100, 250, 500, 1e9};

constexpr double kAdfConstant[6][8] = {
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
};

constexpr double kAdfConstantTrend[6][8] = {
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
};

// KPSS level-stationarity critical values (Kwiatkowski et al. 1992).
constexpr std::array<double, 4> kKpssTableP = {0.10, 0.05, 0.025, 0.01};
constexpr std::array<double, 4> kKpssTableStat = {0.347, 0.463, 0.574, 0.739};

double interpolate(double x, std::span<const double> xs, std::span<const double> ys) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (x <= xs[i]) {
            const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        }
    }
    return ys.back();
}

} // namespace

int default_ljung_box_lags(std::size_t n) {
    return std::max(1, std::min(10, static_cast<int>(n / 5)));
}

TestResult ljung_box(std::span<const double> series, int lags, int fit_df) {
    const std::size_t n = series.size();
    if (lags < 1) throw DataError("ljung_box: lags must be positive");
    if (static_cast<std::size_t>(lags) >= n)
        throw DataError("ljung_box: lags must be smaller than the series length");
    if (fit_df < 0 || (fit_df > 0 && fit_df >= lags))
        throw DataError("ljung_box: fit_df must be smaller than lags");

    const auto rho = acf(series, lags);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        const double r = rho.values[static_cast<std::size_t>(k)];
        q += r * r / static_cast<double>(n - static_cast<std::size_t>(k));
    }
    q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);

    TestResult t;
    t.test_name = "Ljung-Box";
    t.null_hypothesis = "no autocorrelation up to the tested lag";
    t.statistic = q;
    t.lags = lags;
    t.p_value = dist::chisq_sf(q, static_cast<double>(lags - fit_df));
    return t;
}

TestResult adf_test(std::span<const double> series, int lag_order, AdfTrend trend) {
    const std::size_t n = series.size();
    if (lag_order < 0)
        lag_order = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n - 1))));
    if (n < static_cast<std::size_t>(lag_order) + 3)
        throw DataError("adf_test: insufficient observations");

    const int L = lag_order;
    const std::size_t m = n - 1 - static_cast<std::size_t>(L); // usable rows
    const int ncols = 2 + (trend == AdfTrend::constant_trend ? 1 : 0) + L;
    if (m <= static_cast<std::size_t>(ncols)) throw DataError("adf_test: insufficient observations");

    std::vector<double> dx(n - 1);
    for (std::size_t t = 1; t < n; ++t) dx[t - 1] = series[t] - series[t - 1];

    Eigen::MatrixXd X(m, ncols);
    Eigen::VectorXd y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t t = static_cast<std::size_t>(L) + 1 + i; // index into dx shifted by 1
        y[static_cast<Eigen::Index>(i)] = dx[t - 1];
        int c = 0;
        X(static_cast<Eigen::Index>(i), c++) = series[t - 1]; // lagged level
        X(static_cast<Eigen::Index>(i), c++) = 1.0;
        if (trend == AdfTrend::constant_trend)
            X(static_cast<Eigen::Index>(i), c++) = static_cast<double>(t);
        for (int j = 1; j <= L; ++j)
            X(static_cast<Eigen::Index>(i), c++) = dx[t - 1 - static_cast<std::size_t>(j)];
    }

    const auto fit = ols(X, y);
    const double stat = fit.tstat[0];

    // Interpolate the table first across sample size, then across p.
    const auto& table = (trend == AdfTrend::constant_trend) ? kAdfConstantTrend : kAdfConstant;
    std::array<double, 8> row{};
    for (std::size_t j = 0; j < row.size(); ++j) {
        std::array<double, 6> col{};
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = table[i][j];
        row[j] = interpolate(static_cast<double>(m), kAdfTableN, col);
    }

    TestResult t;
    t.test_name = "ADF";
    t.null_hypothesis = "unit root";
    t.statistic = stat;
    t.lags = L;
    t.p_floor = 0.01;
    t.p_ceiling = 0.99;
    t.p_value = interpolate(stat, row, kAdfTableP);
    t.p_censored = stat <= row.front() || stat >= row.back();
    return t;
}

TestResult kpss_test(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 10) throw DataError("kpss_test: need at least 10 observations");

    const double mean =
        std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t) e[t] = series[t] - mean;

    double cumsum = 0.0, s2sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        cumsum += e[t];
        s2sum += cumsum * cumsum;
    }
    const double eta = s2sum / (static_cast<double>(n) * static_cast<double>(n));

    // Newey-West long-run variance, Bartlett kernel.
    const int bandwidth =
        static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    double lrv = 0.0;
    for (double v : e) lrv += v * v;
    lrv /= static_cast<double>(n);
    for (int j = 1; j <= bandwidth; ++j) {
        double gamma = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(j) < n; ++t)
            gamma += e[t] * e[t + static_cast<std::size_t>(j)];
        gamma /= static_cast<double>(n);
        lrv += 2.0 * (1.0 - static_cast<double>(j) / (bandwidth + 1.0)) * gamma;
    }
    if (lrv <= 0.0) throw EstimationError("kpss_test: non-positive long-run variance");

    TestResult t;
    t.test_name = "KPSS";
    t.null_hypothesis = "level stationarity";
    t.statistic = eta / lrv;
    t.lags = bandwidth;
    t.p_floor = 0.01;
    t.p_ceiling = 0.10;
    t.p_value = interpolate(t.statistic, kKpssTableStat, kKpssTableP);
    t.p_censored = t.statistic <= kKpssTableStat.front() || t.statistic >= kKpssTableStat.back();
    return t;
}

TestResult arch_lm_test(std::span<const double> residuals, int lags) {
    const std::size_t n = residuals.size();
    if (lags < 1) throw DataError("arch_lm_test: lags must be positive");
    if (n < static_cast<std::size_t>(lags) + 2)
        throw DataError("arch_lm_test: insufficient observations");

    std::vector<double> e2(n);
    for (std::size_t t = 0; t < n; ++t) e2[t] = residuals[t] * residuals[t];

    const std::size_t m = n - static_cast<std::size_t>(lags);
    Eigen::MatrixXd X(m, lags + 1);
    Eigen::VectorXd y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t t = static_cast<std::size_t>(lags) + i;
        y[static_cast<Eigen::Index>(i)] = e2[t];
        X(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (int j = 1; j <= lags; ++j)
            X(static_cast<Eigen::Index>(i), j) = e2[t - static_cast<std::size_t>(j)];
    }

    const auto fit = ols(X, y);

    TestResult t;
    t.test_name = "ARCH-LM";
    t.null_hypothesis = "no ARCH effects";
    t.statistic = static_cast<double>(m) * fit.r_squared;
    t.lags = lags;
    t.p_value = dist::chisq_sf(t.statistic, static_cast<double>(lags));
    return t;
}

} // namespace tsecon
