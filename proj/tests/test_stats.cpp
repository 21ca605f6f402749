#include "tsecon/acf.hpp"
#include "tsecon/distributions.hpp"
#include "tsecon/errors.hpp"
#include "tsecon/ks.hpp"

#include "testutil.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace tsecon;

TEST(Acf, LagZeroIsExactlyOne) {
    const auto x = testutil::gaussian_sample(50, 1);
    const auto r = acf(x, 10);
    EXPECT_DOUBLE_EQ(r.values[0], 1.0);
    EXPECT_EQ(r.lags.front(), 0);
    EXPECT_NEAR(r.conf_bound, 1.96 / std::sqrt(50.0), 1e-15);
}

TEST(Acf, AlternatingSeriesHasLagOneNearMinusOne) {
    std::vector<double> x(400);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = (t % 2 == 0) ? 1.0 : -1.0;
    const auto r = acf(x, 2);
    EXPECT_NEAR(r.values[1], -1.0, 5e-3);
}

TEST(Acf, WhiteNoiseStaysInsideBand) {
    const std::size_t n = 10000;
    const auto x = testutil::gaussian_sample(n, 99);
    const auto r = acf(x, 20);
    const double bound = 3.0 / std::sqrt(static_cast<double>(n));
    int exceed = 0;
    for (int k = 1; k <= 20; ++k)
        if (std::abs(r.values[static_cast<std::size_t>(k)]) >= bound) ++exceed;
    EXPECT_LE(exceed, 1);
}

TEST(Acf, AffineInvariance) {
    const auto x = testutil::gaussian_sample(300, 12);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -3.7 * x[i] + 11.0;
    const auto rx = acf(x, 15);
    const auto ry = acf(y, 15);
    for (std::size_t k = 0; k < rx.values.size(); ++k)
        EXPECT_NEAR(rx.values[k], ry.values[k], 1e-12);
}

TEST(Acf, Errors) {
    const auto x = testutil::gaussian_sample(20, 3);
    EXPECT_THROW(acf(x, 20), DataError);
    const std::vector<double> flat(30, 1.0);
    EXPECT_THROW(acf(flat, 5), EstimationError);
}

namespace {

// Independent PACF oracle: last coefficient of an order-k autoregression
// fitted by least squares on the ACF normal equations.
double pacf_ols_oracle(const std::vector<double>& x, int k) {
    const auto rho = acf(x, k).values;
    Eigen::MatrixXd R(k, k);
    Eigen::VectorXd r(k);
    for (int i = 0; i < k; ++i) {
        r[i] = rho[static_cast<std::size_t>(i + 1)];
        for (int j = 0; j < k; ++j) R(i, j) = rho[static_cast<std::size_t>(std::abs(i - j))];
    }
    const Eigen::VectorXd phi = R.colPivHouseholderQr().solve(r);
    return phi[k - 1];
}

} // namespace

TEST(Pacf, MatchesOrderKAutoregressionOracle) {
    const auto x = testutil::gaussian_sample(400, 21);
    const auto p = pacf(x, 5);
    for (int k = 1; k <= 5; ++k)
        EXPECT_NEAR(p.values[static_cast<std::size_t>(k - 1)], pacf_ols_oracle(x, k), 1e-8)
            << "at lag " << k;
}

TEST(Pacf, FirstValueEqualsAcfLagOne) {
    const auto x = testutil::gaussian_sample(200, 5);
    const auto a = acf(x, 3);
    const auto p = pacf(x, 3);
    EXPECT_DOUBLE_EQ(p.values[0], a.values[1]);
}

TEST(Pacf, Ar1SpikeAtLagOneOnly) {
    // AR(1) with phi = 0.6; PACF(1) ~ 0.6, higher lags inside the band.
    tsecon::Rng rng(8);
    const std::size_t n = 20000;
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto& v : x) {
        prev = 0.6 * prev + rng.normal();
        v = prev;
    }
    const auto p = pacf(x, 8);
    EXPECT_NEAR(p.values[0], 0.6, 0.02);
    const double bound = 3.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 1; k < p.values.size(); ++k) EXPECT_LT(std::abs(p.values[k]), bound);
}

TEST(Pacf, WhiteNoiseStaysSmall) {
    const std::size_t n = 20000;
    const auto x = testutil::gaussian_sample(n, 44);
    const auto p = pacf(x, 10);
    const double bound = 3.0 / std::sqrt(static_cast<double>(n));
    int exceed = 0;
    for (double v : p.values)
        if (std::abs(v) >= bound) ++exceed;
    EXPECT_LE(exceed, 1);
}

namespace {

// Brute-force KS oracle: checks both one-sided gaps at every jump point.
double ks_brute_force(std::vector<double> x, const Reference& ref) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = ref.cdf(x[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace

TEST(KsTest, SinglePointAtMedianGivesHalf) {
    const std::vector<double> x = {0.0};
    const auto r = ks_test(x, Reference::normal());
    EXPECT_NEAR(r.distance, 0.5, 1e-15);
}

TEST(KsTest, MatchesBruteForceEnumerationOnFixedSample) {
    const std::vector<double> x = {-1.3, -0.2, 0.1, 0.9, 2.4};
    const auto r = ks_test(x, Reference::normal());
    EXPECT_NEAR(r.distance, ks_brute_force(x, Reference::normal()), 1e-12);

    const std::vector<double> y = {0.05, -0.7, 1.1, 0.3, -2.2, 0.0, 0.4};
    const auto r2 = ks_test(y, Reference::normal(0.1, 0.8));
    EXPECT_NEAR(r2.distance, ks_brute_force(y, Reference::normal(0.1, 0.8)), 1e-12);
}

TEST(KsTest, LocationScaleInvariance) {
    const auto x = testutil::gaussian_sample(150, 33, 0.0, 1.0);
    const auto base = ks_test(x, Reference::normal());
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.5 * x[i] - 1.0;
    const auto shifted = ks_test(y, Reference::normal(-1.0, 2.5));
    EXPECT_NEAR(base.distance, shifted.distance, 1e-12);
    EXPECT_NEAR(base.p_value, shifted.p_value, 1e-12);
}

TEST(KsTest, NullRejectionRateNearNominal) {
    // 400 replications at n = 200; 5% nominal level.
    int rejections = 0;
    const int reps = 400;
    for (int rep = 0; rep < reps; ++rep) {
        const auto x = testutil::gaussian_sample(200, 1000 + static_cast<std::uint64_t>(rep));
        if (ks_test(x, Reference::normal()).p_value < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / reps;
    EXPECT_GE(rate, 0.02);
    EXPECT_LE(rate, 0.08);
}

TEST(KsTest, RejectsInvalidReference) {
    EXPECT_THROW(Reference::normal(0.0, 0.0), DataError);
    EXPECT_THROW(Reference::student_t(-2.0), DataError);
    EXPECT_THROW(ks_test(std::vector<double>{}, Reference::normal()), DataError);
}

TEST(Distributions, StdTDensityIntegratesToOneWithUnitVariance) {
    // Quadrature with z = sinh(w): the heavy polynomial tails become
    // exponentially decaying in w, so a truncated trapezoid rule reaches
    // 1e-6 even for df close to 2.
    for (double df : {2.5, 4.0, 6.0, 12.0}) {
        const int m = 400000;
        const double W = 40.0;
        const double h = 2.0 * W / m;
        double mass = 0.0, var = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double w = -W + h * i;
            const double z = std::sinh(w);
            const double jac = std::cosh(w);
            const double weight = (i == 0 || i == m) ? 0.5 : 1.0;
            const double f = dist::std_t_pdf(z, df) * jac;
            mass += weight * f * h;
            var += weight * z * z * f * h;
        }
        EXPECT_NEAR(mass, 1.0, 1e-6) << "df " << df;
        EXPECT_NEAR(var, 1.0, 1e-6) << "df " << df;
    }
}

TEST(Distributions, StdTAbsMomentMatchesQuadrature) {
    for (double df : {3.0, 6.0, 10.0}) {
        const int m = 200000;
        const double W = 40.0;
        const double h = W / m;
        double e_abs = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double w = h * i;
            const double z = std::sinh(w);
            const double weight = (i == 0 || i == m) ? 0.5 : 1.0;
            e_abs += 2.0 * weight * z * dist::std_t_pdf(z, df) * std::cosh(w) * h;
        }
        EXPECT_NEAR(dist::std_t_abs_moment(df), e_abs, 1e-6) << "df " << df;
    }
}

TEST(Distributions, KolmogorovSfKnownValues) {
    // Q(lambda) at the classical 5% point: Q(1.358) ~ 0.05.
    EXPECT_NEAR(dist::kolmogorov_sf(1.358), 0.05, 2e-3);
    EXPECT_DOUBLE_EQ(dist::kolmogorov_sf(0.0), 1.0);
    EXPECT_LT(dist::kolmogorov_sf(3.0), 1e-6);
}
