#include "tsecon/dcc.hpp"
#include "tsecon/errors.hpp"

#include "testutil.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace tsecon;

namespace {

GarchParams uni_params() {
    GarchParams p;
    p.omega = 5.3e-5;
    p.alpha = Eigen::VectorXd::Constant(1, 0.12);
    p.beta = Eigen::VectorXd::Constant(1, 0.83);
    return p;
}

Eigen::MatrixXd equicorr(int d, double rho) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Constant(d, d, rho);
    S.diagonal().setOnes();
    return S;
}

MultiSeries sim_panel(int n, std::uint64_t seed, double a = 0.268, double b = 0.571,
                      double rho = 0.5, int d = 3) {
    return simulate_dcc(d, {uni_params()}, a, b, equicorr(d, rho), n, seed);
}

} // namespace

TEST(SimulateDcc, DeterministicPerSeed) {
    const auto p1 = sim_panel(200, 4);
    const auto p2 = sim_panel(200, 4);
    EXPECT_EQ(p1.values, p2.values);
    const auto p3 = sim_panel(200, 5);
    EXPECT_NE(p1.values, p3.values);
}

TEST(SimulateDcc, StaticLimitRecoversS) {
    // a -> 0, b -> 0 yields (almost) constant correlation; the standardized
    // shocks must correlate like S. Use tiny a since a must be positive.
    const int n = 20000;
    const auto panel = simulate_dcc(2, {uni_params()}, 1e-8, 0.0, equicorr(2, 0.6), n, 11);
    // Devolatilize with the true recursion to isolate the correlation.
    GarchSpec spec;
    const auto par = uni_params();
    Eigen::MatrixXd u(n, 2);
    for (int j = 0; j < 2; ++j) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) col[static_cast<std::size_t>(t)] = panel.values(t, j);
        const auto path = garch_variance_path(col, spec, par);
        for (int t = 0; t < n; ++t)
            u(t, j) = panel.values(t, j) / std::sqrt(path[static_cast<std::size_t>(t)]);
    }
    const Eigen::MatrixXd centered = u.rowwise() - u.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    const double corr = cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1));
    EXPECT_NEAR(corr, 0.6, 0.03);

    // With no true dynamics the fitted correlation path collapses to S_ij.
    const auto fit = fit_dcc(panel);
    const auto rho = dcc_correlations(fit, 0, 1);
    double mean_rho = 0.0, var_rho = 0.0;
    for (double r : rho) mean_rho += r;
    mean_rho /= static_cast<double>(rho.size());
    for (double r : rho) var_rho += (r - mean_rho) * (r - mean_rho);
    var_rho /= static_cast<double>(rho.size());
    EXPECT_NEAR(mean_rho, 0.6, 0.05);
    EXPECT_LT(std::sqrt(var_rho), 0.05);
}

TEST(SimulateDcc, IdentitySGivesNearZeroCrossCorrelation) {
    const auto panel = simulate_dcc(3, {uni_params()}, 0.05, 0.9,
                                    Eigen::MatrixXd::Identity(3, 3), 20000, 7);
    const Eigen::MatrixXd centered = panel.values.rowwise() - panel.values.colwise().mean();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(panel.n());
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            EXPECT_LT(std::abs(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j))), 0.05);
}

TEST(SimulateDcc, ValidatesInputs) {
    EXPECT_THROW(simulate_dcc(1, {uni_params()}, 0.1, 0.5, equicorr(1, 0.5), 100, 1), DataError);
    EXPECT_THROW(simulate_dcc(2, {uni_params()}, 0.6, 0.5, equicorr(2, 0.5), 100, 1), DataError);
    Eigen::MatrixXd bad_s = equicorr(2, 0.5);
    bad_s(0, 0) = 2.0;
    EXPECT_THROW(simulate_dcc(2, {uni_params()}, 0.1, 0.5, bad_s, 100, 1), DataError);
    EXPECT_THROW(simulate_dcc(2, {uni_params()}, 0.1, 0.5, equicorr(2, 1.5), 100, 1), DataError);
}

TEST(FitDcc, PathInvariantsHold) {
    const auto panel = sim_panel(1500, 21);
    const auto fit = fit_dcc(panel);

    ASSERT_EQ(fit.P_path.size(), panel.n());
    ASSERT_EQ(fit.H_path.size(), panel.n());
    for (std::size_t t = 0; t < panel.n(); t += 37) {
        const auto& P = fit.P_path[t];
        const auto& H = fit.H_path[t];
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(P(i, i), 1.0, 1e-12);
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(P(i, j), P(j, i), 1e-12);
                EXPECT_GE(P(i, j), -1.0 - 1e-12);
                EXPECT_LE(P(i, j), 1.0 + 1e-12);
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_p(P);
        EXPECT_GT(es_p.eigenvalues().minCoeff(), 0.0);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_h(H);
        EXPECT_GT(es_h.eigenvalues().minCoeff(), 0.0);

        // H_t = D_t P_t D_t reconstruction.
        Eigen::VectorXd sd(3);
        for (int j = 0; j < 3; ++j)
            sd[j] = std::sqrt(fit.univariate[static_cast<std::size_t>(j)].cond_variance[t]);
        const Eigen::MatrixXd rebuilt = sd.asDiagonal() * P * sd.asDiagonal();
        EXPECT_LT((rebuilt - H).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_GT(fit.a, 0.0);
    EXPECT_GE(fit.b, 0.0);
    EXPECT_LT(fit.a + fit.b, 1.0);
}

TEST(FitDcc, RecoversSimulatedDynamics) {
    const auto panel = sim_panel(5000, 33);
    const auto fit = fit_dcc(panel);
    EXPECT_LT(std::abs(fit.a - 0.268) / fit.se_a, 3.5);
    EXPECT_LT(std::abs(fit.b - 0.571) / fit.se_b, 3.5);
    for (const auto& uni : fit.univariate) {
        EXPECT_NEAR(uni.alpha[0], 0.12, 0.05);
        EXPECT_NEAR(uni.beta[0], 0.83, 0.08);
    }
}

TEST(FitDcc, EtaCovarianceNearIdentity) {
    const auto panel = sim_panel(5000, 41);
    const auto fit = fit_dcc(panel);
    const Eigen::MatrixXd centered = fit.eta.rowwise() - fit.eta.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(panel.n());
    const double band = 3.0 / std::sqrt(static_cast<double>(panel.n()));
    for (int i = 0; i < 3; ++i) {
        EXPECT_GT(cov(i, i), 0.9);
        EXPECT_LT(cov(i, i), 1.1);
        for (int j = i + 1; j < 3; ++j) EXPECT_LT(std::abs(cov(i, j)), band + 0.02);
    }
}

TEST(FitDcc, NestsConstantCorrelation) {
    const auto panel = sim_panel(2000, 55);
    const auto fit = fit_dcc(panel);

    // Stage-2 likelihood at the optimum must dominate the CCC point (0, 0):
    // evaluate the correlation likelihood with the recursion collapsed.
    const Eigen::MatrixXd& u = fit.std_resid;
    Eigen::MatrixXd P = fit.S;
    const Eigen::LLT<Eigen::MatrixXd> llt(P);
    double logdet = 0.0;
    for (int i = 0; i < 3; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    double ccc_ll = 0.0;
    for (Eigen::Index t = 0; t < u.rows(); ++t) {
        const Eigen::VectorXd ut = u.row(t).transpose();
        ccc_ll += -0.5 * (logdet + ut.dot(llt.solve(ut)) - ut.squaredNorm());
    }
    EXPECT_GE(fit.stage2_loglik, ccc_ll - 1e-6);
}

TEST(FitDcc, DuplicatedSeriesFlaggedSingular) {
    const auto base = sim_panel(800, 61, 0.268, 0.571, 0.5, 2);
    Eigen::MatrixXd values(base.values.rows(), 2);
    values.col(0) = base.values.col(0);
    values.col(1) = base.values.col(0);
    const auto dup = MultiSeries::create({"a", "b"}, base.dates, values);
    const auto ccc = fit_ccc(dup);
    EXPECT_NEAR(ccc.correlation(0, 1), 1.0, 1e-8);
    EXPECT_FALSE(ccc.warnings.empty());

    const auto dcc = fit_dcc(dup);
    const bool flagged =
        std::any_of(dcc.warnings.begin(), dcc.warnings.end(), [](const std::string& w) {
            return w.find("singular") != std::string::npos;
        });
    EXPECT_TRUE(flagged);
    for (const auto& P : dcc.P_path) EXPECT_GT(P(0, 1), 0.999);
}

TEST(FitCcc, ConstantCorrelationStructure) {
    const auto panel = sim_panel(3000, 71, 1e-6, 0.0, 0.6);
    const auto ccc = fit_ccc(panel);
    ASSERT_EQ(ccc.univariate.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(ccc.correlation(i, i), 1.0, 1e-12);
        for (int j = i + 1; j < 3; ++j) EXPECT_NEAR(ccc.correlation(i, j), 0.6, 0.06);
    }
}

TEST(FitCcc, IndependentSeriesHaveNearZeroOffDiagonals) {
    const auto panel = simulate_dcc(3, {uni_params()}, 0.05, 0.9,
                                    Eigen::MatrixXd::Identity(3, 3), 4000, 77);
    const auto ccc = fit_ccc(panel);
    const double band = 3.0 / std::sqrt(static_cast<double>(panel.n()));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            EXPECT_LT(std::abs(ccc.correlation(i, j)), band + 0.02);
}

TEST(MultiSeries, AlignmentValidation) {
    const auto a = testutil::as_series(testutil::gaussian_sample(50, 1));
    auto b = testutil::as_series(testutil::gaussian_sample(50, 2));
    EXPECT_NO_THROW(MultiSeries::align({a, b}));
    EXPECT_THROW(MultiSeries::align({a}), DataError);

    b.dates[10] = b.dates[10].next_day(); // break strict alignment
    EXPECT_THROW(MultiSeries::align({a, b}), DataError);

    const auto c = testutil::as_series(testutil::gaussian_sample(49, 3));
    EXPECT_THROW(MultiSeries::align({a, c}), DataError);
}

TEST(DccCorrelations, BoundsAndStaticLimit) {
    const auto panel = sim_panel(1200, 81);
    const auto fit = fit_dcc(panel);
    const auto rho = dcc_correlations(fit, 0, 1);
    ASSERT_EQ(rho.size(), panel.n());
    for (double r : rho) {
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
    }
    EXPECT_THROW(dcc_correlations(fit, 0, 0), DataError);
    EXPECT_THROW(dcc_correlations(fit, 0, 5), DataError);

    // Time-average correlation tracks the process mean correlation, which
    // sits below S_ij (normalize() is nonlinear); estimate that target from
    // an independent long fit of the same process.
    double avg = 0.0;
    for (double r : rho) avg += r;
    avg /= static_cast<double>(rho.size());

    const auto long_panel = sim_panel(20000, 4242);
    const auto long_fit = fit_dcc(long_panel);
    const auto long_rho = dcc_correlations(long_fit, 0, 1);
    double target = 0.0;
    for (double r : long_rho) target += r;
    target /= static_cast<double>(long_rho.size());
    EXPECT_NEAR(avg, target, 0.05);
}

TEST(DccForecast, ConvergesToNormalizedS) {
    const auto panel = sim_panel(1500, 91);
    const auto fit = fit_dcc(panel);
    const auto fc = dcc_forecast(fit, 500);
    const Eigen::MatrixXd limit = fc.P.back();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(limit(i, j), fit.S(i, j), 1e-6);
}

TEST(DccForecast, OneStepMatchesInSampleRecursionAndPd) {
    const auto panel = sim_panel(1000, 101);
    const auto fit = fit_dcc(panel);
    const auto fc = dcc_forecast(fit, 100);

    // h = 1 equals the recursion applied once more.
    const Eigen::VectorXd last = fit.std_resid.row(fit.std_resid.rows() - 1).transpose();
    Eigen::MatrixXd Q1 = (1.0 - fit.a - fit.b) * fit.S +
                         fit.a * (last * last.transpose()) + fit.b * fit.Q_path.back();
    Eigen::VectorXd isd = Q1.diagonal().array().sqrt().inverse();
    const Eigen::MatrixXd P1 = isd.asDiagonal() * Q1 * isd.asDiagonal();
    EXPECT_LT((fc.P.front() - P1).cwiseAbs().maxCoeff(), 1e-10);

    for (const auto& H : fc.H) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    }
    EXPECT_THROW(dcc_forecast(fit, 0), DataError);
}

TEST(DccFixedPoint, RecursionPreservesSInExpectation) {
    // Replacing the outer product by its expectation Q keeps Q = S fixed.
    const Eigen::MatrixXd S = equicorr(3, 0.4);
    const double a = 0.268, b = 0.571;
    const Eigen::MatrixXd next = (1.0 - a - b) * S + a * S + b * S;
    EXPECT_LT((next - S).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DccDiagnostics, AfterSeriesCleanerThanBefore) {
    const auto panel = sim_panel(3000, 111);
    const auto fit = fit_dcc(panel);
    const auto diag = dcc_diagnostics(fit, 20);
    ASSERT_EQ(diag.series.size(), 3u);
    for (const auto& s : diag.series) {
        // Premodel squared residuals carry GARCH structure (positive
        // control); eta^2 should be much cleaner.
        EXPECT_LT(s.lb_before.p_value, 0.01);
        EXPECT_GT(s.lb_after.p_value, 1e-4);
        int outside = 0;
        for (std::size_t k = 0; k < s.after_acf.values.size(); ++k) {
            if (k == 0) continue; // lag 0
            if (std::abs(s.after_acf.values[k]) > s.after_acf.conf_bound) ++outside;
        }
        EXPECT_LE(outside, 4); // ~90% of 20 lags inside the band
    }
    EXPECT_THROW(dcc_diagnostics(fit, 0), DataError);
}
