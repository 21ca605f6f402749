#include "tsecon/errors.hpp"
#include "tsecon/optimize.hpp"

#include "testutil.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

using namespace tsecon;

TEST(Transforms, RoundTripOnRandomFeasibleDraws) {
    Parameterization param;
    param.params.push_back({"omega", Transform::log_lower, 0.0, 0.0});
    param.params.push_back({"alpha", Transform::simplex, 0.0, 0.0});
    param.params.push_back({"beta", Transform::simplex, 0.0, 0.0});
    param.params.push_back({"rho", Transform::logistic, -1.0, 1.0});
    param.params.push_back({"mu", Transform::identity, 0.0, 0.0});
    param.params.push_back({"shape", Transform::log_lower, 2.01, 0.0});

    tsecon::Rng rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        Eigen::VectorXd x(6);
        x[0] = std::exp(-8.0 + 6.0 * rng.uniform());
        const double a = 0.9 * rng.uniform();
        x[1] = a * rng.uniform();
        x[2] = std::max(1e-8, a - x[1]);
        x[3] = -0.99 + 1.98 * rng.uniform();
        x[4] = -3.0 + 6.0 * rng.uniform();
        x[5] = 2.01 + 40.0 * rng.uniform();
        const Eigen::VectorXd back = param.to_natural(param.to_unconstrained(x));
        for (int i = 0; i < 6; ++i) EXPECT_NEAR(back[i], x[i], 1e-10 * std::max(1.0, std::abs(x[i])));
    }
}

TEST(Transforms, SimplexStaysInsideCap) {
    Parameterization param;
    param.params.push_back({"a", Transform::simplex, 0.0, 0.0});
    param.params.push_back({"b", Transform::simplex, 0.0, 0.0});
    tsecon::Rng rng(3);
    for (int rep = 0; rep < 500; ++rep) {
        Eigen::VectorXd u(2);
        u << 40.0 * (rng.uniform() - 0.5), 40.0 * (rng.uniform() - 0.5);
        const Eigen::VectorXd x = param.to_natural(u);
        EXPECT_GT(x[0], 0.0);
        EXPECT_GT(x[1], 0.0);
        EXPECT_LT(x[0] + x[1], param.simplex_cap + 1e-15);
    }
}

TEST(Minimize, QuadraticFindsAnalyticOptimum) {
    const auto f = [](const Eigen::VectorXd& x) { return (x[0] - 3.0) * (x[0] - 3.0); };
    Eigen::VectorXd x0(1);
    x0 << 0.0;
    const auto r = minimize(f, x0, Parameterization::identity(1));
    EXPECT_NEAR(r.minimizer[0], 3.0, 1e-6);
    EXPECT_TRUE(r.converged);
}

TEST(Minimize, RosenbrockBenchmark) {
    const auto f = [](const Eigen::VectorXd& x) {
        const double a = x[1] - x[0] * x[0];
        const double b = 1.0 - x[0];
        return 100.0 * a * a + b * b;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const auto r = minimize(f, x0, Parameterization::identity(2));
    EXPECT_NEAR(r.minimizer[0], 1.0, 1e-4);
    EXPECT_NEAR(r.minimizer[1], 1.0, 1e-4);
    EXPECT_TRUE(r.converged);
}

TEST(Minimize, PositivityConstraintRespectedForInfeasibleTarget) {
    // Unconstrained optimum at -1; the log transform pins x > 0, so the
    // minimizer is pushed toward the boundary and convergence is reported
    // honestly (gradient in transformed space vanishes as x -> 0).
    const auto f = [](const Eigen::VectorXd& x) { return (x[0] + 1.0) * (x[0] + 1.0); };
    Parameterization param;
    param.params.push_back({"x", Transform::log_lower, 0.0, 0.0});
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    const auto r = minimize(f, x0, param);
    EXPECT_GT(r.minimizer[0], 0.0);
    EXPECT_LT(r.minimizer[0], 1e-6);
}

TEST(Minimize, DeterministicGivenSameInputs) {
    const auto f = [](const Eigen::VectorXd& x) {
        return std::pow(x[0] - 0.3, 4) + std::pow(x[1] + 0.7, 2) + 0.1 * std::sin(x[0] * 3.0);
    };
    Eigen::VectorXd x0(2);
    x0 << 2.0, -3.0;
    const auto r1 = minimize(f, x0, Parameterization::identity(2), 1e-9);
    const auto r2 = minimize(f, x0, Parameterization::identity(2), 1e-9);
    EXPECT_EQ(r1.iterations, r2.iterations);
    EXPECT_EQ(r1.minimizer[0], r2.minimizer[0]);
    EXPECT_EQ(r1.minimizer[1], r2.minimizer[1]);
    EXPECT_EQ(r1.objective_value, r2.objective_value);
}

TEST(Minimize, ErrorsOnBadInputs) {
    const auto f = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
    Eigen::VectorXd x0(1);
    x0 << std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(minimize(f, x0, Parameterization::identity(1)), EstimationError);
    Eigen::VectorXd ok(1);
    ok << 1.0;
    EXPECT_THROW(minimize(f, ok, Parameterization::identity(1), 0.0), EstimationError);
}

TEST(NumericalGradient, SumOfSquaresAndExp) {
    const auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    Eigen::VectorXd x(2);
    x << 1.0, 2.0;
    const auto g = numerical_gradient(f, x);
    EXPECT_NEAR(g[0], 2.0, 1e-6);
    EXPECT_NEAR(g[1], 4.0, 1e-6);

    const auto fe = [](const Eigen::VectorXd& v) { return std::exp(v[0]); };
    Eigen::VectorXd zero(1);
    zero << 0.0;
    EXPECT_NEAR(numerical_gradient(fe, zero)[0], 1.0, 1e-8);
}

TEST(NumericalGradient, MatchesHigherOrderOracle) {
    const auto f = [](const Eigen::VectorXd& x) {
        return std::sin(x[0]) * std::exp(0.3 * x[1]) + std::pow(x[2], 3);
    };
    Eigen::VectorXd x(3);
    x << 0.7, -1.1, 0.4;
    const auto g = numerical_gradient(f, x);

    // 4th-order central-difference oracle.
    for (int i = 0; i < 3; ++i) {
        const double h = 1e-4 * std::max(1.0, std::abs(x[i]));
        Eigen::VectorXd xp = x;
        xp[i] = x[i] + 2 * h;
        const double f2p = f(xp);
        xp[i] = x[i] + h;
        const double f1p = f(xp);
        xp[i] = x[i] - h;
        const double f1m = f(xp);
        xp[i] = x[i] - 2 * h;
        const double f2m = f(xp);
        const double oracle = (f2m - 8 * f1m + 8 * f1p - f2p) / (12 * h);
        EXPECT_LT(testutil::rel_err(g[i], oracle), 1e-5);
    }
}

TEST(NumericalHessian, QuadraticFormRecoversMatrix) {
    Eigen::MatrixXd A(2, 2);
    A << 2.0, 0.5, 0.5, 1.5;
    const auto f = [&](const Eigen::VectorXd& x) { return x.dot(A * x); };
    Eigen::VectorXd x(2);
    x << 0.3, -0.2;
    const Eigen::MatrixXd H = numerical_hessian(f, x);
    const Eigen::MatrixXd expected = 2.0 * A;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(H(i, j), expected(i, j), 1e-4);
}

TEST(NumericalHessian, HandCalculusExample) {
    // f = x1^2 x2 at (1,1): H = [[2, 2], [2, 0]].
    const auto f = [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[1]; };
    Eigen::VectorXd x(2);
    x << 1.0, 1.0;
    const Eigen::MatrixXd H = numerical_hessian(f, x);
    EXPECT_NEAR(H(0, 0), 2.0, 1e-4);
    EXPECT_NEAR(H(0, 1), 2.0, 1e-4);
    EXPECT_NEAR(H(1, 0), 2.0, 1e-4);
    EXPECT_NEAR(H(1, 1), 0.0, 1e-4);
    EXPECT_DOUBLE_EQ(H(0, 1), H(1, 0));
}

TEST(NumericalHessian, ConvexMinimumIsPositiveSemidefinite) {
    const auto f = [](const Eigen::VectorXd& x) {
        return std::pow(x[0], 2) + 2.0 * std::pow(x[1], 2) + x[0] * x[1];
    };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    const Eigen::MatrixXd H = numerical_hessian(f, x);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-6);
}

TEST(ObservedInformation, InvariantToParameterizationOnQuadratic) {
    // Quadratic in natural space, optimized through a positivity transform;
    // the delta-method covariance must match the natural-space inverse
    // Hessian.
    Eigen::MatrixXd A(2, 2);
    A << 3.0, 0.4, 0.4, 2.0;
    Eigen::VectorXd center(2);
    center << 0.8, 1.7;
    const auto f = [&](const Eigen::VectorXd& x) {
        const Eigen::VectorXd d = x - center;
        return 0.5 * d.dot(A * d);
    };

    Parameterization constrained;
    constrained.params.push_back({"x0", Transform::log_lower, 0.0, 0.0});
    constrained.params.push_back({"x1", Transform::log_lower, 0.0, 0.0});

    const Eigen::MatrixXd cov_constrained = observed_information_covariance(f, center, constrained);
    const Eigen::MatrixXd cov_identity =
        observed_information_covariance(f, center, Parameterization::identity(2));
    const Eigen::MatrixXd direct = A.inverse();

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(cov_identity(i, j), direct(i, j), 1e-5);
            EXPECT_NEAR(cov_constrained(i, j), direct(i, j), 1e-4);
        }
    const auto se = standard_errors(cov_constrained);
    EXPECT_NEAR(se[0], std::sqrt(direct(0, 0)), 1e-5);
}

TEST(ObservedInformation, NonPositiveDiagonalYieldsNaN) {
    Eigen::MatrixXd cov(2, 2);
    cov << -1.0, 0.0, 0.0, 4.0;
    const auto se = standard_errors(cov);
    EXPECT_TRUE(std::isnan(se[0]));
    EXPECT_DOUBLE_EQ(se[1], 2.0);
}
