#include "tsecon/dcc.hpp"

#include "tsecon/errors.hpp"
#include "tsecon/optimize.hpp"
#include "tsecon/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tsecon {

namespace {

constexpr double kBig = 1e100;

Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& u) {
    const Eigen::Index n = u.rows();
    const Eigen::MatrixXd centered = u.rowwise() - u.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    Eigen::VectorXd isd = cov.diagonal().array().sqrt().inverse();
    return isd.asDiagonal() * cov * isd.asDiagonal();
}

Eigen::MatrixXd normalize_to_correlation(const Eigen::MatrixXd& q) {
    Eigen::VectorXd isd = q.diagonal().array().sqrt().inverse();
    Eigen::MatrixXd p = isd.asDiagonal() * q * isd.asDiagonal();
    p.diagonal().setOnes();
    return 0.5 * (p + p.transpose().eval());
}

// Gaussian correlation log-likelihood sum_t -1/2 (log|P_t| + u' P^-1 u - u'u)
// for the DCC recursion at (a, b); optionally stores the Q/P paths.
struct CorrEval {
    bool ok = false;
    double loglik = 0.0;
    std::vector<Eigen::MatrixXd> Q_path;
    std::vector<Eigen::MatrixXd> P_path;
};

CorrEval dcc_correlation_loglik(const Eigen::MatrixXd& u, const Eigen::MatrixXd& S, double a,
                                double b, bool want_paths) {
    const Eigen::Index n = u.rows();
    const Eigen::Index d = u.cols();
    CorrEval out;
    if (want_paths) {
        out.Q_path.reserve(static_cast<std::size_t>(n));
        out.P_path.reserve(static_cast<std::size_t>(n));
    }

    Eigen::MatrixXd Q = S; // Q_0 = S
    double ll = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (t > 0) {
            const Eigen::VectorXd prev = u.row(t - 1).transpose();
            Q = (1.0 - a - b) * S + a * (prev * prev.transpose()) + b * Q;
        }
        const Eigen::MatrixXd P = normalize_to_correlation(Q);
        Eigen::LLT<Eigen::MatrixXd> llt(P);
        if (llt.info() != Eigen::Success) return out;
        const Eigen::VectorXd ut = u.row(t).transpose();
        const Eigen::VectorXd solved = llt.solve(ut);
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        ll += -0.5 * (logdet + ut.dot(solved) - ut.squaredNorm());
        if (want_paths) {
            out.Q_path.push_back(Q);
            out.P_path.push_back(P);
        }
    }
    if (!std::isfinite(ll)) return out;
    out.ok = true;
    out.loglik = ll;
    return out;
}

// Symmetric inverse square root via the eigendecomposition.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw EstimationError("dcc: covariance matrix not positive definite");
    return es.eigenvectors() *
           es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
           es.eigenvectors().transpose();
}

struct Stage1 {
    std::vector<GarchFit> fits;
    Eigen::MatrixXd std_resid; // n x d
    double loglik = 0.0;
};

Stage1 stage1_garch(const MultiSeries& series) {
    const int d = series.dim();
    if (d < 2) throw DataError("mgarch: need at least 2 series");

    Stage1 s1;
    s1.std_resid.resize(series.values.rows(), d);
    for (int j = 0; j < d; ++j) {
        const Eigen::VectorXd col = series.values.col(j);
        const std::vector<double> eps(col.data(), col.data() + col.size());
        GarchSpec spec;
        spec.family = GarchFamily::garch;
        spec.p = 1;
        spec.q = 1;
        spec.innovation = Innovation::normal;
        GarchFit fit = fit_garch(eps, spec);
        for (Eigen::Index t = 0; t < col.size(); ++t)
            s1.std_resid(t, j) = fit.std_residuals[static_cast<std::size_t>(t)];
        s1.loglik += fit.loglik;
        s1.fits.push_back(std::move(fit));
    }
    return s1;
}

} // namespace

MultiSeries MultiSeries::create(std::vector<std::string> labels, std::vector<Date> dates,
                                Eigen::MatrixXd values) {
    if (values.cols() < 2) throw DataError("MultiSeries: need at least 2 columns");
    if (labels.size() != static_cast<std::size_t>(values.cols()))
        throw DataError("MultiSeries: one label per column required");
    if (dates.size() != static_cast<std::size_t>(values.rows()))
        throw DataError("MultiSeries: dates and rows differ in length");
    if (!values.allFinite()) throw DataError("MultiSeries: non-finite values");
    return MultiSeries{std::move(labels), std::move(dates), std::move(values)};
}

MultiSeries MultiSeries::align(const std::vector<ReturnSeries>& series) {
    if (series.size() < 2) throw DataError("MultiSeries: need at least 2 series");
    const std::size_t n = series.front().size();
    for (const auto& s : series) {
        if (s.size() != n) throw DataError("MultiSeries: series lengths differ");
        for (std::size_t t = 0; t < n; ++t)
            if (!(s.dates[t] == series.front().dates[t]))
                throw DataError("MultiSeries: dates not aligned at " + s.dates[t].to_string());
    }
    Eigen::MatrixXd values(n, series.size());
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < series.size(); ++j) {
        labels.push_back(series[j].source_label);
        for (std::size_t t = 0; t < n; ++t)
            values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                series[j].values[t];
    }
    return create(std::move(labels), series.front().dates, std::move(values));
}

CccFit fit_ccc(const MultiSeries& series) {
    auto s1 = stage1_garch(series);

    CccFit fit;
    fit.correlation = sample_correlation(s1.std_resid);
    fit.labels = series.labels;
    fit.dates = series.dates;

    // Flag singular correlation targets (e.g. duplicated columns).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.correlation);
    if (es.eigenvalues().minCoeff() < 1e-10)
        fit.warnings.push_back("correlation matrix singular (perfectly correlated columns)");

    double corr_ll = 0.0;
    const Eigen::LLT<Eigen::MatrixXd> llt(fit.correlation);
    if (llt.info() == Eigen::Success) {
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < fit.correlation.rows(); ++i)
            logdet += 2.0 * std::log(llt.matrixL()(i, i));
        for (Eigen::Index t = 0; t < s1.std_resid.rows(); ++t) {
            const Eigen::VectorXd ut = s1.std_resid.row(t).transpose();
            corr_ll += -0.5 * (logdet + ut.dot(llt.solve(ut)) - ut.squaredNorm());
        }
    } else {
        fit.warnings.push_back("correlation likelihood unavailable (singular matrix)");
    }
    fit.loglik = s1.loglik + corr_ll;
    fit.univariate = std::move(s1.fits);
    return fit;
}

DccFit fit_dcc(const MultiSeries& series) {
    auto s1 = stage1_garch(series);
    const Eigen::MatrixXd& u = s1.std_resid;
    const Eigen::Index n = u.rows();
    const int d = series.dim();

    DccFit fit;
    fit.labels = series.labels;
    fit.dates = series.dates;
    fit.std_resid = u;
    fit.S = sample_correlation(u);

    // A singular S (duplicated columns) breaks the Gaussian correlation
    // likelihood; shrink it minimally toward the identity so the filter
    // still runs, and flag the degeneracy.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(fit.S);
    if (es_s.eigenvalues().minCoeff() < 1e-8) {
        fit.warnings.push_back(
            "unconditional correlation singular (perfectly correlated columns); "
            "shrunk minimally toward the identity");
        fit.S = normalize_to_correlation(
            fit.S + 1e-6 * Eigen::MatrixXd::Identity(fit.S.rows(), fit.S.cols()));
    }
    const Eigen::MatrixXd& S_filter = fit.S;

    const auto objective = [&](const Eigen::VectorXd& x) {
        const auto eval = dcc_correlation_loglik(u, S_filter, x[0], x[1], false);
        return eval.ok ? -eval.loglik : kBig;
    };

    Parameterization param;
    param.params.push_back({"a", Transform::simplex, 0.0, 0.0});
    param.params.push_back({"b", Transform::simplex, 0.0, 0.0});

    Eigen::VectorXd init(2);
    init << 0.05, 0.90;
    const auto opt = minimize(objective, init, param, 1e-9);
    fit.a = opt.minimizer[0];
    fit.b = opt.minimizer[1];
    if (!opt.converged) fit.warnings.push_back("stage-2 optimizer did not converge");
    if (fit.a + fit.b > 1.0 - 1e-4)
        fit.warnings.push_back("correlation persistence boundary (a + b ~ 1)");

    // Stage-2 standard errors from the stage-2 information only.
    const Eigen::MatrixXd cov = observed_information_covariance(objective, opt.minimizer, param);
    const Eigen::VectorXd se = standard_errors(cov);
    fit.se_a = se[0];
    fit.se_b = se[1];
    if (!se.allFinite()) fit.warnings.push_back("stage-2 standard errors unavailable");

    auto eval = dcc_correlation_loglik(u, S_filter, fit.a, fit.b, true);
    if (!eval.ok) throw EstimationError("fit_dcc: correlation likelihood failed at the optimum");
    fit.stage2_loglik = eval.loglik;
    fit.loglik = s1.loglik + eval.loglik;
    fit.Q_path = std::move(eval.Q_path);
    fit.P_path = std::move(eval.P_path);

    // H_t = D_t P_t D_t and eta_t = H_t^{-1/2} eps_t (symmetric square root).
    fit.H_path.resize(static_cast<std::size_t>(n));
    fit.eta.resize(n, d);
    for (Eigen::Index t = 0; t < n; ++t) {
        Eigen::VectorXd sd(d);
        for (int j = 0; j < d; ++j)
            sd[j] = std::sqrt(
                s1.fits[static_cast<std::size_t>(j)].cond_variance[static_cast<std::size_t>(t)]);
        const Eigen::MatrixXd H =
            sd.asDiagonal() * fit.P_path[static_cast<std::size_t>(t)] * sd.asDiagonal();
        fit.H_path[static_cast<std::size_t>(t)] = H;
        const Eigen::VectorXd eps_t = series.values.row(t).transpose();
        fit.eta.row(t) = (inverse_sqrt(H) * eps_t).transpose();
    }
    fit.univariate = std::move(s1.fits);
    return fit;
}

std::vector<double> dcc_correlations(const DccFit& fit, int i, int j) {
    const int d = static_cast<int>(fit.S.rows());
    if (i == j || i < 0 || j < 0 || i >= d || j >= d)
        throw DataError("dcc_correlations: invalid index pair");
    std::vector<double> rho;
    rho.reserve(fit.P_path.size());
    for (const auto& P : fit.P_path) rho.push_back(P(i, j));
    return rho;
}

DccForecast dcc_forecast(const DccFit& fit, int h) {
    if (h < 1) throw DataError("dcc_forecast: horizon must be >= 1");
    const int d = static_cast<int>(fit.S.rows());

    DccForecast out;
    out.variances.resize(h, d);
    for (int j = 0; j < d; ++j) {
        const auto vf = forecast_variance(fit.univariate[static_cast<std::size_t>(j)], h);
        for (int k = 0; k < h; ++k) out.variances(k, j) = vf.variance[static_cast<std::size_t>(k)];
    }

    // Exact one-step Q update, then the mean recursion for k >= 2.
    const Eigen::VectorXd last = fit.std_resid.row(fit.std_resid.rows() - 1).transpose();
    Eigen::MatrixXd Q = (1.0 - fit.a - fit.b) * fit.S +
                        fit.a * (last * last.transpose()) + fit.b * fit.Q_path.back();
    out.P.reserve(static_cast<std::size_t>(h));
    out.H.reserve(static_cast<std::size_t>(h));
    for (int k = 0; k < h; ++k) {
        if (k > 0) Q = (1.0 - fit.a - fit.b) * fit.S + (fit.a + fit.b) * Q;
        const Eigen::MatrixXd P = normalize_to_correlation(Q);
        Eigen::VectorXd sd = out.variances.row(k).array().sqrt();
        out.P.push_back(P);
        out.H.push_back(sd.asDiagonal() * P * sd.asDiagonal());
    }
    return out;
}

DccDiagnostics dcc_diagnostics(const DccFit& fit, int max_lag) {
    const Eigen::Index n = fit.eta.rows();
    if (max_lag < 1 || static_cast<Eigen::Index>(max_lag) >= n)
        throw DataError("dcc_diagnostics: invalid max_lag");

    DccDiagnostics diag;
    for (int j = 0; j < static_cast<int>(fit.S.rows()); ++j) {
        std::vector<double> before2(static_cast<std::size_t>(n));
        std::vector<double> after2(static_cast<std::size_t>(n));
        for (Eigen::Index t = 0; t < n; ++t) {
            const double raw = fit.univariate[static_cast<std::size_t>(j)]
                                   .std_residuals[static_cast<std::size_t>(t)] *
                               std::sqrt(fit.univariate[static_cast<std::size_t>(j)]
                                             .cond_variance[static_cast<std::size_t>(t)]);
            before2[static_cast<std::size_t>(t)] = raw * raw;
            after2[static_cast<std::size_t>(t)] = fit.eta(t, j) * fit.eta(t, j);
        }
        DccSeriesDiagnostics sd;
        sd.before_acf = acf(before2, max_lag);
        sd.after_acf = acf(after2, max_lag);
        sd.before_pacf = pacf(before2, max_lag);
        sd.after_pacf = pacf(after2, max_lag);
        sd.lb_before = ljung_box(before2, max_lag);
        sd.lb_after = ljung_box(after2, max_lag);
        diag.series.push_back(std::move(sd));
    }
    return diag;
}

MultiSeries simulate_dcc(int d, const std::vector<GarchParams>& garch_params, double a, double b,
                         const Eigen::MatrixXd& S, int n, std::uint64_t seed, Date start_date) {
    if (d < 2) throw DataError("simulate_dcc: need d >= 2");
    if (n < 1) throw DataError("simulate_dcc: n must be positive");
    if (!(a > 0.0) || b < 0.0 || !(a + b < 1.0))
        throw DataError("simulate_dcc: require a > 0, b >= 0, a + b < 1");
    if (S.rows() != d || S.cols() != d) throw DataError("simulate_dcc: S must be d x d");
    for (int i = 0; i < d; ++i)
        if (std::abs(S(i, i) - 1.0) > 1e-12)
            throw DataError("simulate_dcc: S must have a unit diagonal");
    Eigen::LLT<Eigen::MatrixXd> llt_s(S);
    if (llt_s.info() != Eigen::Success)
        throw DataError("simulate_dcc: S must be positive definite");
    if (garch_params.size() != 1 && garch_params.size() != static_cast<std::size_t>(d))
        throw DataError("simulate_dcc: need 1 or d univariate parameter sets");

    const auto par_for = [&](int j) -> const GarchParams& {
        return garch_params.size() == 1 ? garch_params.front()
                                        : garch_params[static_cast<std::size_t>(j)];
    };
    for (int j = 0; j < d; ++j) {
        const auto& par = par_for(j);
        if (par.alpha.size() != 1 || par.beta.size() != 1 || !(par.omega > 0.0) ||
            par.alpha[0] < 0.0 || par.beta[0] < 0.0 || !(par.alpha[0] + par.beta[0] < 1.0))
            throw DataError("simulate_dcc: invalid GARCH(1,1) parameters for series " +
                            std::to_string(j + 1));
    }

    constexpr int kBurnIn = 1000;
    const int total = kBurnIn + n;

    Rng rng(seed);
    Eigen::MatrixXd eps(total, d);
    Eigen::MatrixXd sigma2(total, d);
    Eigen::MatrixXd ustore(total, d); // devolatilized shocks u_t = P_t^{1/2} eta_t
    Eigen::MatrixXd Q = S;

    for (int t = 0; t < total; ++t) {
        if (t > 0) {
            const Eigen::VectorXd prev = ustore.row(t - 1).transpose();
            Q = (1.0 - a - b) * S + a * (prev * prev.transpose()) + b * Q;
        }
        const Eigen::MatrixXd P = normalize_to_correlation(Q);
        Eigen::LLT<Eigen::MatrixXd> llt(P);
        if (llt.info() != Eigen::Success)
            throw EstimationError("simulate_dcc: correlation recursion lost definiteness");

        Eigen::VectorXd etav(d);
        for (int j = 0; j < d; ++j) etav[j] = rng.normal();
        const Eigen::VectorXd ut = llt.matrixL() * etav;
        ustore.row(t) = ut.transpose();

        for (int j = 0; j < d; ++j) {
            const auto& par = par_for(j);
            const double v0 = par.omega / (1.0 - par.alpha[0] - par.beta[0]);
            const double e2 = t >= 1 ? eps(t - 1, j) * eps(t - 1, j) : v0;
            const double s2lag = t >= 1 ? sigma2(t - 1, j) : v0;
            sigma2(t, j) = par.omega + par.alpha[0] * e2 + par.beta[0] * s2lag;
            eps(t, j) = std::sqrt(sigma2(t, j)) * ut[j];
        }
    }

    std::vector<std::string> labels;
    for (int j = 0; j < d; ++j) labels.push_back("series" + std::to_string(j + 1));
    return MultiSeries::create(std::move(labels),
                               date_range(start_date, static_cast<std::size_t>(n)),
                               eps.bottomRows(n));
}

} // namespace tsecon
