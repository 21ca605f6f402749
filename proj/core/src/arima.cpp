#include "tsecon/arima.hpp"

#include "tsecon/errors.hpp"
#include "tsecon/hypothesis.hpp"
#include "tsecon/optimize.hpp"
#include "tsecon/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace tsecon {

namespace {

constexpr double kBig = 1e100;

// ---------------------------------------------------------------------------
// Stationarity-region transform (Monahan 1984): maps R^p onto the set of
// stationary AR coefficient vectors through partial autocorrelations.
// ---------------------------------------------------------------------------

Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& z) {
    const Eigen::Index p = z.size();
    Eigen::VectorXd cur(p), work(p);
    for (Eigen::Index i = 0; i < p; ++i) cur[i] = work[i] = std::tanh(z[i]);
    for (Eigen::Index j = 1; j < p; ++j) {
        const double a = cur[j];
        for (Eigen::Index k = 0; k < j; ++k) work[k] = cur[k] - a * cur[j - k - 1];
        for (Eigen::Index k = 0; k < j; ++k) cur[k] = work[k];
    }
    return cur;
}

Eigen::VectorXd ar_to_pacf(const Eigen::VectorXd& phi) {
    const Eigen::Index p = phi.size();
    Eigen::VectorXd cur = phi, work = phi;
    for (Eigen::Index j = p - 1; j > 0; --j) {
        const double a = cur[j];
        const double denom = 1.0 - a * a;
        if (!(std::abs(denom) > 1e-12))
            throw EstimationError("ar_to_pacf: coefficients on the stationarity boundary");
        for (Eigen::Index k = 0; k < j; ++k)
            work[k] = (cur[k] + a * cur[j - k - 1]) / denom;
        for (Eigen::Index k = 0; k < j; ++k) cur[k] = work[k];
    }
    Eigen::VectorXd z(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double r = std::clamp(cur[i], -1.0 + 1e-10, 1.0 - 1e-10);
        z[i] = std::atanh(r);
    }
    return z;
}

// Largest inverse-root modulus of 1 - c_1 z - ... - c_m z^m (companion
// matrix eigenvalues); < 1 means all roots outside the unit circle.
double max_inverse_root(const Eigen::VectorXd& coef) {
    const Eigen::Index m = coef.size();
    if (m == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    companion.row(0) = coef.transpose();
    for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

bool ar_stationary(const Eigen::VectorXd& ar) {
    return ar.size() == 0 || max_inverse_root(ar) < 1.0;
}

bool ma_invertible(const Eigen::VectorXd& ma) {
    return ma.size() == 0 || max_inverse_root(-ma) < 1.0;
}

// ---------------------------------------------------------------------------
// State-space machinery (Harvey's ARMA representation, unit innovation
// variance; sigma^2 is concentrated out of the likelihood).
// ---------------------------------------------------------------------------

// State dimension is max(p, q+1) <= 6 under the order caps; the filter works
// on fixed-capacity stack arrays to stay allocation-free in the hot loop.
constexpr int kMaxState = 6;

struct StateSpace {
    int r = 1;
    int p = 0;
    std::array<double, kMaxState> phi{};           // transition first column
    std::array<double, kMaxState> rvec{};          // (1, theta_1, ..)
    std::array<std::array<double, kMaxState>, kMaxState> P0{};

    // a_new = T a: a_new[i] = phi[i] a[0] + a[i+1].
    void predict_state(std::array<double, kMaxState>& a) const {
        const double a0 = a[0];
        for (int i = 0; i < r; ++i) {
            const double shift = i + 1 < r ? a[static_cast<std::size_t>(i + 1)] : 0.0;
            a[static_cast<std::size_t>(i)] =
                (i < p ? phi[static_cast<std::size_t>(i)] * a0 : 0.0) + shift;
        }
    }

    // P_new = T P T' + R R', using the companion structure of T.
    void predict_cov(std::array<std::array<double, kMaxState>, kMaxState>& P) const {
        std::array<std::array<double, kMaxState>, kMaxState> W{}; // W = T P
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const double lead = i < p ? phi[static_cast<std::size_t>(i)] *
                                                P[0][static_cast<std::size_t>(j)]
                                          : 0.0;
                const double shift =
                    i + 1 < r ? P[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j)]
                              : 0.0;
                W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lead + shift;
            }
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const double lead = j < p ? W[static_cast<std::size_t>(i)][0] *
                                                phi[static_cast<std::size_t>(j)]
                                          : 0.0;
                const double shift =
                    j + 1 < r ? W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)]
                              : 0.0;
                P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    lead + shift +
                    rvec[static_cast<std::size_t>(i)] * rvec[static_cast<std::size_t>(j)];
            }
    }
};

StateSpace make_state_space(const Eigen::VectorXd& phi, const Eigen::VectorXd& theta) {
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());

    StateSpace ss;
    ss.p = p;
    ss.r = std::max(p, q + 1);
    for (int i = 0; i < p; ++i) ss.phi[static_cast<std::size_t>(i)] = phi[i];
    ss.rvec[0] = 1.0;
    for (int j = 0; j < q; ++j) ss.rvec[static_cast<std::size_t>(j + 1)] = theta[j];

    // Stationary covariance: vec(P) = (I - T (x) T)^{-1} vec(RR').
    const int r = ss.r;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < p; ++i) T(i, 0) = phi[i];
    for (int i = 0; i + 1 < r; ++i) T(i, i + 1) = 1.0;
    Eigen::VectorXd R = Eigen::VectorXd::Zero(r);
    for (int i = 0; i < r; ++i) R[i] = ss.rvec[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd RRt = R * R.transpose();

    const int r2 = r * r;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(r2, r2);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            lhs.block(i * r, j * r, r, r) -= T(i, j) * T;
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(RRt.data(), r2);
    const Eigen::VectorXd vecp = lhs.partialPivLu().solve(rhs);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            ss.P0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                0.5 * (vecp[i + r * j] + vecp[j + r * i]);
    return ss;
}

struct FilterOutput {
    double ssq = 0.0;
    double sumlog = 0.0;
    std::vector<double> resid;
    std::vector<double> fvar;
    Eigen::VectorXd a;  // one-step-ahead prediction state
    Eigen::MatrixXd P;
    bool ok = true;
};

FilterOutput arma_filter(std::span<const double> x, const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& theta, bool want_paths) {
    const StateSpace ss = make_state_space(phi, theta);
    const int r = ss.r;
    const std::size_t n = x.size();

    FilterOutput out;
    if (want_paths) {
        out.resid.resize(n);
        out.fvar.resize(n);
    }
    std::array<double, kMaxState> a{};
    auto P = ss.P0;

    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            ss.predict_state(a);
            ss.predict_cov(P);
        }
        const double f = P[0][0];
        if (!(f > 1e-300) || !std::isfinite(f)) {
            out.ok = false;
            return out;
        }
        const double v = x[t] - a[0];
        out.ssq += v * v / f;
        out.sumlog += std::log(f);
        if (want_paths) {
            out.resid[t] = v;
            out.fvar[t] = f;
        }
        // Update: a += (P e1 / f) v, P -= (P e1)(P e1)'/f.
        std::array<double, kMaxState> k{};
        for (int i = 0; i < r; ++i) k[static_cast<std::size_t>(i)] = P[static_cast<std::size_t>(i)][0] / f;
        for (int i = 0; i < r; ++i) a[static_cast<std::size_t>(i)] += k[static_cast<std::size_t>(i)] * v;
        std::array<double, kMaxState> row0{};
        for (int j = 0; j < r; ++j) row0[static_cast<std::size_t>(j)] = P[0][static_cast<std::size_t>(j)];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    k[static_cast<std::size_t>(i)] * row0[static_cast<std::size_t>(j)];
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                const double s = 0.5 * (P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                                        P[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
                P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
                P[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = s;
            }
    }
    // One more prediction so (a, P) describe the first out-of-sample step.
    ss.predict_state(a);
    ss.predict_cov(P);
    out.a = Eigen::VectorXd::Zero(r);
    out.P = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        out.a[i] = a[static_cast<std::size_t>(i)];
        for (int j = 0; j < r; ++j)
            out.P(i, j) = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return out;
}

double concentrated_negloglik(std::span<const double> x, const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& theta, double mu) {
    const std::size_t n = x.size();
    std::vector<double> centered(n);
    for (std::size_t t = 0; t < n; ++t) centered[t] = x[t] - mu;
    const auto f = arma_filter(centered, phi, theta, false);
    if (!f.ok || !(f.ssq > 0.0)) return kBig;
    const double nd = static_cast<double>(n);
    const double ll = -0.5 * nd * (std::log(2.0 * M_PI) + 1.0 + std::log(f.ssq / nd)) -
                      0.5 * f.sumlog;
    return std::isfinite(ll) ? -ll : kBig;
}

// Unconstrained vector layout: [mu?, z_ar (p), z_ma (q)].
struct ParamLayout {
    int p = 0;
    int q = 0;
    bool intercept = false;

    int size() const { return p + q + (intercept ? 1 : 0); }

    double mu(const Eigen::VectorXd& u) const { return intercept ? u[0] : 0.0; }
    Eigen::VectorXd ar(const Eigen::VectorXd& u) const {
        const int off = intercept ? 1 : 0;
        return p > 0 ? pacf_to_ar(u.segment(off, p)) : Eigen::VectorXd();
    }
    Eigen::VectorXd ma(const Eigen::VectorXd& u) const {
        const int off = (intercept ? 1 : 0) + p;
        return q > 0 ? Eigen::VectorXd(-pacf_to_ar(u.segment(off, q))) : Eigen::VectorXd();
    }
};

// Yule-Walker AR start values from the sample ACF (Durbin-Levinson).
Eigen::VectorXd yule_walker(std::span<const double> x, int p) {
    if (p == 0) return {};
    const auto rho = acf(x, p).values;
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(p), work = cur;
    double v = 1.0;
    for (int k = 1; k <= p; ++k) {
        double num = rho[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) num -= cur[j - 1] * rho[static_cast<std::size_t>(k - j)];
        const double phi_kk = (v > 1e-12) ? num / v : 0.0;
        work = cur;
        work[k - 1] = phi_kk;
        for (int j = 1; j < k; ++j) work[j - 1] = cur[j - 1] - phi_kk * cur[k - j - 1];
        cur = work;
        v *= (1.0 - phi_kk * phi_kk);
    }
    return cur;
}

} // namespace

std::string ArimaSpec::name() const {
    std::ostringstream os;
    os << "ARIMA(" << p << "," << d << "," << q << ")";
    return os.str();
}

double ArimaFit::mean() const {
    const double denom = 1.0 - ar.sum();
    return intercept / denom;
}

int ArimaFit::n_params() const {
    return spec.p + spec.q + (spec.include_intercept ? 1 : 0) + 1;
}

ArimaFit fit_arima(const ReturnSeries& returns, const ArimaSpec& spec) {
    if (spec.p < 0 || spec.q < 0 || spec.d < 0)
        throw DataError("fit_arima: orders must be non-negative");
    if (spec.p > 5 || spec.q > 5) throw DataError("fit_arima: p and q are capped at 5");
    if (spec.d > 2) throw DataError("fit_arima: d is capped at 2");

    ArimaFit fit;
    fit.spec = spec;

    const ReturnSeries work = difference(returns, spec.d);
    const std::size_t n = work.size();
    if (static_cast<int>(n) <= spec.p + spec.q + 2)
        throw DataError("fit_arima: insufficient data for " + spec.name());

    if (spec.d >= 1 && spec.include_intercept) {
        fit.spec.include_intercept = false;
        fit.warnings.push_back("intercept dropped for d >= 1 (drift absorbed by differencing)");
    }

    const ParamLayout layout{spec.p, spec.q, fit.spec.include_intercept};
    const std::span<const double> x(work.values);

    // Start values: mean, Yule-Walker AR, zero MA.
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(layout.size());
    const double sample_mean =
        std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    if (layout.intercept) u0[0] = sample_mean;
    if (spec.p > 0) {
        Eigen::VectorXd phi0 = yule_walker(x, spec.p);
        if (!ar_stationary(phi0)) phi0 *= 0.5 / std::max(1.0, max_inverse_root(phi0));
        try {
            u0.segment(layout.intercept ? 1 : 0, spec.p) = ar_to_pacf(phi0);
        } catch (const EstimationError&) {
            // keep zeros
        }
    }

    const auto objective = [&](const Eigen::VectorXd& u) {
        return concentrated_negloglik(x, layout.ar(u), layout.ma(u), layout.mu(u));
    };

    const auto param = Parameterization::identity(static_cast<std::size_t>(layout.size()));
    OptimResult opt;
    if (layout.size() > 0) {
        opt = minimize(objective, u0, param, 1e-8);
    } else {
        opt.minimizer = u0;
        opt.objective_value = objective(u0);
        opt.converged = true;
    }

    const Eigen::VectorXd u_hat = opt.minimizer;
    fit.ar = layout.ar(u_hat);
    fit.ma = layout.ma(u_hat);
    const double mu = layout.mu(u_hat);
    fit.intercept = layout.intercept ? mu * (1.0 - fit.ar.sum()) : 0.0;
    fit.converged = opt.converged;
    if (!opt.converged) fit.warnings.push_back("optimizer did not converge");

    // Final filter pass for residuals, sigma2 and the forecasting state.
    std::vector<double> centered(n);
    for (std::size_t t = 0; t < n; ++t) centered[t] = x[t] - mu;
    const auto filt = arma_filter(centered, fit.ar, fit.ma, true);
    if (!filt.ok) throw EstimationError("fit_arima: likelihood evaluation failed at the optimum");
    fit.sigma2 = filt.ssq / static_cast<double>(n);
    fit.loglik = -0.5 * static_cast<double>(n) *
                     (std::log(2.0 * M_PI) + 1.0 + std::log(fit.sigma2)) -
                 0.5 * filt.sumlog;
    fit.residuals = filt.resid;
    fit.pred_var_ratio = filt.fvar;
    fit.dates = work.dates;
    fit.working = work.values;
    fit.n_effective = static_cast<int>(n);
    fit.final_state = filt.a;
    fit.final_state_cov = filt.P;

    // Boundary diagnostics on the fitted polynomials.
    const double ar_root = spec.p > 0 ? max_inverse_root(fit.ar) : 0.0;
    const double ma_root = spec.q > 0 ? max_inverse_root(-fit.ma) : 0.0;
    if (ar_root > 1.0 - 1e-4 || ma_root > 1.0 - 1e-4) {
        fit.boundary_root = true;
        fit.warnings.push_back("root within 1e-4 of the unit circle (boundary fit)");
    }

    // Standard errors: observed information in the unconstrained space,
    // mapped to (c, ar, ma) by the delta method.
    fit.param_names.clear();
    if (layout.intercept) fit.param_names.push_back("intercept");
    for (int i = 1; i <= spec.p; ++i) fit.param_names.push_back("ar" + std::to_string(i));
    for (int j = 1; j <= spec.q; ++j) fit.param_names.push_back("ma" + std::to_string(j));

    const int np = layout.size();
    fit.se = Eigen::VectorXd::Constant(np, std::numeric_limits<double>::quiet_NaN());
    if (np > 0) {
        try {
            const auto to_natural = [&](const Eigen::VectorXd& u) {
                Eigen::VectorXd nat(np);
                int c = 0;
                if (layout.intercept) nat[c++] = layout.mu(u) * (1.0 - layout.ar(u).sum());
                const Eigen::VectorXd arv = layout.ar(u);
                const Eigen::VectorXd mav = layout.ma(u);
                for (int i = 0; i < spec.p; ++i) nat[c++] = arv[i];
                for (int j = 0; j < spec.q; ++j) nat[c++] = mav[j];
                return nat;
            };
            const Eigen::MatrixXd Hu = numerical_hessian(objective, u_hat);
            Eigen::MatrixXd J(np, np);
            Eigen::VectorXd up = u_hat;
            for (int j = 0; j < np; ++j) {
                const double step = 1e-6 * std::max(1.0, std::abs(u_hat[j]));
                up[j] = u_hat[j] + step;
                const Eigen::VectorXd xp = to_natural(up);
                up[j] = u_hat[j] - step;
                const Eigen::VectorXd xm = to_natural(up);
                up[j] = u_hat[j];
                J.col(j) = (xp - xm) / (2.0 * step);
            }
            const Eigen::MatrixXd cov =
                J * Hu.fullPivLu().solve(Eigen::MatrixXd::Identity(np, np)) * J.transpose();
            fit.se = standard_errors(cov);
        } catch (const EstimationError&) {
            fit.warnings.push_back("standard errors unavailable (singular information)");
        }
        if (!fit.se.allFinite())
            fit.warnings.push_back("standard errors unavailable for some parameters");
    }
    return fit;
}

std::pair<double, double> information_criteria(double loglik, int k, long n) {
    const double aic = -2.0 * loglik + 2.0 * static_cast<double>(k);
    const double bic = -2.0 * loglik + static_cast<double>(k) * std::log(static_cast<double>(n));
    return {aic, bic};
}

std::pair<double, double> information_criteria(const ArimaFit& fit) {
    return information_criteria(fit.loglik, fit.n_params(), fit.n_effective);
}

SelectionTable select_arima(const ReturnSeries& returns, int p_max, const std::vector<int>& d_set,
                            int q_max) {
    if (p_max < 0 || q_max < 0 || p_max > 5 || q_max > 5)
        throw DataError("select_arima: p_max and q_max must be in [0, 5]");
    if (d_set.empty()) throw DataError("select_arima: empty grid");

    SelectionTable table;
    for (int d : d_set) {
        for (int p = 0; p <= p_max; ++p) {
            for (int q = 0; q <= q_max; ++q) {
                const ArimaSpec spec{p, d, q, d == 0};
                try {
                    const ArimaFit fit = fit_arima(returns, spec);
                    if (!fit.converged) {
                        table.warnings.push_back(spec.name() + " skipped: did not converge");
                        continue;
                    }
                    const auto [aic, bic] = information_criteria(fit);
                    table.rows.push_back(SelectionRow{fit.spec, fit.loglik, aic, bic});
                } catch (const std::exception& e) {
                    table.warnings.push_back(spec.name() + " skipped: " + e.what());
                }
            }
        }
    }
    if (table.rows.empty()) throw EstimationError("select_arima: all grid fits failed");

    const auto n_params = [](const ArimaSpec& s) {
        return s.p + s.q + (s.include_intercept ? 1 : 0) + 1;
    };
    const auto better = [&](const SelectionRow& a, const SelectionRow& b, bool by_aic) {
        const double ca = by_aic ? a.aic : a.bic;
        const double cb = by_aic ? b.aic : b.bic;
        if (ca != cb) return ca < cb;
        if (n_params(a.spec) != n_params(b.spec)) return n_params(a.spec) < n_params(b.spec);
        return a.spec.q < b.spec.q;
    };
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [&](const SelectionRow& a, const SelectionRow& b) {
                         return better(a, b, false);
                     });
    table.best_by_bic = table.rows.front().spec;
    table.best_by_aic =
        std::min_element(table.rows.begin(), table.rows.end(),
                         [&](const SelectionRow& a, const SelectionRow& b) {
                             return better(a, b, true);
                         })
            ->spec;
    return table;
}

ArimaDiagnostics arima_diagnostics(const ArimaFit& fit, int max_lag) {
    const int fit_df = fit.spec.p + fit.spec.q;
    if (max_lag <= fit_df)
        throw DataError("arima_diagnostics: max_lag must exceed p + q");
    if (static_cast<std::size_t>(max_lag) >= fit.residuals.size())
        throw DataError("arima_diagnostics: max_lag too large for the residual series");

    ArimaDiagnostics diag;
    diag.std_residuals.resize(fit.residuals.size());
    for (std::size_t t = 0; t < fit.residuals.size(); ++t)
        diag.std_residuals[t] = fit.residuals[t] / std::sqrt(fit.sigma2 * fit.pred_var_ratio[t]);
    diag.residual_acf = acf(fit.residuals, max_lag);
    for (int lag = fit_df + 1; lag <= max_lag; ++lag) {
        diag.lb_lags.push_back(lag);
        diag.lb_pvalues.push_back(ljung_box(fit.residuals, lag, fit_df).p_value);
    }
    return diag;
}

ForecastResult forecast_arima(const ArimaFit& fit, int h) {
    if (h < 1) throw DataError("forecast_arima: horizon must be >= 1");

    const auto ss = make_state_space(fit.ar, fit.ma);
    const double mu = fit.mean();

    ForecastResult out;
    out.horizon = h;
    out.point.resize(static_cast<std::size_t>(h));
    out.lower.resize(static_cast<std::size_t>(h));
    out.upper.resize(static_cast<std::size_t>(h));

    // final_state/final_state_cov already hold the one-step-ahead prediction.
    std::array<double, 6> a{};
    std::array<std::array<double, 6>, 6> P{};
    for (int i = 0; i < ss.r; ++i) {
        a[static_cast<std::size_t>(i)] = fit.final_state[i];
        for (int j = 0; j < ss.r; ++j)
            P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                fit.final_state_cov(i, j);
    }
    for (int k = 0; k < h; ++k) {
        if (k > 0) {
            ss.predict_state(a);
            ss.predict_cov(P);
        }
        const double point = a[0] + mu;
        const double sd = std::sqrt(fit.sigma2 * P[0][0]);
        out.point[static_cast<std::size_t>(k)] = point;
        out.lower[static_cast<std::size_t>(k)] = point - 2.0 * sd;
        out.upper[static_cast<std::size_t>(k)] = point + 2.0 * sd;
    }
    return out;
}

ReturnSeries simulate_arima(const ArimaSpec& spec, double intercept, const Eigen::VectorXd& ar,
                            const Eigen::VectorXd& ma, double sigma, int n, std::uint64_t seed,
                            Date start_date) {
    if (n < 1) throw DataError("simulate_arima: n must be positive");
    if (ar.size() != spec.p || ma.size() != spec.q)
        throw DataError("simulate_arima: coefficient lengths do not match the spec");
    if (!(sigma > 0.0)) throw DataError("simulate_arima: sigma must be positive");
    if (!ar_stationary(ar)) throw DataError("simulate_arima: non-stationary AR coefficients");
    if (!ma_invertible(ma)) throw DataError("simulate_arima: non-invertible MA coefficients");

    constexpr int kBurnIn = 500;
    const int total = kBurnIn + n;
    const double mu = intercept / (1.0 - ar.sum());

    Rng rng(seed);
    std::vector<double> eps(static_cast<std::size_t>(total));
    for (auto& e : eps) e = sigma * rng.normal();

    std::vector<double> y(static_cast<std::size_t>(total), mu);
    for (int t = 0; t < total; ++t) {
        double v = intercept + eps[static_cast<std::size_t>(t)];
        for (int i = 1; i <= spec.p; ++i)
            v += ar[i - 1] * (t - i >= 0 ? y[static_cast<std::size_t>(t - i)] : mu);
        for (int j = 1; j <= spec.q; ++j)
            v += ma[j - 1] * (t - j >= 0 ? eps[static_cast<std::size_t>(t - j)] : 0.0);
        y[static_cast<std::size_t>(t)] = v;
    }

    std::vector<double> out(y.end() - n, y.end());
    for (int k = 0; k < spec.d; ++k)
        for (std::size_t t = 1; t < out.size(); ++t) out[t] += out[t - 1];

    return ReturnSeries{date_range(start_date, static_cast<std::size_t>(n)), std::move(out),
                        "simulated " + spec.name()};
}

} // namespace tsecon
