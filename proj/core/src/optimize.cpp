#include "tsecon/optimize.hpp"

#include "tsecon/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace tsecon {

namespace {

constexpr double kBig = 1e100;
constexpr int kIterationCap = 10000;

double safe_exp(double u) { return std::exp(std::min(u, 50.0)); }

// Five-point-stencil gradient: O(h^4) truncation, used only to judge
// convergence, where the two-point formula is too noisy on large-sample
// likelihoods.
Eigen::VectorXd gradient4(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + 2.0 * step;
        const double f2p = f(xp);
        xp[i] = x[i] + step;
        const double f1p = f(xp);
        xp[i] = x[i] - step;
        const double f1m = f(xp);
        xp[i] = x[i] - 2.0 * step;
        const double f2m = f(xp);
        xp[i] = x[i];
        g[i] = (f2m - 8.0 * f1m + 8.0 * f1p - f2p) / (12.0 * step);
    }
    return g;
}

} // namespace

Eigen::VectorXd Parameterization::to_natural(const Eigen::VectorXd& u) const {
    Eigen::VectorXd x(u.size());
    // Simplex group: multinomial-logistic map with an implicit remainder
    // category, so x_i > 0 and sum x_i < cap by construction.
    double denom = 1.0;
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].transform == Transform::simplex)
            denom += safe_exp(u[static_cast<Eigen::Index>(i)]);

    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        const auto j = static_cast<Eigen::Index>(i);
        switch (p.transform) {
        case Transform::identity:
            x[j] = u[j];
            break;
        case Transform::log_lower:
            x[j] = p.lo + safe_exp(u[j]);
            break;
        case Transform::logistic:
            x[j] = p.lo + (p.hi - p.lo) / (1.0 + std::exp(-u[j]));
            break;
        case Transform::simplex:
            x[j] = simplex_cap * safe_exp(u[j]) / denom;
            break;
        }
    }
    return x;
}

Eigen::VectorXd Parameterization::to_unconstrained(const Eigen::VectorXd& x) const {
    Eigen::VectorXd u(x.size());
    double simplex_sum = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].transform == Transform::simplex)
            simplex_sum += x[static_cast<Eigen::Index>(i)] / simplex_cap;
    const double remainder = std::max(1.0 - simplex_sum, 1e-300);

    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        const auto j = static_cast<Eigen::Index>(i);
        switch (p.transform) {
        case Transform::identity:
            u[j] = x[j];
            break;
        case Transform::log_lower:
            if (!(x[j] > p.lo))
                throw EstimationError("parameterization: value at or below lower bound for '" +
                                      p.name + "'");
            u[j] = std::log(x[j] - p.lo);
            break;
        case Transform::logistic:
            if (!(x[j] > p.lo && x[j] < p.hi))
                throw EstimationError("parameterization: value outside (lo, hi) for '" + p.name +
                                      "'");
            u[j] = std::log((x[j] - p.lo) / (p.hi - x[j]));
            break;
        case Transform::simplex:
            if (!(x[j] > 0.0))
                throw EstimationError("parameterization: simplex value must be positive for '" +
                                      p.name + "'");
            u[j] = std::log(x[j] / simplex_cap) - std::log(remainder);
            break;
        }
    }
    return u;
}

Parameterization Parameterization::identity(std::size_t n) {
    Parameterization p;
    p.params.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        p.params[i] = ParamSpec{"x" + std::to_string(i), Transform::identity, 0.0, 1.0};
    return p;
}

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        const double fp = f(xp);
        xp[i] = x[i] - step;
        const double fm = f(xp);
        xp[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw EstimationError("numerical_gradient: non-finite objective evaluation");
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, double h) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd H(n, n);
    Eigen::VectorXd step(n);
    for (Eigen::Index i = 0; i < n; ++i) step[i] = h * std::max(1.0, std::abs(x[i]));

    const double f0 = f(x);
    if (!std::isfinite(f0)) throw EstimationError("numerical_hessian: non-finite objective");
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        xp[i] = x[i] + step[i];
        const double fp = f(xp);
        xp[i] = x[i] - step[i];
        const double fm = f(xp);
        xp[i] = x[i];
        H(i, i) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            xp[i] = x[i] + step[i];
            xp[j] = x[j] + step[j];
            const double fpp = f(xp);
            xp[j] = x[j] - step[j];
            const double fpm = f(xp);
            xp[i] = x[i] - step[i];
            const double fmm = f(xp);
            xp[j] = x[j] + step[j];
            const double fmp = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
        }
    }
    return 0.5 * (H + H.transpose());
}

namespace {

// Nelder-Mead on the unconstrained space. Returns the best vertex; spends at
// most max_iter objective contractions/reflections.
struct SimplexState {
    Eigen::VectorXd best;
    double fbest;
    int iterations;
};

SimplexState nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double tol,
                         int max_iter) {
    const Eigen::Index n = x0.size();
    const int m = static_cast<int>(n) + 1;
    std::vector<Eigen::VectorXd> verts(m, x0);
    std::vector<double> fv(m);
    for (int i = 1; i < m; ++i) {
        const double step = 0.1 * std::max(1.0, std::abs(x0[i - 1]));
        verts[static_cast<std::size_t>(i)][i - 1] += step;
    }
    for (int i = 0; i < m; ++i) {
        const double v = f(verts[static_cast<std::size_t>(i)]);
        fv[static_cast<std::size_t>(i)] = std::isfinite(v) ? v : kBig;
    }

    auto order = [&]() {
        std::vector<int> idx(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)];
        });
        std::vector<Eigen::VectorXd> nv(static_cast<std::size_t>(m));
        std::vector<double> nf(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            nv[static_cast<std::size_t>(i)] = verts[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            nf[static_cast<std::size_t>(i)] = fv[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        }
        verts.swap(nv);
        fv.swap(nf);
    };

    int iter = 0;
    order();
    while (iter < max_iter) {
        ++iter;
        const double fspread = std::abs(fv[static_cast<std::size_t>(m - 1)] - fv[0]);
        if (fspread <= tol * (std::abs(fv[0]) + tol)) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < m - 1; ++i) centroid += verts[static_cast<std::size_t>(i)];
        centroid /= static_cast<double>(m - 1);

        auto eval = [&](const Eigen::VectorXd& x) {
            const double v = f(x);
            return std::isfinite(v) ? v : kBig;
        };

        const Eigen::VectorXd& worst = verts[static_cast<std::size_t>(m - 1)];
        const Eigen::VectorXd xr = centroid + (centroid - worst);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);
            const double fe = eval(xe);
            if (fe < fr) {
                verts[static_cast<std::size_t>(m - 1)] = xe;
                fv[static_cast<std::size_t>(m - 1)] = fe;
            } else {
                verts[static_cast<std::size_t>(m - 1)] = xr;
                fv[static_cast<std::size_t>(m - 1)] = fr;
            }
        } else if (fr < fv[static_cast<std::size_t>(m - 2)]) {
            verts[static_cast<std::size_t>(m - 1)] = xr;
            fv[static_cast<std::size_t>(m - 1)] = fr;
        } else {
            const Eigen::VectorXd xc = centroid + 0.5 * ((fr < fv[static_cast<std::size_t>(m - 1)] ? xr : worst) - centroid);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[static_cast<std::size_t>(m - 1)])) {
                verts[static_cast<std::size_t>(m - 1)] = xc;
                fv[static_cast<std::size_t>(m - 1)] = fc;
            } else {
                // shrink toward best
                for (int i = 1; i < m; ++i) {
                    verts[static_cast<std::size_t>(i)] =
                        verts[0] + 0.5 * (verts[static_cast<std::size_t>(i)] - verts[0]);
                    fv[static_cast<std::size_t>(i)] = eval(verts[static_cast<std::size_t>(i)]);
                }
            }
        }
        order();
    }
    return SimplexState{verts[0], fv[0], iter};
}

} // namespace

OptimResult minimize(const Objective& objective, const Eigen::VectorXd& init,
                     const Parameterization& param, double tol) {
    if (static_cast<std::size_t>(init.size()) != param.size())
        throw EstimationError("minimize: init size does not match parameterization");
    if (!(tol > 0.0)) throw EstimationError("minimize: tol must be positive");
    if (!std::isfinite(objective(init)))
        throw EstimationError("minimize: objective not finite at init");

    const auto transformed = [&](const Eigen::VectorXd& u) {
        const double v = objective(param.to_natural(u));
        return std::isfinite(v) ? v : kBig;
    };

    Eigen::VectorXd u = param.to_unconstrained(init);
    const Eigen::Index n = u.size();

    // Stage 1: simplex refinement to escape poor curvature at init.
    const int nm_budget = std::min(2000, 400 * static_cast<int>(n));
    auto nm = nelder_mead(transformed, u, tol, nm_budget);
    u = nm.best;
    double fbest = nm.fbest;
    int iterations = nm.iterations;

    // Stage 2: BFGS with numerical gradients.
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g;
    bool converged = false;
    double gnorm = std::numeric_limits<double>::infinity();
    // A slightly larger step than the public default keeps the gradient
    // noise floor below the convergence gate on large-sample likelihoods.
    constexpr double kGradStep = 1e-5;
    try {
        g = numerical_gradient(transformed, u, kGradStep);
    } catch (const EstimationError&) {
        g = Eigen::VectorXd::Zero(n);
    }
    gnorm = g.norm();

    int stalled = 0;
    while (iterations < kIterationCap) {
        ++iterations;
        Eigen::VectorXd dir = -(Hinv * g);
        if (!dir.allFinite() || dir.dot(g) >= 0.0) {
            Hinv = Eigen::MatrixXd::Identity(n, n);
            dir = -g;
        }

        // Backtracking Armijo line search.
        double step = 1.0;
        const double slope = g.dot(dir);
        double fnew = fbest;
        Eigen::VectorXd unew = u;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            unew = u + step * dir;
            fnew = transformed(unew);
            if (fnew <= fbest + 1e-4 * step * slope) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            // No descent step exists at this scale; judge by an accurate
            // gradient at the final point.
            gnorm = gradient4(transformed, u, 1e-4).norm();
            converged = gnorm < 100.0 * tol;
            break;
        }

        Eigen::VectorXd gnew;
        try {
            gnew = numerical_gradient(transformed, unew, kGradStep);
        } catch (const EstimationError&) {
            u = unew;
            fbest = fnew;
            break;
        }

        const Eigen::VectorXd s = unew - u;
        const Eigen::VectorXd y = gnew - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
                   rho * s * s.transpose();
        }

        const double rel_change = std::abs(fbest - fnew);
        u = unew;
        fbest = fnew;
        g = gnew;
        gnorm = g.norm();
        const bool small_change = rel_change <= tol * (std::abs(fbest) + tol);
        if (small_change) {
            if (gnorm >= 100.0 * tol) gnorm = gradient4(transformed, u, 1e-4).norm();
            if (gnorm < 100.0 * tol) {
                converged = true;
                break;
            }
        }
        // Stop only when improvements die at the floating-point noise floor,
        // not merely below tol; convergence is then judged as it stands.
        stalled = rel_change <= 1e-14 * (std::abs(fbest) + 1.0) ? stalled + 1 : 0;
        if (stalled >= 3) break;
    }

    // Ill-conditioned likelihoods can stall the line search while the true
    // gradient is still above the gate; a few Newton corrections on the
    // gradient (trusting the local quadratic model instead of f-comparisons
    // at the float noise floor) finish the job.
    if (!converged && iterations < kIterationCap) {
        const Eigen::VectorXd u_before_polish = u;
        Eigen::VectorXd g4 = gradient4(transformed, u, 1e-4);
        double g4norm = g4.norm();
        for (int round = 0; round < 3 && g4norm >= 100.0 * tol; ++round) {
            ++iterations;
            Eigen::MatrixXd H;
            try {
                H = numerical_hessian(transformed, u, 1e-4);
            } catch (const EstimationError&) {
                break;
            }
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
            const Eigen::VectorXd unew = u - ldlt.solve(g4);
            if (!unew.allFinite()) break;
            const Eigen::VectorXd g4new = gradient4(transformed, unew, 1e-4);
            if (!(g4new.norm() < g4norm)) break;
            u = unew;
            g4 = g4new;
            g4norm = g4.norm();
        }
        const double fnew = transformed(u);
        if (fnew < fbest + 1e-10 * (std::abs(fbest) + 1.0)) {
            fbest = std::min(fbest, fnew);
            gnorm = g4norm;
            converged = gnorm < 100.0 * tol;
        } else {
            u = u_before_polish;
        }
    }

    if (std::getenv("TSECON_OPT_DEBUG") != nullptr)
        std::fprintf(stderr, "[minimize] conv=%d iters=%d gnorm=%.3e f=%.10f\n",
                     static_cast<int>(converged), iterations, gnorm, fbest);
    OptimResult result;
    result.minimizer = param.to_natural(u);
    result.objective_value = fbest;
    result.converged = converged;
    result.iterations = iterations;
    result.gradient_norm = gnorm;
    return result;
}

Eigen::MatrixXd observed_information_covariance(const Objective& objective,
                                                const Eigen::VectorXd& natural_opt,
                                                const Parameterization& param) {
    const auto transformed = [&](const Eigen::VectorXd& u) {
        const double v = objective(param.to_natural(u));
        return std::isfinite(v) ? v : kBig;
    };
    const Eigen::VectorXd u = param.to_unconstrained(natural_opt);
    const Eigen::Index n = u.size();

    const Eigen::MatrixXd Hu = numerical_hessian(transformed, u);

    // Transform Jacobian d natural / d unconstrained, by central differences.
    Eigen::MatrixXd J(n, n);
    Eigen::VectorXd up = u;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(u[j]));
        up[j] = u[j] + step;
        const Eigen::VectorXd xp = param.to_natural(up);
        up[j] = u[j] - step;
        const Eigen::VectorXd xm = param.to_natural(up);
        up[j] = u[j];
        J.col(j) = (xp - xm) / (2.0 * step);
    }

    const Eigen::MatrixXd Hu_inv = Hu.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    return J * Hu_inv * J.transpose();
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& covariance) {
    Eigen::VectorXd se(covariance.rows());
    for (Eigen::Index i = 0; i < covariance.rows(); ++i) {
        const double v = covariance(i, i);
        se[i] = (std::isfinite(v) && v > 0.0) ? std::sqrt(v)
                                              : std::numeric_limits<double>::quiet_NaN();
    }
    return se;
}

} // namespace tsecon
