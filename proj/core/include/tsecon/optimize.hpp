#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace tsecon {

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Per-parameter mapping between the unconstrained optimizer space and the
/// natural (feasible) space.
enum class Transform {
    identity,
    log_lower, // natural = lo + exp(u), for positivity / shifted lower bounds
    logistic,  // natural in (lo, hi)
    simplex,   // all simplex-tagged parameters jointly: x_i > 0, sum x < cap
};

struct ParamSpec {
    std::string name;
    Transform transform = Transform::identity;
    double lo = 0.0;
    double hi = 1.0;
};

/// Maps the unconstrained real line onto the feasible region and back.
/// Simplex-tagged parameters form a single group mapped through a logistic
/// (multinomial) transform onto {x_i > 0, sum x_i < simplex_cap}.
struct Parameterization {
    std::vector<ParamSpec> params;
    double simplex_cap = 1.0 - 1e-6;

    std::size_t size() const { return params.size(); }

    Eigen::VectorXd to_natural(const Eigen::VectorXd& unconstrained) const;
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& natural) const;

    static Parameterization identity(std::size_t n);
};

struct OptimResult {
    Eigen::VectorXd minimizer; // natural space
    double objective_value = 0.0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0; // in transformed space
};

/// Two-stage local minimizer: derivative-free simplex refinement followed by
/// quasi-Newton polishing, both on the transformed (unconstrained)
/// parameters. Convergence requires relative objective change < tol and
/// transformed-space gradient norm < 100*tol; the iteration budget across
/// both stages is 10000, after which the best point is returned with
/// converged = false. Throws EstimationError when the objective is not
/// finite at init.
OptimResult minimize(const Objective& objective, const Eigen::VectorXd& init,
                     const Parameterization& param, double tol = 1e-9);

/// Central differences with per-coordinate step h * max(1, |x_i|).
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x,
                                   double h = 1e-6);

/// Central second differences, symmetrized as (H + H^T)/2.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x,
                                  double h = 1e-4);

/// Observed-information covariance of the natural parameters: the Hessian is
/// taken in the unconstrained space (always feasible to evaluate) and mapped
/// back through the transform Jacobian (delta method). Entries may be
/// non-finite when the information matrix is singular; callers should flag
/// rather than fail.
Eigen::MatrixXd observed_information_covariance(const Objective& objective,
                                                const Eigen::VectorXd& natural_opt,
                                                const Parameterization& param);

/// sqrt of the covariance diagonal; NaN where the diagonal is not positive.
Eigen::VectorXd standard_errors(const Eigen::MatrixXd& covariance);

} // namespace tsecon
