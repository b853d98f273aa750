#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tripchoice {

/// Returns the objective at x and fills *gradient when non-null.
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* gradient)>;

struct OptimizerOptions {
  double gradient_tolerance = 1e-5;  ///< max-norm of the free gradient
  double relative_tolerance = 1e-9;  ///< relative objective improvement
  int max_iterations = 1000;
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
  std::string status;

  double gradient_max_norm() const;
};

/// BFGS ascent on the coordinates not marked frozen; frozen coordinates stay
/// exactly at their start values. Line search: backtracking from the unit step
/// to the first point satisfying the strong Wolfe conditions, with zoom.
/// Throws OptimizationError if the objective is not finite at the start or
/// the line search cannot find a finite point.
OptimizeResult maximize(const ObjectiveFn& objective, const Eigen::VectorXd& start,
                        const std::vector<bool>& frozen = {},
                        const OptimizerOptions& options = {});

/// Central-difference gradient, used as an oracle and for hyperparameters.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double rel_step = 1e-5);

/// Symmetrised central-difference Jacobian of an analytic gradient.
Eigen::MatrixXd numeric_hessian(const ObjectiveFn& objective, const Eigen::VectorXd& x,
                                double rel_step = 1e-5);

/// Inverse of the log-likelihood Hessian. Throws NumericError with a
/// condition estimate if it is singular.
Eigen::MatrixXd invert_hessian(const Eigen::MatrixXd& hessian);

struct RobustCovariance {
  Eigen::MatrixXd covariance;
  bool degenerate = false;  ///< all scores zero
};

/// Person-clustered sandwich H^-1 (sum_n s_n s_n') H^-1 scaled by G/(G-1).
/// `cluster_scores` has one row per cluster.
RobustCovariance robust_covariance(const Eigen::MatrixXd& cluster_scores,
                                   const Eigen::MatrixXd& hessian_inverse);

struct FitStatistics {
  double adj_rho2 = 0.0;
  double aic = 0.0;
};

/// adj_rho2 = 1 - (ll - K)/ll0 and AIC = 2K - 2ll.
FitStatistics fit_statistics(double ll0, double ll_final, int n_params, std::size_t n_obs);

}  // namespace tripchoice
