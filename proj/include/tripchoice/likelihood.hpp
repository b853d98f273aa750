#pragma once

#include <Eigen/Dense>

namespace tripchoice {

/// A log-likelihood value with its gradient over all kNumParams coefficients
/// (natural scale; absent coefficients have zero entries) and, optionally, the
/// per-person score rows used by the clustered sandwich estimator.
struct LikelihoodValue {
  double ll = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd person_scores;  ///< persons x kNumParams, empty unless requested
};

}  // namespace tripchoice
