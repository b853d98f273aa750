#pragma once

#include <string>

#include "tripchoice/estimation.hpp"
#include "tripchoice/mxl.hpp"
#include "tripchoice/parameters.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

struct VotPair {
  double ivtt = 0.0;  ///< CAD/hr
  double walk = 0.0;  ///< CAD/hr
};

/// Value of time from fixed coefficients: beta_time / beta_cost * 60.
/// Time and cost share the /10 scaling so the scaled ratio is already in
/// CAD/min; mu_SP, if any, cancels.
VotPair vot_mnl(double beta_time, double beta_access, double beta_cost);

/// (mu_T + delta_MIG) / mu_T: immigrant to Canadian-born VOT ratio.
double vot_ratio_mxl(double mu_time, double delta_mig);

/// Mean of the negative lognormal cost coefficient, -exp(mu_C + sigma_C^2/2).
double population_mean_cost(double mu_cost, double sigma_cost);

struct ConditionalEstimate {
  double beta_time = 0.0;
  double beta_cost = 0.0;
  double vot() const { return beta_time / beta_cost * 60.0; }
};

/// Posterior means of the person's random coefficients given their choices:
/// sum_r beta_r L_n(beta_r) / sum_r L_n(beta_r). A person with no observations
/// gets the prior mean over the draws. Throws NumericError if every draw's
/// likelihood underflows.
ConditionalEstimate conditional_parameters(const CompiledPerson& person,
                                           const ParameterVector& params,
                                           const DrawMatrix& draws, bool joint);

/// One row of the value-of-time summary.
struct VotRow {
  std::string model;
  std::string population;
  double ivtt = 0.0;
  double walk = 0.0;
  double ratio = 0.0;  ///< MXL rows only
  bool has_ratio = false;
};

/// Rows for one estimation result: a single "All" row for MNL; Canadian-born,
/// immigrant and ratio rows for MXL (population-mean cost coefficient).
std::vector<VotRow> vot_summary(const EstimationResult& result);

}  // namespace tripchoice
