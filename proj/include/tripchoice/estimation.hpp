#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/mxl.hpp"
#include "tripchoice/optimizer.hpp"
#include "tripchoice/parameters.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

struct EstimationOptions {
  OptimizerOptions optimizer;
  std::uint64_t seed = 1;  ///< trip-cap sampling seed
  int workers = 1;
  /// Start values; parameters frozen here are held at their start value.
  std::optional<ParameterVector> start;
  /// Finite-difference gradient for MXL instead of the analytic score.
  bool numeric_mxl_gradient = false;
};

struct ParameterEstimate {
  ParamId id = ParamId::AscBus;
  double estimate = 0.0;
  double robust_se = 0.0;
  double robust_t = 0.0;
  double classical_se = 0.0;
  bool frozen = false;
};

struct EstimationResult {
  std::string spec_name;
  SpecKind kind = SpecKind::M1;
  ParameterVector estimates;
  std::vector<ParameterEstimate> rows;  ///< canonical parameter order
  double ll0 = 0.0;
  double ll_final = 0.0;
  double adj_rho2 = 0.0;
  double aic = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_persons = 0;
  int n_params = 0;  ///< free (estimated) parameters
  int n_random = 0;
  int draws = 0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;

  const ParameterEstimate* row(ParamId p) const;
};

nlohmann::json to_json(const EstimationResult& r);
EstimationResult result_from_json(const nlohmann::json& j);
void save_result(const std::filesystem::path& path, const EstimationResult& r);
EstimationResult load_result(const std::filesystem::path& path);

/// Maps between the natural parameters of a spec and the unconstrained
/// optimiser coordinates (log scale for sigma_T, sigma_C and mu_SP).
class ParameterTransform {
 public:
  ParameterTransform(const ModelSpec& spec, const ParameterVector& start);

  std::size_t size() const { return ids_.size(); }
  const std::vector<ParamId>& ids() const { return ids_; }
  const std::vector<bool>& frozen() const { return frozen_; }

  Eigen::VectorXd to_internal(const ParameterVector& p) const;
  ParameterVector to_natural(const Eigen::VectorXd& x) const;
  /// d natural / d internal, per coordinate.
  Eigen::VectorXd jacobian(const Eigen::VectorXd& x) const;
  /// Chain rule from a natural gradient over kNumParams to internal coordinates.
  Eigen::VectorXd internal_gradient(const Eigen::VectorXd& natural, const Eigen::VectorXd& x) const;

 private:
  std::vector<ParamId> ids_;
  std::vector<bool> frozen_;
  ParameterVector template_;
};

/// Estimates a compiled model. `draws` is required for MXL structures.
EstimationResult estimate_compiled(const EstimationData& data, const DrawMatrix* draws,
                                   const EstimationOptions& options);

/// Full pipeline: MXL trip cap and Halton draws, compile, maximise, robust
/// inference and fit statistics.
EstimationResult estimate(const Dataset& data, const ModelSpec& spec,
                          const EstimationOptions& options = {});

/// The draw matrix estimate() would use for `data` under `spec`.
DrawMatrix draws_for(const Dataset& data, const ModelSpec& spec);

}  // namespace tripchoice
