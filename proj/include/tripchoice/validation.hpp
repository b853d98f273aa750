#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/model_spec.hpp"

namespace tripchoice {

/// Fold (0-based) for every observation in Dataset order; -1 for SP
/// observations, which are never held out.
std::vector<int> make_folds(const Dataset& data, int k, std::uint64_t seed);

/// Highest systematic utility among available alternatives, with scale 1.
/// MXL structures use mu_T + delta_MIG * MIG and the population-mean cost
/// coefficient. Ties go to the first alternative in the fixed order.
Mode predict_mode(const ChoiceObservation& obs, const PersonProfile& person,
                  const ParameterVector& params, const ModelSpec& spec);

/// Share of held-out RP observations whose predicted mode equals the choice.
double prediction_accuracy(const Dataset& data, const ParameterVector& params,
                           const ModelSpec& spec, const std::vector<bool>& test);

struct CvReport {
  std::vector<double> fold_accuracy;
  std::vector<std::size_t> fold_size;
  std::vector<ParameterVector> fold_params;
  std::vector<std::string> fold_errors;  ///< empty string for a successful fold
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation over successful folds
};

/// Re-estimates on each training split (other RP folds plus all SP for joint
/// structures) starting from `full_sample` when given, and scores the held-out
/// fold. MXL folds reuse the full-sample draw matrix.
CvReport cross_validate(const Dataset& data, const ModelSpec& spec, int k, std::uint64_t seed,
                        const EstimationOptions& options = {},
                        const ParameterVector* full_sample = nullptr);

nlohmann::json to_json(const CvReport& report);

}  // namespace tripchoice
