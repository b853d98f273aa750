#include "tripchoice/integration_index.hpp"

#include <algorithm>
#include <string>

#include "tripchoice/errors.hpp"

namespace tripchoice {
namespace {

void check_range(double v, const char* what) {
  if (!(v >= 1.0 && v <= 10.0)) {
    throw DataError(std::string(what) + " score " + std::to_string(v) + " outside [1, 10]");
  }
}

}  // namespace

double dimension_score(std::span<const double> indicator_values,
                       std::span<const double> importance_weights) {
  if (indicator_values.size() != importance_weights.size()) {
    throw DataError("indicator values and importance weights differ in length");
  }
  if (indicator_values.empty()) throw DataError("no indicators supplied");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < indicator_values.size(); ++i) {
    if (importance_weights[i] < 0.0) throw DataError("negative importance weight");
    num += importance_weights[i] * indicator_values[i];
    den += importance_weights[i];
  }
  if (den <= 0.0) throw DataError("importance weights are all zero");
  const auto [lo, hi] = std::minmax_element(indicator_values.begin(), indicator_values.end());
  return std::clamp(num / den, *lo, *hi);
}

IntegrationScore composite_index(const IntegrationDimensions& dims) {
  const std::array<const std::optional<double>*, 4> parts = {&dims.economic, &dims.social,
                                                             &dims.civic, &dims.health};
  constexpr std::array<const char*, 4> names = {"economic", "social", "civic", "health"};
  double num = 0.0;
  double wsum = 0.0;
  bool missing = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i]->has_value()) {
      missing = true;
      continue;
    }
    check_range(**parts[i], names[i]);
    num += kDimensionWeights[i] * **parts[i];
    wsum += kDimensionWeights[i];
  }
  if (wsum == 0.0) throw DataError("all integration dimensions missing");
  return {missing ? num / wsum : num, missing};
}

double composite_index(double economic, double social, double civic, double health) {
  return composite_index(IntegrationDimensions{economic, social, civic, health}).value;
}

}  // namespace tripchoice
