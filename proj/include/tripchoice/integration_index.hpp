#pragma once

#include <array>
#include <optional>
#include <span>

namespace tripchoice {

/// Dimension scores on the 1-10 scale. A missing dimension is reweighted away.
struct IntegrationDimensions {
  std::optional<double> economic;
  std::optional<double> social;
  std::optional<double> civic;
  std::optional<double> health;
};

/// Fixed dimension weights: economic, social, civic, health.
inline constexpr std::array<double, 4> kDimensionWeights = {0.4, 0.3, 0.2, 0.1};

struct IntegrationScore {
  double value = 0.0;
  bool reweighted = false;  ///< at least one dimension was missing
};

/// Importance-weighted mean of indicator values, sum(w*v)/sum(w).
double dimension_score(std::span<const double> indicator_values,
                       std::span<const double> importance_weights);

/// Weighted composite of the four dimension scores. Missing dimensions are
/// dropped and the remaining weights renormalised; all missing throws.
IntegrationScore composite_index(const IntegrationDimensions& dims);

/// Convenience overload for a complete set of dimensions.
double composite_index(double economic, double social, double civic, double health);

}  // namespace tripchoice
