#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripchoice {

/// Every coefficient any of the four model structures can carry.
/// Car and train constants are normalised to zero and have no entry.
enum class ParamId : std::uint8_t {
  AscBus,
  AscSubway,
  AscWalk,
  AscBike,
  AscEmob,
  Cost,
  Time,
  Access,
  DistCar,
  DistPt,
  DistTrain,
  DistActive,
  WorkCar,
  ChildPt,
  MigSubway,
  FullTimeSubway,
  StudentTrain,
  StudentWalk,
  SafeSubway,
  CycleBike,
  IntegPt,
  IntegActive,
  SnowActive,
  MuTime,
  SigmaTime,
  DeltaMig,
  MuCost,
  SigmaCost,
  ScaleSp,
};

inline constexpr std::size_t kNumParams = static_cast<std::size_t>(ParamId::ScaleSp) + 1;

using ParamMask = std::bitset<kNumParams>;

constexpr std::size_t index_of(ParamId p) { return static_cast<std::size_t>(p); }
constexpr ParamId param_at(std::size_t i) { return static_cast<ParamId>(i); }

/// Machine name used in files, e.g. "beta_cost".
std::string_view param_name(ParamId p);
/// Display label used in report tables, e.g. "β_C (Cost)".
std::string_view param_label(ParamId p);
ParamId parse_param(std::string_view name);
std::optional<ParamId> find_param(std::string_view name);

/// Parameters estimated on the log scale to keep them positive.
constexpr bool is_log_transformed(ParamId p) {
  return p == ParamId::SigmaTime || p == ParamId::SigmaCost || p == ParamId::ScaleSp;
}

constexpr bool is_random_hyperparameter(ParamId p) {
  return p == ParamId::MuTime || p == ParamId::SigmaTime || p == ParamId::DeltaMig ||
         p == ParamId::MuCost || p == ParamId::SigmaCost;
}

/// Named coefficient values with presence and frozen flags.
class ParameterVector {
 public:
  ParameterVector() = default;

  void set(ParamId p, double value);
  void erase(ParamId p);
  bool has(ParamId p) const { return present_.test(index_of(p)); }
  /// Value of a present parameter; absent parameters read as 0.
  double operator[](ParamId p) const { return values_[index_of(p)]; }
  double value_or(ParamId p, double fallback) const { return has(p) ? (*this)[p] : fallback; }

  void freeze(ParamId p, bool frozen = true);
  bool frozen(ParamId p) const { return frozen_.test(index_of(p)); }

  const ParamMask& present() const { return present_; }
  const ParamMask& frozen_mask() const { return frozen_; }
  std::vector<ParamId> ids() const;
  const std::array<double, kNumParams>& values() const { return values_; }

  /// Throws SpecError if sigma < 0 or mu_SP <= 0.
  void validate() const;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  std::array<double, kNumParams> values_{};
  ParamMask present_;
  ParamMask frozen_;
};

}  // namespace tripchoice
