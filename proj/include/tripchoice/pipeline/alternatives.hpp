#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/pipeline/providers.hpp"

namespace tripchoice::pipeline {

inline constexpr double kCarCostPerKm = 0.75;
inline constexpr double kDefaultFare = 3.50;

/// Single-ride fare per transit agency.
struct FareTable {
  std::map<std::string, double> fares;
  double default_fare = kDefaultFare;

  std::optional<double> lookup(const std::string& agency) const;
};

/// {"default": 3.5, "agencies": {"TTC": 3.25, ...}}
FareTable load_fare_table(const std::filesystem::path& path);

/// Car 0.75 CAD/km; transit the provider fare, else the highest fare among
/// the listed agencies, else the default fare; walk and bicycle 0.
double estimate_cost(Mode mode, double distance_km, const std::vector<std::string>& agencies,
                     std::optional<double> provider_fare, const FareTable& fares);

struct RoutedAlternative {
  bool routed = false;
  double in_vehicle_min = 0.0;  ///< total travel time for car, walk and bicycle
  double walk_min = 0.0;
  double wait_min = 0.0;
  double distance_km = 0.0;
  double cost = 0.0;
  std::vector<std::string> agencies;
};

struct AlternativeSet {
  std::array<RoutedAlternative, kNumModes> modes{};
  std::vector<std::string> warnings;

  const RoutedAlternative& at(Mode m) const { return modes[index_of(m)]; }
  RoutedAlternative& at(Mode m) { return modes[index_of(m)]; }
  RoutedModes routed() const;
};

/// Queries the provider for every revealed-preference mode. Transit
/// sub-modes keep the route with the lowest total time and take the waiting
/// time as total - in-vehicle - walk, clamped at zero with a warning. A
/// provider failure leaves that mode unrouted.
AlternativeSet generate_alternatives(const ClusterKey& key, RoutingProvider& provider,
                                     const FareTable& fares);

/// Attributes for the choice model. Transit out-of-vehicle time (walk plus
/// wait) goes into walk_access.
AlternativeAttributes to_attributes(const RoutedAlternative& alt, Mode mode);

}  // namespace tripchoice::pipeline
