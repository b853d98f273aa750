#pragma once

#include <map>
#include <string_view>

#include "tripchoice/pipeline/clustering.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice::pipeline {

enum class TripPurpose : std::uint8_t { Commute, Regular, Other };

std::string_view to_string(TripPurpose p);
TripPurpose parse_purpose(std::string_view s);

enum class SpCategory : std::uint8_t { CarLong, CarShort, PtLong, PtShort, Ineligible };

/// "car > 5 km", "car <= 5 km", "PT > 1.5 km", "PT <= 1.5 km", "ineligible"
std::string_view to_string(SpCategory c);

struct GateTrip {
  Mode mode = Mode::Car;
  double distance_km = 0.0;
  TripPurpose purpose = TripPurpose::Commute;
  ClusterKey key;
  Timestamp departure;
};

/// Last time each cluster was gated.
class GateHistory {
 public:
  bool gated_within(const ClusterKey& key, const Timestamp& t, double days) const;
  void record(const ClusterKey& key, const Timestamp& t) { last_[key] = t; }

 private:
  std::map<ClusterKey, Timestamp> last_;
};

struct GateDecision {
  bool eligible = false;
  SpCategory category = SpCategory::Ineligible;
};

/// Eligible trips are car or transit trips on a commute or regular purpose
/// whose cluster was not gated in the preceding `window_days`. An eligible
/// trip is recorded in `history`.
GateDecision sp_gate(const GateTrip& trip, GateHistory& history, double window_days = 7.0);

}  // namespace tripchoice::pipeline
