#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tripchoice/pipeline/events.hpp"

namespace tripchoice::pipeline {

struct DecompositionConfig {
  double max_gap_m = 250.0;      ///< spatial continuity between linked episodes
  double max_gap_min = 25.0;     ///< temporal plausibility between linked episodes
  double teleport_mps = 69.4;
};

struct TransitDecomposition {
  double access_walk = 0.0;  ///< minutes
  double platform_wait = 0.0;
  double in_vehicle = 0.0;
  double egress_walk = 0.0;
  bool teleport_detected = false;
  std::vector<std::string> absorbed_walk_ids;
  std::size_t first_event = 0;  ///< earliest linked event
  std::size_t last_event = 0;   ///< latest linked event

  double total() const { return access_walk + platform_wait + in_vehicle + egress_walk; }
};

/// Decomposes the transit leg spanning events[track_first..track_last].
/// The backward scan links stationary episodes of at most max_gap_min (platform wait) and then walk
/// legs (access) to the boarding fix; the forward scan links walk legs
/// (egress) to the alighting fix. Each link requires the gap between the two
/// episodes to be within max_gap_m and max_gap_min; the gap time is counted as
/// wait on the access side and as egress walk on the egress side. A fix pair
/// moving faster than teleport_mps inside or between linked episodes ends the
/// scan at that point and sets teleport_detected. Linked walk legs report
/// their trip_id (or "event:<index>") in absorbed_walk_ids.
TransitDecomposition decompose_transit_journey(const std::vector<GpsEvent>& events,
                                               std::size_t track_first, std::size_t track_last,
                                               const DecompositionConfig& config = {});

}  // namespace tripchoice::pipeline
