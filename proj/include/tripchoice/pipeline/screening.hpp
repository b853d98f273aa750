#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tripchoice/pipeline/events.hpp"

namespace tripchoice::pipeline {

struct ScreeningConfig {
  double max_speed_mps = 69.4;       ///< 250 km/h
  std::size_t zero_variance_run = 3; ///< identical fixes in a row
  std::size_t repeat_threshold = 5;  ///< identical track legs before rejection
  double max_removed_share = 0.5;    ///< reject the whole record above this
};

struct PersonScreening {
  std::string person_id;
  std::size_t events_in = 0;
  std::size_t events_out = 0;
  std::size_t speed_hits = 0;
  std::size_t zero_variance_hits = 0;
  std::size_t repetitive_legs = 0;
  bool rejected = false;
  std::string reason;
};

struct ScreeningResult {
  std::vector<GpsEvent> clean;
  std::vector<PersonScreening> report;
};

/// Drops fixes reached at impossible speed and runs of identical fixes, and
/// rejects whole records with repetitive routing, too many removals or
/// nothing left. Input events must be time-ordered per person.
ScreeningResult screen_trajectories(const std::vector<GpsEvent>& events,
                                    const ScreeningConfig& config = {});

Table screening_table(const std::vector<PersonScreening>& report);

}  // namespace tripchoice::pipeline
