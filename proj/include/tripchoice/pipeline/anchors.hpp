#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tripchoice/pipeline/events.hpp"

namespace tripchoice::pipeline {

/// A stationary episode used for anchor inference.
struct StayEpisode {
  double lat = 0.0;
  double lon = 0.0;
  Timestamp start;
  Timestamp end;
};

struct AnchorConfig {
  double radius_m = 150.0;
  std::size_t min_stays = 3;
  int min_days = 7;
  // home score weights: night hours, distinct nights, first/last stop of day
  double home_night_hours = 0.5;
  double home_nights = 0.3;
  double home_first_last = 0.2;
  // work score weights: weekday daytime hours, distinct workdays, arrival regularity
  double work_day_hours = 0.5;
  double work_days = 0.3;
  double work_regularity = 0.2;
  int min_workdays = 3;  ///< below this no weekday regularity
};

struct Anchor {
  double lat = 0.0;
  double lon = 0.0;
  double score = 0.0;
  std::size_t stays = 0;
};

struct AnchorResult {
  std::optional<Anchor> home;
  std::optional<Anchor> work;
  std::vector<std::string> flags;  ///< e.g. "insufficient days", "no work regularity"
};

/// Density clusters of stays (every stay within radius of a core stay with at
/// least min_stays neighbours, itself included). Returns a cluster label per
/// stay, -1 for noise.
std::vector<int> cluster_stays(const std::vector<StayEpisode>& stays, double radius_m,
                               std::size_t min_stays);

/// Home is the cluster with the highest night score; work the non-home
/// cluster with the highest weekday daytime score. Night is 22:00-07:00 and
/// weekday daytime 09:00-17:00 Monday to Friday, local time.
AnchorResult infer_anchors(const std::vector<StayEpisode>& stays, const AnchorConfig& config = {});

/// Stationary episodes of a person's event stream lasting at least `min_minutes`.
std::vector<StayEpisode> stay_episodes(const std::vector<GpsEvent>& events, double min_minutes = 10.0);

}  // namespace tripchoice::pipeline
