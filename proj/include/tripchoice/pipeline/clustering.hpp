#pragma once

#include <compare>
#include <string>
#include <vector>

#include "tripchoice/pipeline/events.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice::pipeline {

/// Coordinates are kept as integer thousandths of a degree so that keys
/// compare exactly.
struct ClusterKey {
  long origin_lat3 = 0;
  long origin_lon3 = 0;
  long dest_lat3 = 0;
  long dest_lon3 = 0;
  Period period = Period::Midday;

  double origin_lat() const { return origin_lat3 / 1000.0; }
  double origin_lon() const { return origin_lon3 / 1000.0; }
  double dest_lat() const { return dest_lat3 / 1000.0; }
  double dest_lon() const { return dest_lon3 / 1000.0; }

  friend auto operator<=>(const ClusterKey&, const ClusterKey&) = default;
};

/// Round half away from zero to 3 decimals, in thousandths.
long round3(double degrees);

/// night 00:00-06:29, am_peak 06:30-09:29, midday 09:30-15:29,
/// pm_peak 15:30-18:29, evening 18:30-23:59 (local clock).
Period period_of(int minute_of_day);
Period period_of(const Timestamp& t);

struct TripEndpoints {
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double dest_lat = 0.0;
  double dest_lon = 0.0;
  Timestamp departure;
};

ClusterKey cluster_key(const TripEndpoints& trip);
std::vector<ClusterKey> cluster_trips(const std::vector<TripEndpoints>& trips);

/// "43.653,-79.383,43.700,-79.400,am_peak"
std::string to_string(const ClusterKey& key);
ClusterKey parse_cluster_key(std::string_view text);

}  // namespace tripchoice::pipeline
