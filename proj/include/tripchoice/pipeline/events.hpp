#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tripchoice/csv.hpp"

namespace tripchoice::pipeline {

/// Instant with the UTC offset it was written in. Period bins and anchor
/// scoring use the local clock.
struct Timestamp {
  std::chrono::sys_seconds utc{};
  int offset_minutes = 0;

  std::chrono::sys_seconds local() const { return utc + std::chrono::minutes(offset_minutes); }
  std::chrono::year_month_day local_date() const;
  /// Minutes since local midnight.
  int local_minute_of_day() const;
  /// 0 = Sunday ... 6 = Saturday (local).
  unsigned local_weekday() const;

  friend auto operator<=>(const Timestamp& a, const Timestamp& b) { return a.utc <=> b.utc; }
  friend bool operator==(const Timestamp& a, const Timestamp& b) { return a.utc == b.utc; }
};

/// Parses "YYYY-MM-DDTHH:MM[:SS]" with an optional "Z" or "+HH:MM"/"-HH:MM"
/// suffix (a space may replace the "T"). Without a suffix the time is taken
/// as local with offset 0. Throws DataError.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& t);

double seconds_between(const Timestamp& a, const Timestamp& b);

enum class EventKind : std::uint8_t { Waypoint, Stay, Track };

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

struct GpsEvent {
  std::string person_id;
  Timestamp time;
  double lat = 0.0;
  double lon = 0.0;
  EventKind kind = EventKind::Waypoint;
  std::string mode_label;  ///< tracks only: car, bus, subway, train, walk, bicycle
  std::string trip_id;     ///< diary trip the fix belongs to, may be empty
};

/// Great-circle distance in metres.
double haversine_m(double lat1, double lon1, double lat2, double lon2);
double distance_m(const GpsEvent& a, const GpsEvent& b);
/// Implied speed in m/s; infinite for a zero time step with movement.
double speed_mps(const GpsEvent& a, const GpsEvent& b);

/// Reads the events file (person_id, timestamp, lat, lon, kind, mode_label and
/// optional trip_id). Validates coordinate ranges and strictly increasing
/// timestamps per person; errors carry the row number.
std::vector<GpsEvent> events_from_table(const Table& table);
std::vector<GpsEvent> read_events(const std::filesystem::path& path);
Table events_table(const std::vector<GpsEvent>& events);

/// Events grouped by person in order of first appearance.
std::vector<std::vector<GpsEvent>> group_by_person(const std::vector<GpsEvent>& events);

/// A maximal run of consecutive events of one kind (and, for tracks, one mode
/// label). Waypoints are treated as stationary fixes.
struct Episode {
  EventKind kind = EventKind::Stay;
  std::string mode_label;
  std::size_t first = 0;  ///< index of the first event
  std::size_t last = 0;   ///< index of the last event, inclusive

  bool is_track(std::string_view mode) const { return kind == EventKind::Track && mode_label == mode; }
};

std::vector<Episode> episodes(const std::vector<GpsEvent>& events);

}  // namespace tripchoice::pipeline
