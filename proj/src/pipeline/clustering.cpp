#include "tripchoice/pipeline/clustering.hpp"

#include <cmath>
#include <cstdio>

#include "tripchoice/csv.hpp"
#include "tripchoice/errors.hpp"

namespace tripchoice::pipeline {

long round3(double degrees) {
  // The nudge keeps decimal halves such as 43.6535 from rounding down
  // because of their binary representation.
  const double scaled = degrees * 1000.0;
  return static_cast<long>(std::round(scaled + std::copysign(1e-7, scaled)));
}

Period period_of(int m) {
  if (m < 6 * 60 + 30) return Period::Night;
  if (m < 9 * 60 + 30) return Period::AmPeak;
  if (m < 15 * 60 + 30) return Period::Midday;
  if (m < 18 * 60 + 30) return Period::PmPeak;
  return Period::Evening;
}

Period period_of(const Timestamp& t) { return period_of(t.local_minute_of_day()); }

ClusterKey cluster_key(const TripEndpoints& t) {
  return {round3(t.origin_lat), round3(t.origin_lon), round3(t.dest_lat), round3(t.dest_lon),
          period_of(t.departure)};
}

std::vector<ClusterKey> cluster_trips(const std::vector<TripEndpoints>& trips) {
  std::vector<ClusterKey> keys;
  keys.reserve(trips.size());
  for (const auto& t : trips) keys.push_back(cluster_key(t));
  return keys;
}

std::string to_string(const ClusterKey& k) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%.3f,", k.origin_lat(), k.origin_lon(), k.dest_lat(),
                k.dest_lon());
  return buf + std::string(tripchoice::to_string(k.period));
}

ClusterKey parse_cluster_key(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 5) throw DataError("malformed cluster key '" + std::string(text) + "'");
  return {round3(parse_double(parts[0], "cluster key")), round3(parse_double(parts[1], "cluster key")),
          round3(parse_double(parts[2], "cluster key")), round3(parse_double(parts[3], "cluster key")),
          parse_period(parts[4])};
}

}  // namespace tripchoice::pipeline
