#include "tripchoice/pipeline/sp_gate.hpp"

#include <string>

#include "tripchoice/errors.hpp"

namespace tripchoice::pipeline {

std::string_view to_string(TripPurpose p) {
  switch (p) {
    case TripPurpose::Commute: return "commute";
    case TripPurpose::Regular: return "regular";
    case TripPurpose::Other: return "other";
  }
  return "other";
}

TripPurpose parse_purpose(std::string_view s) {
  if (s == "commute") return TripPurpose::Commute;
  if (s == "regular") return TripPurpose::Regular;
  if (s == "other") return TripPurpose::Other;
  throw DataError("unknown trip purpose '" + std::string(s) + "'");
}

std::string_view to_string(SpCategory c) {
  switch (c) {
    case SpCategory::CarLong: return "car > 5 km";
    case SpCategory::CarShort: return "car <= 5 km";
    case SpCategory::PtLong: return "PT > 1.5 km";
    case SpCategory::PtShort: return "PT <= 1.5 km";
    case SpCategory::Ineligible: return "ineligible";
  }
  return "ineligible";
}

bool GateHistory::gated_within(const ClusterKey& key, const Timestamp& t, double days) const {
  const auto it = last_.find(key);
  if (it == last_.end()) return false;
  const double elapsed = seconds_between(it->second, t);
  return elapsed >= 0.0 && elapsed < days * 86400.0;
}

GateDecision sp_gate(const GateTrip& trip, GateHistory& history, double window_days) {
  GateDecision d;
  const bool car = trip.mode == Mode::Car;
  const bool pt = is_transit(trip.mode);
  if (!car && !pt) return d;
  if (trip.purpose == TripPurpose::Other) return d;
  if (history.gated_within(trip.key, trip.departure, window_days)) return d;
  d.eligible = true;
  if (car) d.category = trip.distance_km > 5.0 ? SpCategory::CarLong : SpCategory::CarShort;
  else d.category = trip.distance_km > 1.5 ? SpCategory::PtLong : SpCategory::PtShort;
  history.record(trip.key, trip.departure);
  return d;
}

}  // namespace tripchoice::pipeline
