#include "tripchoice/pipeline/screening.hpp"

#include <cmath>
#include <map>

namespace tripchoice::pipeline {

namespace {

// Shape of a track leg: rounded fixes and offsets from the leg start.
std::string leg_signature(const std::vector<GpsEvent>& ev, const Episode& leg) {
  std::string sig = leg.mode_label;
  char buf[64];
  for (std::size_t i = leg.first; i <= leg.last; ++i) {
    std::snprintf(buf, sizeof buf, "|%.5f,%.5f,%.0f", ev[i].lat, ev[i].lon,
                  seconds_between(ev[leg.first].time, ev[i].time));
    sig += buf;
  }
  return sig;
}

PersonScreening screen_person(const std::vector<GpsEvent>& events, const ScreeningConfig& cfg,
                              std::vector<GpsEvent>& kept) {
  PersonScreening rep;
  rep.person_id = events.front().person_id;
  rep.events_in = events.size();
  std::vector<bool> drop(events.size(), false);

  // Runs of identical coordinates.
  for (std::size_t i = 0; i < events.size();) {
    std::size_t j = i + 1;
    while (j < events.size() && events[j].lat == events[i].lat && events[j].lon == events[i].lon) ++j;
    if (j - i >= cfg.zero_variance_run) {
      ++rep.zero_variance_hits;
      for (std::size_t k = i; k < j; ++k) drop[k] = true;
    }
    i = j;
  }

  // Impossible speeds measured from the last retained fix.
  std::size_t anchor = events.size();
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (drop[i]) continue;
    if (anchor < events.size() && speed_mps(events[anchor], events[i]) > cfg.max_speed_mps) {
      ++rep.speed_hits;
      drop[i] = true;
      continue;
    }
    anchor = i;
  }

  std::map<std::string, std::size_t> shapes;
  for (const Episode& e : episodes(events)) {
    if (e.kind != EventKind::Track || e.last == e.first) continue;
    const std::size_t n = ++shapes[leg_signature(events, e)];
    if (n == cfg.repeat_threshold) ++rep.repetitive_legs;
  }

  std::vector<GpsEvent> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!drop[i]) out.push_back(events[i]);
  }
  rep.events_out = out.size();
  const double removed = 1.0 - static_cast<double>(out.size()) / static_cast<double>(events.size());
  if (rep.repetitive_legs > 0) {
    rep.rejected = true;
    rep.reason = "repetitive routing";
  } else if (out.empty()) {
    rep.rejected = true;
    rep.reason = "no valid events";
  } else if (removed > cfg.max_removed_share) {
    rep.rejected = true;
    rep.reason = "too many invalid events";
  }
  if (!rep.rejected) kept.insert(kept.end(), out.begin(), out.end());
  else rep.events_out = 0;
  return rep;
}

}  // namespace

ScreeningResult screen_trajectories(const std::vector<GpsEvent>& events, const ScreeningConfig& config) {
  ScreeningResult result;
  for (const auto& person : group_by_person(events)) {
    result.report.push_back(screen_person(person, config, result.clean));
  }
  return result;
}

Table screening_table(const std::vector<PersonScreening>& report) {
  Table t({"person_id", "events_in", "events_out", "speed_hits", "zero_variance_hits",
           "repetitive_legs", "rejected", "reason"},
          {});
  for (const auto& r : report) {
    t.add_row({r.person_id, std::to_string(r.events_in), std::to_string(r.events_out),
               std::to_string(r.speed_hits), std::to_string(r.zero_variance_hits),
               std::to_string(r.repetitive_legs), r.rejected ? "1" : "0", r.reason});
  }
  return t;
}

}  // namespace tripchoice::pipeline
