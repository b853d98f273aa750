#include "tripchoice/pipeline/transit.hpp"

#include "tripchoice/errors.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice::pipeline {

namespace {

std::string walk_id(const std::vector<GpsEvent>& ev, std::size_t first) {
  return ev[first].trip_id.empty() ? "event:" + std::to_string(first) : ev[first].trip_id;
}

double minutes(const std::vector<GpsEvent>& ev, std::size_t a, std::size_t b) {
  return seconds_between(ev[a].time, ev[b].time) / 60.0;
}

}  // namespace

TransitDecomposition decompose_transit_journey(const std::vector<GpsEvent>& ev, std::size_t track_first,
                                               std::size_t track_last, const DecompositionConfig& cfg) {
  if (track_first > track_last || track_last >= ev.size()) throw DataError("transit track outside the event stream");
  for (std::size_t i = track_first; i <= track_last; ++i) {
    if (ev[i].kind != EventKind::Track || !is_transit(parse_mode(ev[i].mode_label))) {
      throw DataError("event " + std::to_string(i) + " is not part of a transit track");
    }
  }
  const std::vector<Episode> eps = episodes(ev);
  std::size_t k = 0;
  while (k < eps.size() && eps[k].last < track_first) ++k;

  TransitDecomposition out;
  out.in_vehicle = minutes(ev, track_first, track_last);
  out.first_event = track_first;
  out.last_event = track_last;

  auto linkable = [&](std::size_t a, std::size_t b) {
    if (distance_m(ev[a], ev[b]) > cfg.max_gap_m) return false;
    if (minutes(ev, a, b) > cfg.max_gap_min) return false;
    return true;
  };

  // Backward: platform wait first, then access walk legs.
  std::size_t link = track_first;
  bool walking = false;
  for (std::size_t j = k; j-- > 0 && !out.teleport_detected;) {
    const Episode& e = eps[j];
    const bool is_walk = e.is_track("walk");
    if (!(is_walk || (e.kind == EventKind::Stay && !walking))) break;
    if (!linkable(e.last, link)) break;
    if (speed_mps(ev[e.last], ev[link]) > cfg.teleport_mps) {
      out.teleport_detected = true;
      break;
    }
    const double gap = minutes(ev, e.last, link);
    std::size_t start = e.first;
    for (std::size_t i = e.last; i > e.first; --i) {
      if (speed_mps(ev[i - 1], ev[i]) > cfg.teleport_mps) {
        start = i;
        out.teleport_detected = true;
        break;
      }
    }
    const double span = minutes(ev, start, e.last);
    // An activity stay, not a platform wait.
    if (!is_walk && span > cfg.max_gap_min) break;
    if (is_walk) {
      (walking ? out.access_walk : out.platform_wait) += gap;
      out.access_walk += span;
      out.absorbed_walk_ids.push_back(walk_id(ev, e.first));
      walking = true;
    } else {
      out.platform_wait += gap + span;
    }
    link = start;
  }
  out.first_event = link;

  // Forward: egress walk legs.
  link = track_last;
  for (std::size_t j = k + 1; j < eps.size() && !out.teleport_detected; ++j) {
    const Episode& e = eps[j];
    if (!e.is_track("walk")) break;
    if (!linkable(link, e.first)) break;
    if (speed_mps(ev[link], ev[e.first]) > cfg.teleport_mps) {
      out.teleport_detected = true;
      break;
    }
    std::size_t end = e.last;
    for (std::size_t i = e.first; i < e.last; ++i) {
      if (speed_mps(ev[i], ev[i + 1]) > cfg.teleport_mps) {
        end = i;
        out.teleport_detected = true;
        break;
      }
    }
    out.egress_walk += minutes(ev, link, e.first) + minutes(ev, e.first, end);
    out.absorbed_walk_ids.push_back(walk_id(ev, e.first));
    link = end;
  }
  out.last_event = link;
  return out;
}

}  // namespace tripchoice::pipeline
