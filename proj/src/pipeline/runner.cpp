#include "tripchoice/pipeline/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "tripchoice/detail/parallel.hpp"
#include "tripchoice/errors.hpp"

namespace tripchoice::pipeline {

namespace {

double minutes(const std::vector<GpsEvent>& ev, std::size_t a, std::size_t b) {
  return seconds_between(ev[a].time, ev[b].time) / 60.0;
}

double path_km(const std::vector<GpsEvent>& ev, std::size_t a, std::size_t b) {
  double m = 0.0;
  for (std::size_t i = a; i < b; ++i) m += distance_m(ev[i], ev[i + 1]);
  return m / 1000.0;
}

struct Journey {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t track_last = 0;
  TransitDecomposition d;
  std::map<std::string, double> in_vehicle_by_mode;
  std::string trip_id;
};

bool is_transit_label(const std::string& label) {
  return label == "bus" || label == "subway" || label == "train";
}

std::string fmt_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (const auto& f : flags) s += (s.empty() ? "" : ";") + f;
  return s;
}

std::string num(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

PipelineTrip make_trip(const std::vector<GpsEvent>& ev, std::size_t a, std::size_t b) {
  PipelineTrip t;
  t.person_id = ev[a].person_id;
  t.departure = ev[a].time;
  t.arrival = ev[b].time;
  t.origin_lat = ev[a].lat;
  t.origin_lon = ev[a].lon;
  t.dest_lat = ev[b].lat;
  t.dest_lon = ev[b].lon;
  t.distance_km = path_km(ev, a, b);
  t.duration_min = minutes(ev, a, b);
  return t;
}

}  // namespace

std::vector<PipelineTrip> segment_trips(const std::vector<GpsEvent>& ev, const PipelineConfig& cfg) {
  std::vector<PipelineTrip> trips;
  if (ev.empty()) return trips;
  const std::vector<Episode> eps = episodes(ev);

  // Transit journeys, chained through transfers.
  std::vector<Journey> journeys;
  for (const Episode& e : eps) {
    if (e.kind != EventKind::Track || !is_transit_label(e.mode_label)) continue;
    if (!journeys.empty() && e.first <= journeys.back().last) continue;
    Journey j;
    j.d = decompose_transit_journey(ev, e.first, e.last, cfg.decomposition);
    j.first = j.d.first_event;
    j.last = j.d.last_event;
    j.track_last = e.last;
    j.in_vehicle_by_mode[e.mode_label] = j.d.in_vehicle;
    j.trip_id = ev[e.first].trip_id;
    if (!journeys.empty() && j.first <= journeys.back().last + 1 && !journeys.back().d.teleport_detected) {
      Journey& p = journeys.back();
      const double transfer = minutes(ev, p.track_last, e.first);
      p.d.access_walk += std::max(0.0, transfer - j.d.platform_wait);
      p.d.platform_wait += j.d.platform_wait;
      p.d.in_vehicle += j.d.in_vehicle;
      p.d.egress_walk = j.d.egress_walk;
      p.d.teleport_detected = j.d.teleport_detected;
      for (auto& id : j.d.absorbed_walk_ids) {
        if (std::find(p.d.absorbed_walk_ids.begin(), p.d.absorbed_walk_ids.end(), id) == p.d.absorbed_walk_ids.end()) {
          p.d.absorbed_walk_ids.push_back(id);
        }
      }
      p.d.last_event = j.last;
      p.last = j.last;
      p.track_last = e.last;
      p.in_vehicle_by_mode[e.mode_label] += j.d.in_vehicle;
      continue;
    }
    journeys.push_back(std::move(j));
  }
  std::vector<int> covered(ev.size(), -1);
  for (std::size_t k = 0; k < journeys.size(); ++k) {
    for (std::size_t i = journeys[k].first; i <= journeys[k].last; ++i) covered[i] = static_cast<int>(k);
  }

  // Everything else: runs of track episodes between activity stays.
  auto activity = [&](const Episode& e) {
    return e.kind == EventKind::Stay && minutes(ev, e.first, e.last) >= cfg.trip_break_min;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pieces;
  std::size_t start = ev.size();
  std::size_t end = 0;
  auto flush = [&] {
    if (start < ev.size()) pieces.emplace_back(start, end);
    start = ev.size();
  };
  for (const Episode& e : eps) {
    if (activity(e)) {
      flush();
      continue;
    }
    for (std::size_t i = e.first; i <= e.last; ++i) {
      if (covered[i] >= 0) {
        flush();
        continue;
      }
      if (ev[i].kind != EventKind::Track) {
        // Short stops belong to a trip only between two movements.
        if (start < ev.size()) end = i;
        continue;
      }
      if (start == ev.size()) start = i;
      end = i;
    }
  }
  flush();

  struct Item {
    std::size_t first;
    PipelineTrip trip;
  };
  std::vector<Item> items;
  for (auto [a, b] : pieces) {
    while (b > a && ev[b].kind != EventKind::Track) --b;
    std::map<std::string, double> by_mode;
    for (std::size_t i = a; i < b; ++i) {
      if (ev[i].kind == EventKind::Track && ev[i + 1].kind == EventKind::Track &&
          ev[i].mode_label == ev[i + 1].mode_label) {
        by_mode[ev[i].mode_label] += distance_m(ev[i], ev[i + 1]);
      }
    }
    PipelineTrip t = make_trip(ev, a, b);
    std::string main = ev[a].mode_label;
    double best = -1.0;
    for (const auto& [m, d] : by_mode) {
      if (d > best) best = d, main = m;
    }
    try {
      t.mode = parse_mode(main);
    } catch (const DataError&) {
      t.mode_known = false;
      t.flags.push_back("unknown mode label '" + main + "'");
    }
    for (std::size_t i = a; i <= b; ++i) {
      if (ev[i].kind == EventKind::Track && ev[i].mode_label == main) {
        t.trip_id = ev[i].trip_id;
        break;
      }
    }
    items.push_back({a, std::move(t)});
  }
  for (const Journey& j : journeys) {
    PipelineTrip t = make_trip(ev, j.first, j.last);
    std::string main;
    double best = -1.0;
    for (const auto& [m, d] : j.in_vehicle_by_mode) {
      if (d > best) best = d, main = m;
    }
    t.mode = parse_mode(main);
    t.trip_id = j.trip_id;
    t.transit = j.d;
    if (j.d.teleport_detected) t.flags.push_back("teleport");
    items.push_back({j.first, std::move(t)});
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.first < y.first; });
  for (auto& it : items) trips.push_back(std::move(it.trip));
  return trips;
}

namespace {

struct PersonWork {
  PersonScreening screening;
  AnchorResult anchors;
  std::vector<PipelineTrip> trips;
  std::vector<ChoiceObservation> observations;
  bool car_observed = false;
  std::vector<std::string> warnings;
};

bool near(const std::optional<Anchor>& a, double lat, double lon, double radius) {
  return a && haversine_m(a->lat, a->lon, lat, lon) <= radius;
}

void process_person(const std::vector<GpsEvent>& ev, const PersonProfile* profile, RoutingProvider& routing,
                    WeatherProvider& weather, const FareTable& fares, const WmoTable& wmo,
                    const PipelineConfig& cfg, PersonWork& out) {
  const std::string& pid = ev.front().person_id;
  out.anchors = infer_anchors(stay_episodes(ev, cfg.trip_break_min), cfg.anchors);
  out.trips = segment_trips(ev, cfg);

  std::map<std::array<long, 4>, int> od_count;
  for (auto& t : out.trips) {
    t.key = cluster_key({t.origin_lat, t.origin_lon, t.dest_lat, t.dest_lon, t.departure});
    ++od_count[{t.key.origin_lat3, t.key.origin_lon3, t.key.dest_lat3, t.key.dest_lon3}];
  }
  for (const auto& t : out.trips) out.car_observed |= t.mode_known && t.mode == Mode::Car;

  PersonProfile person;
  if (profile) {
    person = *profile;
    person.car_observed = out.car_observed;
  }
  GateHistory history;
  std::size_t counter = 0;
  for (auto& t : out.trips) {
    char id[32];
    std::snprintf(id, sizeof id, "-T%03zu", ++counter);
    t.obs_id = pid + id;
    const double r = cfg.anchor_match_m;
    const bool o_home = near(out.anchors.home, t.origin_lat, t.origin_lon, r);
    const bool d_home = near(out.anchors.home, t.dest_lat, t.dest_lon, r);
    const bool o_work = near(out.anchors.work, t.origin_lat, t.origin_lon, r);
    const bool d_work = near(out.anchors.work, t.dest_lat, t.dest_lon, r);
    t.purpose_work_study = o_work || d_work;
    if ((o_home && d_work) || (o_work && d_home)) {
      t.purpose = TripPurpose::Commute;
    } else if (od_count[{t.key.origin_lat3, t.key.origin_lon3, t.key.dest_lat3, t.key.dest_lon3}] >=
               cfg.regular_min_trips) {
      t.purpose = TripPurpose::Regular;
    }
    if (!t.mode_known) continue;
    if (t.distance_km < cfg.min_trip_km) {
      t.flags.push_back("too short");
      continue;
    }
    if (t.mode == Mode::EMobility) {
      t.flags.push_back("e-mobility is not an RP mode");
      continue;
    }
    const GateDecision gate = sp_gate({t.mode, t.distance_km, t.purpose, t.key, t.departure}, history,
                                      cfg.gate_window_days);
    t.gate = gate.category;
    t.sp_trigger = gate.eligible;
    t.context = enrich_context(t.departure.local_date(), t.origin_lat, t.origin_lon, weather, wmo);
    if (t.context.flagged) t.flags.push_back(t.context.message);
    if (!profile) continue;

    AlternativeSet alts = generate_alternatives(t.key, routing, fares);
    for (const auto& w : alts.warnings) out.warnings.push_back(t.obs_id + ": " + w);

    RoutedAlternative observed;
    observed.routed = true;
    observed.distance_km = t.distance_km;
    if (t.transit) {
      observed.in_vehicle_min = t.transit->in_vehicle;
      observed.walk_min = t.transit->access_walk + t.transit->egress_walk;
      observed.wait_min = t.transit->platform_wait;
      const RoutedAlternative& r = alts.at(t.mode);
      observed.cost = r.routed ? r.cost : estimate_cost(t.mode, t.distance_km, {}, std::nullopt, fares);
    } else {
      observed.in_vehicle_min = t.duration_min;
      observed.cost = estimate_cost(t.mode, t.distance_km, {}, std::nullopt, fares);
    }
    alts.at(t.mode) = observed;

    ModeAvailability avail{};
    try {
      avail = build_availability(person, alts.routed());
    } catch (const DataError& e) {
      t.flags.push_back(e.what());
      continue;
    }
    if (!avail[index_of(t.mode)]) {
      t.flags.push_back("chosen mode unavailable");
      continue;
    }
    ChoiceObservation obs;
    obs.obs_id = t.obs_id;
    obs.person_id = pid;
    obs.source = Source::RP;
    obs.chosen = t.mode;
    for (Mode m : kRpModes) {
      if (!avail[index_of(m)]) continue;
      RoutedAlternative a = alts.at(m);
      if (m == Mode::Bicycle && !a.routed) {
        t.flags.push_back("no bicycle route");
        continue;
      }
      obs.at(m) = to_attributes(a, m);
      obs.at(m).available = true;
    }
    if (obs.num_available() < 2) {
      t.flags.push_back("fewer than two available modes");
      continue;
    }
    obs.purpose_work_study = t.purpose_work_study;
    obs.snow = t.context.snow;
    obs.weather = t.context.weather;
    obs.season = t.context.season;
    obs.period = t.key.period;
    obs.sp_trigger = t.sp_trigger;
    validate_observation(obs);
    t.kept = true;
    out.observations.push_back(std::move(obs));
  }
}

}  // namespace

PipelineOutput run_pipeline(const std::vector<GpsEvent>& events, const std::vector<PersonProfile>& survey,
                            RoutingProvider& routing, WeatherProvider& weather, const FareTable& fares,
                            const WmoTable& wmo, const PipelineConfig& cfg) {
  PipelineOutput out;
  ScreeningResult screened = screen_trajectories(events, cfg.screening);
  out.screening = screened.report;
  const auto people = group_by_person(screened.clean);
  std::unordered_map<std::string, const PersonProfile*> profiles;
  for (const auto& p : survey) profiles[p.person_id] = &p;

  std::vector<PersonWork> work(people.size());
  detail::parallel_for(people.size(), cfg.workers, [&](std::size_t i) {
    const auto it = profiles.find(people[i].front().person_id);
    process_person(people[i], it == profiles.end() ? nullptr : it->second, routing, weather, fares, wmo, cfg,
                   work[i]);
  });

  std::vector<PersonProfile> persons;
  std::vector<ChoiceObservation> observations;
  for (std::size_t i = 0; i < people.size(); ++i) {
    PersonWork& w = work[i];
    const std::string& pid = people[i].front().person_id;
    out.anchors.push_back({pid, w.anchors});
    for (auto& msg : w.warnings) out.warnings.push_back(std::move(msg));
    const auto it = profiles.find(pid);
    if (it == profiles.end()) {
      out.warnings.push_back("person '" + pid + "' has no survey record; skipped");
    } else if (!w.observations.empty()) {
      PersonProfile p = *it->second;
      p.car_observed = w.car_observed;
      persons.push_back(std::move(p));
      for (auto& o : w.observations) observations.push_back(std::move(o));
    }
    for (auto& t : w.trips) out.trips.push_back(std::move(t));
  }
  std::vector<double> raw;
  for (const auto& p : persons) raw.push_back(p.integration_raw);
  if (!raw.empty()) {
    const auto c = center_integration(raw);
    for (std::size_t i = 0; i < persons.size(); ++i) persons[i].integration_centred = c[i];
  }
  out.data = Dataset(std::move(persons), std::move(observations));
  return out;
}

Table trips_table(const std::vector<PipelineTrip>& trips) {
  Table t({"person_id", "obs_id", "trip_id", "mode", "departure", "arrival", "distance_km", "duration_min",
           "cluster", "purpose", "purpose_ws", "access_walk", "platform_wait", "in_vehicle", "egress_walk",
           "absorbed_walks", "sp_category", "sp_trigger", "weather", "season", "kept", "flags"},
          {});
  for (const auto& x : trips) {
    std::string absorbed;
    if (x.transit) {
      for (const auto& id : x.transit->absorbed_walk_ids) absorbed += (absorbed.empty() ? "" : ";") + id;
    }
    auto comp = [&](double TransitDecomposition::*f) { return x.transit ? num((*x.transit).*f, 2) : ""; };
    t.add_row({x.person_id, x.obs_id, x.trip_id, std::string(to_string(x.mode)), format_timestamp(x.departure),
               format_timestamp(x.arrival), num(x.distance_km), num(x.duration_min, 2), to_string(x.key),
               std::string(to_string(x.purpose)), x.purpose_work_study ? "1" : "0",
               comp(&TransitDecomposition::access_walk), comp(&TransitDecomposition::platform_wait),
               comp(&TransitDecomposition::in_vehicle), comp(&TransitDecomposition::egress_walk), absorbed,
               std::string(to_string(x.gate)), x.sp_trigger ? "1" : "0", std::string(to_string(x.context.weather)),
               std::string(to_string(x.context.season)), x.kept ? "1" : "0", fmt_flags(x.flags)});
  }
  return t;
}

Table anchors_table(const std::vector<PersonAnchors>& anchors) {
  Table t({"person_id", "home_lat", "home_lon", "home_score", "work_lat", "work_lon", "work_score", "flags"}, {});
  for (const auto& a : anchors) {
    const auto& h = a.anchors.home;
    const auto& w = a.anchors.work;
    t.add_row({a.person_id, h ? num(h->lat, 5) : "", h ? num(h->lon, 5) : "", h ? num(h->score, 4) : "",
               w ? num(w->lat, 5) : "", w ? num(w->lon, 5) : "", w ? num(w->score, 4) : "",
               fmt_flags(a.anchors.flags)});
  }
  return t;
}

void write_pipeline_outputs(const std::filesystem::path& dir, const PipelineOutput& out) {
  std::filesystem::create_directories(dir);
  write_table(dir / "observations.csv", observations_table(out.data));
  write_table(dir / "persons.csv", persons_table(out.data));
  write_table(dir / "trips.csv", trips_table(out.trips));
  write_table(dir / "screening.csv", screening_table(out.screening));
  write_table(dir / "anchors.csv", anchors_table(out.anchors));
}

}  // namespace tripchoice::pipeline
