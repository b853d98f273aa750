#include "fixtures.hpp"

#include <cmath>

namespace fixtures {

using namespace tripchoice;
using tripchoice::pipeline::EventKind;
using tripchoice::pipeline::GpsEvent;
using tripchoice::pipeline::Timestamp;

PersonProfile person(const std::string& id, bool migrant) {
  PersonProfile p;
  p.person_id = id;
  p.migrant = migrant;
  p.car_owned = true;
  p.bike_owned = true;
  p.integration_dims = {5.5, 5.5, 5.5, 5.5};
  return p;
}

ChoiceObservation observation(const std::string& obs_id, const std::string& person_id, Mode chosen,
                              std::initializer_list<AltSpec> alts) {
  ChoiceObservation o;
  o.obs_id = obs_id;
  o.person_id = person_id;
  o.chosen = chosen;
  for (const auto& a : alts) {
    auto& x = o.at(a.mode);
    x.available = true;
    x.cost = a.cost;
    x.ivtt = a.ivtt;
    x.walk_access = a.walk;
    x.distance = a.distance;
  }
  return o;
}

std::pair<Table, Table> small_tables() {
  Table obs({"person_id", "obs_id", "source", "alt", "avail", "chosen", "cost_cad", "ivtt_min", "walk_min",
             "dist_km", "purpose_ws", "snow", "weather", "season", "period"},
            {});
  auto rows = [&](const std::string& pid, const std::string& oid, const std::string& chosen) {
    obs.add_row({pid, oid, "RP", "car", "1", chosen == "car" ? "1" : "0", "12.5", "20", "0", "15.2", "1", "0",
                 "sunny", "winter", "am_peak"});
    obs.add_row({pid, oid, "RP", "bus", "1", chosen == "bus" ? "1" : "0", "3.25", "35", "8", "14.0", "1", "0",
                 "sunny", "winter", "am_peak"});
    obs.add_row({pid, oid, "RP", "walk", "0", "0", "0", "0", "0", "0", "1", "0", "sunny", "winter", "am_peak"});
  };
  rows("A", "A1", "car");
  rows("A", "A2", "bus");
  rows("B", "B1", "bus");
  Table per({"person_id", "migrant", "full_time", "student", "child_0_10", "safe", "cyc_friendly", "car_owned",
             "car_observed", "bike_owned", "integ_econ", "integ_soc", "integ_civic", "integ_health"},
            {});
  per.add_row({"A", "0", "1", "0", "0", "1", "1", "1", "1", "0", "8.5", "8.5", "8.5", "8.5"});
  per.add_row({"B", "1", "1", "0", "1", "1", "0", "0", "0", "1", "6.7", "6.7", "6.7", "6.7"});
  return {obs, per};
}

Dataset fifty_obs_fixture() {
  std::vector<PersonProfile> people;
  std::vector<ChoiceObservation> obs;
  const Mode modes[] = {Mode::Car, Mode::Bus, Mode::Subway, Mode::Train, Mode::Walk, Mode::Bicycle};
  for (int n = 0; n < 10; ++n) {
    PersonProfile p = person("P" + std::to_string(n), n % 3 == 0);
    p.full_time = n % 2 == 0;
    p.student = n % 4 == 1;
    p.child_0_10 = n % 5 == 2;
    p.safe = n % 3 != 1;
    p.cycling_friendly = n % 2 == 1;
    p.integration_centred = -2.0 + 0.45 * n;
    people.push_back(p);
    for (int t = 0; t < 5; ++t) {
      const int k = n * 5 + t;
      const double f = 1.0 + 0.1 * ((k * 7) % 11);
      ChoiceObservation o = observation(
          "O" + std::to_string(k), p.person_id, modes[(k * 5 + n) % 6],
          {{Mode::Car, 6.0 * f, 18.0 * f, 0.0, 12.0 * f},
           {Mode::Bus, 3.25, 30.0 + k % 9, 6.0 + k % 4, 11.0 * f},
           {Mode::Subway, 3.25, 24.0 + k % 7, 9.0 - k % 3, 11.5 * f},
           {Mode::Train, 4.5, 16.0 + k % 5, 12.0, 14.0 * f},
           {Mode::Walk, 0.0, 60.0 * f, 0.0, 4.0 * f},
           {Mode::Bicycle, 0.0, 25.0 * f, 0.0, 6.0 * f}});
      if (k % 4 == 3 && o.chosen != Mode::Train) o.at(Mode::Train).available = false;
      o.purpose_work_study = k % 3 == 0;
      o.snow = k % 7 == 0;
      obs.push_back(o);
    }
  }
  return Dataset(people, obs);
}

Dataset toy_panel(bool all_native) {
  std::vector<PersonProfile> people = {person("T1", false), person("T2", !all_native), person("T3", false)};
  std::vector<ChoiceObservation> obs = {
      observation("T1a", "T1", Mode::Car, {{Mode::Car, 8.0, 20.0, 0.0, 10.0}, {Mode::Bus, 3.25, 35.0, 6.0, 10.0}}),
      observation("T1b", "T1", Mode::Bus, {{Mode::Car, 14.0, 25.0, 0.0, 12.0}, {Mode::Bus, 3.25, 28.0, 4.0, 12.0}}),
      observation("T2a", "T2", Mode::Bus, {{Mode::Car, 6.0, 15.0, 0.0, 8.0}, {Mode::Bus, 3.25, 30.0, 8.0, 8.0}}),
      observation("T2b", "T2", Mode::Bus, {{Mode::Car, 10.0, 30.0, 0.0, 15.0}, {Mode::Bus, 3.25, 40.0, 5.0, 15.0}}),
      observation("T3a", "T3", Mode::Car, {{Mode::Car, 5.0, 12.0, 0.0, 6.0}, {Mode::Bus, 3.25, 33.0, 10.0, 6.0}}),
      observation("T3b", "T3", Mode::Car, {{Mode::Car, 9.0, 22.0, 0.0, 11.0}, {Mode::Bus, 3.25, 36.0, 7.0, 11.0}}),
  };
  return Dataset(people, obs);
}

// --- GPS ----------------------------------------------------------------------

Timestamp at(int day, int hour, int minute, int second) {
  using namespace std::chrono;
  Timestamp t;
  t.offset_minutes = -300;
  const sys_days base = sys_days(year{2025} / January / 6) + days(day);
  t.utc = sys_seconds(base) + hours(hour) + minutes(minute) + seconds(second) + minutes(300);
  return t;
}

Timestamp plus(const Timestamp& t, double secs) {
  Timestamp r = t;
  r.utc += std::chrono::seconds(static_cast<long long>(std::llround(secs)));
  return r;
}

double north(double lat, double metres) { return lat + metres / 111195.0; }

double east(double lat, double lon, double metres) {
  return lon + metres / (111195.0 * std::cos(lat * 3.14159265358979323846 / 180.0));
}

Trajectory& Trajectory::fix(EventKind kind, double lat, double lon, Timestamp t, const std::string& mode,
                            const std::string& trip_id) {
  GpsEvent e;
  e.person_id = person_;
  e.time = t;
  e.lat = lat;
  e.lon = lon;
  e.kind = kind;
  e.mode_label = mode;
  e.trip_id = trip_id;
  events_.push_back(e);
  return *this;
}

Trajectory& Trajectory::stay(double lat, double lon, Timestamp from, Timestamp to, double step_s) {
  const double total = tripchoice::pipeline::seconds_between(from, to);
  for (double s = 0.0; s <= total + 1e-9; s += step_s) {
    // Deterministic jitter of up to about 6 m so no two fixes coincide.
    ++jitter_;
    const double dn = static_cast<double>((jitter_ * 37) % 11) - 5.0;
    const double de = static_cast<double>((jitter_ * 53) % 13) - 6.0;
    fix(EventKind::Stay, north(lat, dn), east(lat, lon, de), plus(from, s));
  }
  return *this;
}

Trajectory& Trajectory::track(const std::string& mode, double lat0, double lon0, double lat1, double lon1,
                              Timestamp from, Timestamp to, double step_s, const std::string& trip_id) {
  const double total = tripchoice::pipeline::seconds_between(from, to);
  const int n = std::max(1, static_cast<int>(std::ceil(total / step_s - 1e-9)));
  for (int i = 0; i <= n; ++i) {
    const double s = std::min(total, i * step_s);
    const double f = s / total;
    ++jitter_;
    const double dn = static_cast<double>((jitter_ * 2654435761u) % 6007u) / 1000.0 - 3.0;
    fix(EventKind::Track, north(lat0 + f * (lat1 - lat0), dn), lon0 + f * (lon1 - lon0), plus(from, s), mode,
        trip_id);
    if (s >= total) break;
  }
  return *this;
}

Fig4Fixture fig4_fixture() {
  // Origin stay, 4.3 min access walk, 3.7 min platform wait (gap included),
  // subway ride, 5.6 min egress walk (gap included), destination stay.
  const double lat0 = 43.6500, lon0 = -79.3800;
  const double st_lat = north(lat0, 330.0);  // platform, ~1.28 m/s walk
  const double dst_lat = north(lat0, 5000.0);
  const double end_lat = north(dst_lat, 420.0);
  Trajectory tr("F4");
  const Timestamp t0 = at(1, 8, 0, 0);
  tr.stay(lat0, lon0, at(1, 7, 0), plus(t0, -60.0), 300.0);
  tr.track("walk", lat0, lon0, north(lat0, 320.0), lon0, t0, plus(t0, 258.0), 30.0, "W-access");
  tr.stay(st_lat, lon0, plus(t0, 270.0), plus(t0, 450.0), 60.0);
  const Timestamp board = plus(t0, 258.0 + 222.0);
  Fig4Fixture f;
  f.track_first = tr.events().size();
  tr.track("subway", north(st_lat, 5.0), lon0, dst_lat, lon0, board, plus(board, 14 * 60.0), 60.0, "S1");
  f.track_last = tr.events().size() - 1;
  const Timestamp alight = plus(board, 14 * 60.0);
  tr.track("walk", north(dst_lat, 20.0), lon0, end_lat, lon0, plus(alight, 36.0), plus(alight, 336.0), 30.0,
           "W-egress");
  tr.stay(end_lat, east(end_lat, lon0, 10.0), plus(alight, 400.0), plus(alight, 4000.0), 600.0);
  f.events = tr.events();
  return f;
}

std::vector<GpsEvent> commuter_days(const std::string& pid, const std::string& commute_mode, int days) {
  Trajectory tr(pid);
  const double shop_lat = north(kHomeLat, 600.0);
  for (int d = 0; d < days; ++d) {
    const bool weekday = d % 7 < 5;
    if (!weekday) {
      tr.stay(kHomeLat, kHomeLon, at(d, 0, 0), at(d, 11, 0));
      tr.track("walk", kHomeLat, kHomeLon, shop_lat, kHomeLon, at(d, 11, 2), at(d, 11, 10), 60.0);
      tr.stay(shop_lat, kHomeLon, at(d, 11, 12), at(d, 12, 0));
      tr.track("walk", shop_lat, kHomeLon, kHomeLat, kHomeLon, at(d, 12, 2), at(d, 12, 10), 60.0);
      tr.stay(kHomeLat, kHomeLon, at(d, 12, 12), at(d, 23, 50));
      continue;
    }
    tr.stay(kHomeLat, kHomeLon, at(d, 0, 0), at(d, 7, 50));
    if (commute_mode == "car") {
      tr.track("car", kHomeLat, kHomeLon, kWorkLat, kWorkLon, at(d, 8, 0), at(d, 8, 30), 60.0);
    } else {
      const double stop_lat = north(kHomeLat, 250.0);
      const double stop2_lat = north(kWorkLat, -250.0);
      tr.track("walk", kHomeLat, kHomeLon, north(kHomeLat, 240.0), kHomeLon, at(d, 7, 56), at(d, 8, 0), 60.0);
      tr.stay(stop_lat, kHomeLon, at(d, 8, 1), at(d, 8, 4), 60.0);
      tr.track("bus", stop_lat, kHomeLon, stop2_lat, kWorkLon, at(d, 8, 5), at(d, 8, 35), 60.0);
      tr.track("walk", north(stop2_lat, 10.0), kWorkLon, north(kWorkLat, -8.0), kWorkLon, at(d, 8, 36),
               at(d, 8, 40), 60.0);
    }
    tr.stay(kWorkLat, kWorkLon, at(d, 8, 45), at(d, 17, 15));
    tr.track("car" == commute_mode ? "car" : "bus", kWorkLat, kWorkLon, kHomeLat, kHomeLon, at(d, 17, 20),
             at(d, 17, 55), 60.0);
    tr.stay(kHomeLat, kHomeLon, at(d, 18, 0), at(d, 23, 50));
  }
  return tr.events();
}

}  // namespace fixtures
