#include "tripchoice/pipeline/events.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "tripchoice/errors.hpp"

namespace tripchoice::pipeline {

namespace {

int digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) throw DataError("malformed timestamp '" + std::string(text) + "'");
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + n, v);
  if (ec != std::errc{} || ptr != text.data() + pos + n) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  return v;
}

void expect(std::string_view text, std::size_t pos, std::string_view chars) {
  if (pos >= text.size() || chars.find(text[pos]) == std::string_view::npos) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
}

}  // namespace

std::chrono::year_month_day Timestamp::local_date() const {
  return std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(local()));
}

int Timestamp::local_minute_of_day() const {
  const auto l = local();
  const auto since = l - std::chrono::floor<std::chrono::days>(l);
  return static_cast<int>(std::chrono::duration_cast<std::chrono::minutes>(since).count());
}

unsigned Timestamp::local_weekday() const {
  return std::chrono::weekday(std::chrono::floor<std::chrono::days>(local())).c_encoding();
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const int y = digits(text, 0, 4);
  expect(text, 4, "-");
  const int mo = digits(text, 5, 2);
  expect(text, 7, "-");
  const int d = digits(text, 8, 2);
  expect(text, 10, "T ");
  const int h = digits(text, 11, 2);
  expect(text, 13, ":");
  const int mi = digits(text, 14, 2);
  std::size_t pos = 16;
  int s = 0;
  if (pos < text.size() && text[pos] == ':') {
    s = digits(text, pos + 1, 2);
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
  }
  int offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      offset = 0;
    } else if ((text[pos] == '+' || text[pos] == '-') && text.size() == pos + 6 && text[pos + 3] == ':') {
      offset = digits(text, pos + 1, 2) * 60 + digits(text, pos + 4, 2);
      if (text[pos] == '-') offset = -offset;
    } else {
      throw DataError("malformed timestamp '" + std::string(text) + "'");
    }
  }
  const year_month_day ymd{year(y), month(static_cast<unsigned>(mo)), day(static_cast<unsigned>(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw DataError("invalid date or time in timestamp '" + std::string(text) + "'");
  }
  const sys_seconds local = sys_days(ymd) + hours(h) + minutes(mi) + seconds(s);
  return {local - minutes(offset), offset};
}

std::string format_timestamp(const Timestamp& t) {
  using namespace std::chrono;
  const auto l = t.local();
  const auto dp = floor<days>(l);
  const year_month_day ymd(dp);
  const hh_mm_ss hms(l - dp);
  char buf[96];
  const int off = std::abs(t.offset_minutes);
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld%c%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()), t.offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
  return buf;
}

double seconds_between(const Timestamp& a, const Timestamp& b) {
  return static_cast<double>((b.utc - a.utc).count());
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Waypoint: return "waypoint";
    case EventKind::Stay: return "stay";
    case EventKind::Track: return "track";
  }
  return "waypoint";
}

EventKind parse_event_kind(std::string_view s) {
  if (s == "waypoint") return EventKind::Waypoint;
  if (s == "stay") return EventKind::Stay;
  if (s == "track") return EventKind::Track;
  throw DataError("unknown event kind '" + std::string(s) + "'");
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadius = 6371008.8;
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

double distance_m(const GpsEvent& a, const GpsEvent& b) { return haversine_m(a.lat, a.lon, b.lat, b.lon); }

double speed_mps(const GpsEvent& a, const GpsEvent& b) {
  const double d = distance_m(a, b);
  const double dt = std::abs(seconds_between(a.time, b.time));
  if (dt == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return d / dt;
}

std::vector<GpsEvent> events_from_table(const Table& table) {
  constexpr std::string_view kName = "events";
  const std::size_t c_person = table.require_column("person_id", kName);
  const std::size_t c_time = table.require_column("timestamp", kName);
  const std::size_t c_lat = table.require_column("lat", kName);
  const std::size_t c_lon = table.require_column("lon", kName);
  const std::size_t c_kind = table.require_column("kind", kName);
  const std::size_t c_mode = table.require_column("mode_label", kName);
  const auto c_trip = table.column("trip_id");

  std::vector<GpsEvent> out;
  out.reserve(table.size());
  std::unordered_map<std::string, Timestamp> last_time;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    const std::string where = "events row " + std::to_string(r + 2);
    try {
      GpsEvent e;
      e.person_id = row[c_person];
      if (e.person_id.empty()) throw DataError("empty person_id");
      e.time = parse_timestamp(row[c_time]);
      e.lat = parse_double(row[c_lat], where + " lat");
      e.lon = parse_double(row[c_lon], where + " lon");
      if (std::abs(e.lat) > 90.0 || std::abs(e.lon) > 180.0) throw DataError("coordinates out of range");
      e.kind = parse_event_kind(row[c_kind]);
      e.mode_label = row[c_mode];
      if (c_trip) e.trip_id = row[*c_trip];
      auto it = last_time.find(e.person_id);
      if (it != last_time.end() && !(it->second < e.time)) {
        throw DataError("timestamps not strictly increasing for person " + e.person_id);
      }
      last_time[e.person_id] = e.time;
      out.push_back(std::move(e));
    } catch (const DataError& err) {
      const std::string msg = err.what();
      if (msg.rfind("events row", 0) == 0) throw;
      throw DataError(where + ": " + msg);
    }
  }
  return out;
}

std::vector<GpsEvent> read_events(const std::filesystem::path& path) {
  return events_from_table(read_table(path));
}

Table events_table(const std::vector<GpsEvent>& events) {
  Table t({"person_id", "timestamp", "lat", "lon", "kind", "mode_label", "trip_id"}, {});
  for (const auto& e : events) {
    char lat[32], lon[32];
    std::snprintf(lat, sizeof lat, "%.6f", e.lat);
    std::snprintf(lon, sizeof lon, "%.6f", e.lon);
    t.add_row({e.person_id, format_timestamp(e.time), lat, lon, std::string(to_string(e.kind)),
               e.mode_label, e.trip_id});
  }
  return t;
}

std::vector<std::vector<GpsEvent>> group_by_person(const std::vector<GpsEvent>& events) {
  std::vector<std::vector<GpsEvent>> out;
  std::unordered_map<std::string, std::size_t> where;
  for (const auto& e : events) {
    auto [it, inserted] = where.emplace(e.person_id, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(e);
  }
  return out;
}

std::vector<Episode> episodes(const std::vector<GpsEvent>& events) {
  std::vector<Episode> out;
  auto kind_of = [](const GpsEvent& e) {
    return e.kind == EventKind::Track ? EventKind::Track : EventKind::Stay;
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    const EventKind k = kind_of(events[i]);
    const std::string label = k == EventKind::Track ? events[i].mode_label : std::string();
    if (!out.empty() && out.back().kind == k && out.back().mode_label == label) {
      out.back().last = i;
    } else {
      out.push_back({k, label, i, i});
    }
  }
  return out;
}

}  // namespace tripchoice::pipeline
