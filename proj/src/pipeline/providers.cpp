#include "tripchoice/pipeline/providers.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "tripchoice/pipeline/events.hpp"

namespace tripchoice::pipeline {

std::uint64_t fnv1a(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

double unit_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0); }

bool peak(Period p) { return p == Period::AmPeak || p == Period::PmPeak; }

std::string date_string(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

nlohmann::json route_json(const Route& r) {
  nlohmann::json j = {{"total_min", r.total_min},
                      {"in_vehicle_min", r.in_vehicle_min},
                      {"walk_min", r.walk_min},
                      {"distance_km", r.distance_km},
                      {"agencies", r.agencies}};
  j["fare"] = r.fare ? nlohmann::json(*r.fare) : nlohmann::json(nullptr);
  return j;
}

Route route_from(const nlohmann::json& j) {
  Route r;
  r.total_min = j.at("total_min").get<double>();
  r.in_vehicle_min = j.at("in_vehicle_min").get<double>();
  r.walk_min = j.at("walk_min").get<double>();
  r.distance_km = j.at("distance_km").get<double>();
  r.agencies = j.value("agencies", std::vector<std::string>{});
  if (j.contains("fare") && !j.at("fare").is_null()) r.fare = j.at("fare").get<double>();
  return r;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("corrupt cache file " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(1) << "\n";
}

}  // namespace

std::vector<Route> SyntheticRoutingProvider::routes(const ClusterKey& key, Mode mode) {
  const double crow = haversine_m(key.origin_lat(), key.origin_lon(), key.dest_lat(), key.dest_lon()) / 1000.0;
  const double km = 1.3 * crow + 0.2;
  const std::uint64_t h = fnv1a(to_string(key) + "|" + std::string(to_string(mode)), seed_ + 0xcbf29ce484222325ULL);
  const double u1 = unit_hash(h);
  const double u2 = unit_hash(fnv1a("second", h));
  std::vector<Route> out;
  auto transit = [&](double speed, double headway, double fare, const char* agency) {
    for (int option = 0; option < 2; ++option) {
      Route r;
      r.distance_km = km * (option == 0 ? 1.0 : 1.15);
      r.in_vehicle_min = r.distance_km / speed * 60.0;
      r.walk_min = 3.0 + 9.0 * (option == 0 ? u1 : u2);
      const double wait = headway * (option == 0 ? u2 : u1) / 2.0 + 1.0;
      r.total_min = r.in_vehicle_min + r.walk_min + wait;
      if (fare > 0.0) r.fare = fare;
      r.agencies = {agency};
      out.push_back(r);
    }
  };
  switch (mode) {
    case Mode::Car: {
      const double speed = peak(key.period) ? 26.0 : 36.0;
      const double t = 3.0 + km / speed * 60.0;
      out.push_back({t, t, 0.0, km, std::nullopt, {}});
      break;
    }
    case Mode::Bus:
      if (km >= 0.4) transit(peak(key.period) ? 14.0 : 17.0, 12.0, 0.0, "TTC");
      break;
    case Mode::Subway:
      if (km >= 1.2 && u1 < 0.8) transit(30.0, 5.0, 0.0, "TTC");
      break;
    case Mode::Train:
      if (km >= 8.0 && u2 < 0.7) transit(55.0, 30.0, 3.70 + 0.08 * km, "GO");
      break;
    case Mode::Walk: {
      const double t = km / 4.8 * 60.0;
      out.push_back({t, t, 0.0, km, std::nullopt, {}});
      break;
    }
    case Mode::Bicycle: {
      const double t = km / 15.0 * 60.0;
      out.push_back({t, t, 0.0, km, std::nullopt, {}});
      break;
    }
    case Mode::EMobility:
      break;
  }
  return out;
}

int SyntheticWeatherProvider::wmo_code(const std::chrono::year_month_day& date, double lat1, double lon1) {
  static constexpr std::array<int, 10> kWinter = {0, 1, 2, 3, 3, 45, 61, 71, 73, 75};
  static constexpr std::array<int, 10> kOther = {0, 0, 1, 1, 2, 3, 45, 61, 63, 80};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s|%.1f|%.1f", date_string(date).c_str(), lat1, lon1);
  const std::uint64_t h = fnv1a(buf, seed_ + 0x84222325ULL);
  const unsigned m = static_cast<unsigned>(date.month());
  const bool winter = m == 12 || m <= 3;
  return (winter ? kWinter : kOther)[h % 10];
}

CachingRoutingProvider::CachingRoutingProvider(RoutingProvider& inner, std::filesystem::path cache_file)
    : inner_(inner), file_(std::move(cache_file)) {
  if (file_.empty()) return;
  const nlohmann::json j = read_json_file(file_);
  for (const auto& [k, v] : j.items()) {
    std::vector<Route> rs;
    for (const auto& r : v) rs.push_back(route_from(r));
    cache_[k] = std::move(rs);
  }
}

std::vector<Route> CachingRoutingProvider::routes(const ClusterKey& key, Mode mode) {
  const std::string k = to_string(key) + "|" + std::string(to_string(mode));
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  std::vector<Route> rs = inner_.routes(key, mode);
  std::unique_lock lock(mutex_);
  ++misses_;
  cache_.emplace(k, rs);
  return rs;
}

void CachingRoutingProvider::save() const {
  if (file_.empty()) return;
  std::unique_lock lock(mutex_);
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, rs] : cache_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs) arr.push_back(route_json(r));
    j[k] = arr;
  }
  write_json_file(file_, j);
}

std::size_t CachingRoutingProvider::size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

CachingWeatherProvider::CachingWeatherProvider(WeatherProvider& inner, std::filesystem::path cache_file)
    : inner_(inner), file_(std::move(cache_file)) {
  if (file_.empty()) return;
  const nlohmann::json j = read_json_file(file_);
  for (const auto& [k, v] : j.items()) cache_[k] = v.get<int>();
}

int CachingWeatherProvider::wmo_code(const std::chrono::year_month_day& date, double lat1, double lon1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s|%.1f|%.1f", date_string(date).c_str(), lat1, lon1);
  const std::string k = buf;
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  const int code = inner_.wmo_code(date, lat1, lon1);
  std::unique_lock lock(mutex_);
  ++misses_;
  cache_.emplace(k, code);
  return code;
}

void CachingWeatherProvider::save() const {
  if (file_.empty()) return;
  std::unique_lock lock(mutex_);
  write_json_file(file_, nlohmann::json(cache_));
}

std::size_t CachingWeatherProvider::size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace tripchoice::pipeline
