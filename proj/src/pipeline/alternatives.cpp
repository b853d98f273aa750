#include "tripchoice/pipeline/alternatives.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace tripchoice::pipeline {

std::optional<double> FareTable::lookup(const std::string& agency) const {
  const auto it = fares.find(agency);
  if (it == fares.end()) return std::nullopt;
  return it->second;
}

FareTable load_fare_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open fare table " + path.string());
  FareTable t;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    t.default_fare = j.value("default", kDefaultFare);
    if (j.contains("agencies")) {
      for (const auto& [k, v] : j.at("agencies").items()) t.fares[k] = v.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("fare table " + path.string() + ": " + e.what());
  }
  for (const auto& [k, v] : t.fares) {
    if (!(v >= 0.0)) throw DataError("fare table " + path.string() + ": negative fare for " + k);
  }
  return t;
}

double estimate_cost(Mode mode, double distance_km, const std::vector<std::string>& agencies,
                     std::optional<double> provider_fare, const FareTable& fares) {
  if (mode == Mode::Car) return kCarCostPerKm * std::max(distance_km, 0.0);
  if (!is_transit(mode)) return 0.0;
  if (provider_fare && *provider_fare >= 0.0) return *provider_fare;
  std::optional<double> best;
  for (const auto& a : agencies) {
    if (const auto f = fares.lookup(a)) best = std::max(best.value_or(0.0), *f);
  }
  return best.value_or(fares.default_fare);
}

RoutedModes AlternativeSet::routed() const {
  RoutedModes r;
  r.car = at(Mode::Car).routed;
  r.bus = at(Mode::Bus).routed;
  r.subway = at(Mode::Subway).routed;
  r.train = at(Mode::Train).routed;
  r.walk = at(Mode::Walk).routed;
  return r;
}

AlternativeSet generate_alternatives(const ClusterKey& key, RoutingProvider& provider,
                                     const FareTable& fares) {
  AlternativeSet set;
  for (Mode m : kRpModes) {
    std::vector<Route> routes;
    try {
      routes = provider.routes(key, m);
    } catch (const ProviderError& e) {
      set.warnings.push_back(std::string(to_string(m)) + ": provider failure: " + e.what());
      continue;
    }
    if (routes.empty()) continue;
    const Route& best = *std::min_element(routes.begin(), routes.end(),
                                          [](const Route& a, const Route& b) { return a.total_min < b.total_min; });
    RoutedAlternative& alt = set.at(m);
    alt.routed = true;
    alt.distance_km = best.distance_km;
    alt.agencies = best.agencies;
    alt.cost = estimate_cost(m, best.distance_km, best.agencies, best.fare, fares);
    if (is_transit(m)) {
      alt.in_vehicle_min = best.in_vehicle_min;
      alt.walk_min = best.walk_min;
      const double wait = best.total_min - best.in_vehicle_min - best.walk_min;
      if (wait < 0.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s: negative waiting time %.2f min clamped to 0",
                      std::string(to_string(m)).c_str(), wait);
        set.warnings.push_back(buf);
      }
      alt.wait_min = std::max(wait, 0.0);
    } else {
      alt.in_vehicle_min = best.total_min;
    }
  }
  return set;
}

AlternativeAttributes to_attributes(const RoutedAlternative& alt, Mode mode) {
  AlternativeAttributes a;
  a.available = alt.routed;
  a.cost = alt.cost;
  a.ivtt = alt.in_vehicle_min;
  a.distance = alt.distance_km;
  a.walk_access = is_transit(mode) ? alt.walk_min + alt.wait_min : 0.0;
  return a;
}

}  // namespace tripchoice::pipeline
