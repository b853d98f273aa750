#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tripchoice/errors.hpp"
#include "tripchoice/pipeline/clustering.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice::pipeline {

/// Raised by a provider that could not answer a query.
class ProviderError : public Error {
 public:
  using Error::Error;
};

struct Route {
  double total_min = 0.0;
  double in_vehicle_min = 0.0;
  double walk_min = 0.0;
  double distance_km = 0.0;
  std::optional<double> fare;
  std::vector<std::string> agencies;
};

/// Routing between the rounded origin and destination of a cluster at its
/// representative departure period. An empty result means no route.
class RoutingProvider {
 public:
  virtual ~RoutingProvider() = default;
  virtual std::vector<Route> routes(const ClusterKey& key, Mode mode) = 0;
};

/// Daily WMO weather code at a location rounded to one decimal.
class WeatherProvider {
 public:
  virtual ~WeatherProvider() = default;
  virtual int wmo_code(const std::chrono::year_month_day& date, double lat1, double lon1) = 0;
};

/// Deterministic offline routing: network distance 1.3 x great-circle plus
/// 0.2 km, per-mode speed models, two options per transit sub-mode with
/// seeded walk and headway components.
class SyntheticRoutingProvider : public RoutingProvider {
 public:
  explicit SyntheticRoutingProvider(std::uint64_t seed = 0) : seed_(seed) {}
  std::vector<Route> routes(const ClusterKey& key, Mode mode) override;

 private:
  std::uint64_t seed_;
};

/// Deterministic offline weather drawn from seasonal code lists.
class SyntheticWeatherProvider : public WeatherProvider {
 public:
  explicit SyntheticWeatherProvider(std::uint64_t seed = 0) : seed_(seed) {}
  int wmo_code(const std::chrono::year_month_day& date, double lat1, double lon1) override;

 private:
  std::uint64_t seed_;
};

/// Memoises a routing provider by (ClusterKey, mode). Reads may run
/// concurrently; inserts and file writes are serialised. Failures are not cached.
class CachingRoutingProvider : public RoutingProvider {
 public:
  explicit CachingRoutingProvider(RoutingProvider& inner, std::filesystem::path cache_file = {});
  std::vector<Route> routes(const ClusterKey& key, Mode mode) override;
  void save() const;
  std::size_t size() const;
  std::size_t misses() const { return misses_; }

 private:
  RoutingProvider& inner_;
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::vector<Route>> cache_;
  std::size_t misses_ = 0;
};

/// Memoises a weather provider by (date, lat1, lon1).
class CachingWeatherProvider : public WeatherProvider {
 public:
  explicit CachingWeatherProvider(WeatherProvider& inner, std::filesystem::path cache_file = {});
  int wmo_code(const std::chrono::year_month_day& date, double lat1, double lon1) override;
  void save() const;
  std::size_t size() const;
  std::size_t misses() const { return misses_; }

 private:
  WeatherProvider& inner_;
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, int> cache_;
  std::size_t misses_ = 0;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace tripchoice::pipeline
