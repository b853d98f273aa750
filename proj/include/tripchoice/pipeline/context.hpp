#pragma once

#include <chrono>
#include <filesystem>
#include <map>

#include "tripchoice/pipeline/providers.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice::pipeline {

/// WMO weather code to category.
struct WmoTable {
  std::map<int, Weather> codes;
  Weather lookup(int code) const;
};

/// 0-1 sunny; 2, 3, 45, 48 cloudy; 51-67, 80-82, 95-99 rainy; 71-77, 85, 86 snowy.
WmoTable default_wmo_table();
/// {"sunny": [0, 1], "cloudy": [...], ...}
WmoTable load_wmo_table(const std::filesystem::path& path);

/// Dec-Feb winter, Mar-May spring, Jun-Aug summer, Sep-Nov fall.
Season season_of(unsigned month);

/// Round half away from zero to one decimal.
double round1(double degrees);

struct TripContext {
  Weather weather = Weather::Unknown;
  Season season = Season::Winter;
  bool snow = false;
  bool flagged = false;
  std::string message;
};

TripContext enrich_context(const std::chrono::year_month_day& date, double lat, double lon,
                           WeatherProvider& provider, const WmoTable& table);

}  // namespace tripchoice::pipeline
