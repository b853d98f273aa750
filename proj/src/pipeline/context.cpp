#include "tripchoice/pipeline/context.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace tripchoice::pipeline {

Weather WmoTable::lookup(int code) const {
  const auto it = codes.find(code);
  return it == codes.end() ? Weather::Unknown : it->second;
}

WmoTable default_wmo_table() {
  WmoTable t;
  auto range = [&](int lo, int hi, Weather w) {
    for (int c = lo; c <= hi; ++c) t.codes[c] = w;
  };
  range(0, 1, Weather::Sunny);
  range(2, 3, Weather::Cloudy);
  range(45, 45, Weather::Cloudy);
  range(48, 48, Weather::Cloudy);
  range(51, 67, Weather::Rainy);
  range(80, 82, Weather::Rainy);
  range(95, 99, Weather::Rainy);
  range(71, 77, Weather::Snowy);
  range(85, 86, Weather::Snowy);
  return t;
}

WmoTable load_wmo_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open WMO table " + path.string());
  WmoTable t;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& [name, codes] : j.items()) {
      const Weather w = parse_weather(name);
      if (w == Weather::Unknown) throw DataError("WMO table " + path.string() + ": 'unknown' is not a category");
      for (const auto& c : codes) {
        const int code = c.get<int>();
        if (!t.codes.emplace(code, w).second) {
          throw DataError("WMO table " + path.string() + ": code " + std::to_string(code) + " listed twice");
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("WMO table " + path.string() + ": " + e.what());
  }
  return t;
}

Season season_of(unsigned month) {
  if (month < 1 || month > 12) throw DataError("month out of range: " + std::to_string(month));
  if (month == 12 || month <= 2) return Season::Winter;
  if (month <= 5) return Season::Spring;
  if (month <= 8) return Season::Summer;
  return Season::Fall;
}

double round1(double degrees) { return std::round(degrees * 10.0) / 10.0; }

TripContext enrich_context(const std::chrono::year_month_day& date, double lat, double lon,
                           WeatherProvider& provider, const WmoTable& table) {
  TripContext ctx;
  ctx.season = season_of(static_cast<unsigned>(date.month()));
  int code = -1;
  try {
    code = provider.wmo_code(date, round1(lat), round1(lon));
  } catch (const ProviderError& e) {
    ctx.flagged = true;
    ctx.message = std::string("weather provider failure: ") + e.what();
    return ctx;
  }
  ctx.weather = table.lookup(code);
  if (ctx.weather == Weather::Unknown) {
    ctx.flagged = true;
    ctx.message = "unmapped WMO code " + std::to_string(code);
  }
  ctx.snow = ctx.weather == Weather::Snowy;
  return ctx;
}

}  // namespace tripchoice::pipeline
