#include "tripchoice/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "tripchoice/errors.hpp"

namespace tripchoice {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Car: return "car";
    case Mode::Bus: return "bus";
    case Mode::Subway: return "subway";
    case Mode::Train: return "train";
    case Mode::Walk: return "walk";
    case Mode::Bicycle: return "bicycle";
    case Mode::EMobility: return "emobility";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  const std::string v = lower(s);
  if (v == "car") return Mode::Car;
  if (v == "bus") return Mode::Bus;
  if (v == "subway" || v == "sub" || v == "metro") return Mode::Subway;
  if (v == "train" || v == "rail") return Mode::Train;
  if (v == "walk") return Mode::Walk;
  if (v == "bicycle" || v == "bike") return Mode::Bicycle;
  if (v == "emobility" || v == "emob" || v == "e-mobility") return Mode::EMobility;
  throw DataError("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Source s) { return s == Source::RP ? "RP" : "SP"; }

std::string_view to_string(Weather w) {
  switch (w) {
    case Weather::Sunny: return "sunny";
    case Weather::Cloudy: return "cloudy";
    case Weather::Rainy: return "rainy";
    case Weather::Snowy: return "snowy";
    case Weather::Unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Season s) {
  switch (s) {
    case Season::Winter: return "winter";
    case Season::Spring: return "spring";
    case Season::Summer: return "summer";
    case Season::Fall: return "fall";
  }
  return "?";
}

std::string_view to_string(Period p) {
  switch (p) {
    case Period::Night: return "night";
    case Period::AmPeak: return "am_peak";
    case Period::Midday: return "midday";
    case Period::PmPeak: return "pm_peak";
    case Period::Evening: return "evening";
  }
  return "?";
}

Source parse_source(std::string_view s) {
  const std::string v = lower(s);
  if (v == "rp") return Source::RP;
  if (v == "sp") return Source::SP;
  throw DataError("unknown source '" + std::string(s) + "'");
}

Weather parse_weather(std::string_view s) {
  const std::string v = lower(s);
  if (v == "sunny") return Weather::Sunny;
  if (v == "cloudy") return Weather::Cloudy;
  if (v == "rainy") return Weather::Rainy;
  if (v == "snowy") return Weather::Snowy;
  if (v == "unknown" || v.empty()) return Weather::Unknown;
  throw DataError("unknown weather '" + std::string(s) + "'");
}

Season parse_season(std::string_view s) {
  const std::string v = lower(s);
  if (v == "winter") return Season::Winter;
  if (v == "spring") return Season::Spring;
  if (v == "summer") return Season::Summer;
  if (v == "fall" || v == "autumn") return Season::Fall;
  throw DataError("unknown season '" + std::string(s) + "'");
}

Period parse_period(std::string_view s) {
  const std::string v = lower(s);
  if (v == "night") return Period::Night;
  if (v == "am_peak") return Period::AmPeak;
  if (v == "midday") return Period::Midday;
  if (v == "pm_peak") return Period::PmPeak;
  if (v == "evening") return Period::Evening;
  throw DataError("unknown period '" + std::string(s) + "'");
}

}  // namespace tripchoice
