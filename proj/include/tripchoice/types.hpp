#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tripchoice {

enum class Mode : std::uint8_t { Car, Bus, Subway, Train, Walk, Bicycle, EMobility };

inline constexpr std::size_t kNumModes = 7;

inline constexpr std::array<Mode, kNumModes> kAllModes = {
    Mode::Car, Mode::Bus, Mode::Subway, Mode::Train, Mode::Walk, Mode::Bicycle, Mode::EMobility};

/// Revealed-preference modes in the fixed tie-breaking order.
inline constexpr std::array<Mode, 6> kRpModes = {
    Mode::Car, Mode::Bus, Mode::Subway, Mode::Train, Mode::Walk, Mode::Bicycle};

constexpr std::size_t index_of(Mode m) { return static_cast<std::size_t>(m); }

constexpr bool is_transit(Mode m) {
  return m == Mode::Bus || m == Mode::Subway || m == Mode::Train;
}

constexpr bool is_active(Mode m) { return m == Mode::Walk || m == Mode::Bicycle; }

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

enum class Source : std::uint8_t { RP, SP };
enum class Weather : std::uint8_t { Sunny, Cloudy, Rainy, Snowy, Unknown };
enum class Season : std::uint8_t { Winter, Spring, Summer, Fall };
enum class Period : std::uint8_t { Night, AmPeak, Midday, PmPeak, Evening };

std::string_view to_string(Source s);
std::string_view to_string(Weather w);
std::string_view to_string(Season s);
std::string_view to_string(Period p);

Source parse_source(std::string_view s);
Weather parse_weather(std::string_view s);
Season parse_season(std::string_view s);
Period parse_period(std::string_view s);

}  // namespace tripchoice
