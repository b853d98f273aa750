#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/pipeline/events.hpp"

namespace fixtures {

using tripchoice::AlternativeAttributes;
using tripchoice::ChoiceObservation;
using tripchoice::Mode;
using tripchoice::PersonProfile;

PersonProfile person(const std::string& id, bool migrant = false);

/// Observation with the given available modes (cost, ivtt, walk, distance).
struct AltSpec {
  Mode mode;
  double cost;
  double ivtt;
  double walk;
  double distance;
};
ChoiceObservation observation(const std::string& obs_id, const std::string& person_id, Mode chosen,
                              std::initializer_list<AltSpec> alts);

/// Two persons, three RP observations (2 + 1), integration raw 8.5 and 6.7.
std::pair<tripchoice::Table, tripchoice::Table> small_tables();

/// 50 RP observations over 10 persons with varied attributes and choices.
tripchoice::Dataset fifty_obs_fixture();

/// Three persons x two observations x two alternatives (car vs bus).
tripchoice::Dataset toy_panel(bool all_native = false);

// --- GPS fixtures -----------------------------------------------------------

/// Local time on day `day` after Monday 2025-01-06, UTC-5.
tripchoice::pipeline::Timestamp at(int day, int hour, int minute, int second = 0);
tripchoice::pipeline::Timestamp plus(const tripchoice::pipeline::Timestamp& t, double seconds);

/// Builds time-ordered event streams.
class Trajectory {
 public:
  explicit Trajectory(std::string person_id) : person_(std::move(person_id)) {}

  /// Stationary fixes every `step_s` seconds with a few metres of jitter.
  Trajectory& stay(double lat, double lon, tripchoice::pipeline::Timestamp from,
                   tripchoice::pipeline::Timestamp to, double step_s = 600.0);
  /// Straight-line track from (lat0, lon0) to (lat1, lon1), fixes at both ends
  /// and every `step_s` seconds.
  Trajectory& track(const std::string& mode, double lat0, double lon0, double lat1, double lon1,
                    tripchoice::pipeline::Timestamp from, tripchoice::pipeline::Timestamp to,
                    double step_s = 60.0, const std::string& trip_id = "");
  /// Single fix.
  Trajectory& fix(tripchoice::pipeline::EventKind kind, double lat, double lon,
                  tripchoice::pipeline::Timestamp t, const std::string& mode = "",
                  const std::string& trip_id = "");

  const std::vector<tripchoice::pipeline::GpsEvent>& events() const { return events_; }

 private:
  std::string person_;
  std::vector<tripchoice::pipeline::GpsEvent> events_;
  unsigned jitter_ = 0;
};

/// Metres north / east of (lat, lon) in degrees.
double north(double lat, double metres);
double east(double lat, double lon, double metres);

/// Access walk 4.3 min, platform wait 3.7 min, subway ride, egress walk 5.6 min.
struct Fig4Fixture {
  std::vector<tripchoice::pipeline::GpsEvent> events;
  std::size_t track_first = 0;
  std::size_t track_last = 0;
};
Fig4Fixture fig4_fixture();

/// Ten days (Mon 2025-01-06 onwards) for one person: nights at home,
/// weekday commutes to work by `commute_mode` ("car" or "bus"), work 08:45 to
/// 17:15, a weekend shopping walk.
std::vector<tripchoice::pipeline::GpsEvent> commuter_days(const std::string& person_id,
                                                          const std::string& commute_mode, int days = 10);

inline constexpr double kHomeLat = 43.6532;
inline constexpr double kHomeLon = -79.3832;
inline constexpr double kWorkLat = 43.7001;
inline constexpr double kWorkLon = -79.4163;

}  // namespace fixtures
