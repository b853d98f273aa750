#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tripchoice/csv.hpp"
#include "tripchoice/integration_index.hpp"
#include "tripchoice/types.hpp"

namespace tripchoice {

/// Level-of-service attributes of one alternative in natural units:
/// cost in CAD, times in minutes, distance in kilometres.
struct AlternativeAttributes {
  double cost = 0.0;
  double ivtt = 0.0;         ///< total travel time for walk and bicycle
  double walk_access = 0.0;  ///< transit and e-mobility only, 0 otherwise
  double distance = 0.0;
  bool available = false;
};

/// Attributes after the estimation scaling (cost and time /10, distance /1000).
struct ScaledAttributes {
  double cost = 0.0;
  double ivtt = 0.0;
  double walk = 0.0;
  double distance = 0.0;
};

inline constexpr double kCostScale = 10.0;
inline constexpr double kTimeScale = 10.0;
inline constexpr double kDistanceScale = 1000.0;

ScaledAttributes scale_attributes(const AlternativeAttributes& raw);
AlternativeAttributes unscale_attributes(const ScaledAttributes& scaled, bool available = true);

struct ChoiceObservation {
  std::string obs_id;
  std::string person_id;
  Source source = Source::RP;
  Mode chosen = Mode::Car;
  std::array<AlternativeAttributes, kNumModes> attributes{};
  bool purpose_work_study = false;
  bool snow = false;
  Weather weather = Weather::Sunny;
  Season season = Season::Winter;
  Period period = Period::Midday;
  bool sp_trigger = false;  ///< RP trip that triggered an SP scenario

  const AlternativeAttributes& at(Mode m) const { return attributes[index_of(m)]; }
  AlternativeAttributes& at(Mode m) { return attributes[index_of(m)]; }
  bool available(Mode m) const { return at(m).available; }
  std::size_t num_available() const;
};

struct PersonProfile {
  std::string person_id;
  bool migrant = false;
  bool full_time = false;
  bool student = false;
  bool child_0_10 = false;
  bool safe = false;
  bool cycling_friendly = false;
  bool car_owned = false;
  bool car_observed = false;
  bool bike_owned = false;
  IntegrationDimensions integration_dims;
  double integration_raw = 5.5;
  double integration_centred = 0.0;
  bool integration_reweighted = false;  ///< a dimension was missing
};

/// Persons with their observations grouped contiguously by person.
/// Immutable once constructed.
class Dataset {
 public:
  Dataset() = default;
  /// Validates the cross-record invariants and groups observations by person
  /// in the order persons are given. Persons without observations are dropped.
  Dataset(std::vector<PersonProfile> persons, std::vector<ChoiceObservation> observations);

  const std::vector<PersonProfile>& persons() const { return persons_; }
  const std::vector<ChoiceObservation>& observations() const { return observations_; }
  std::span<const ChoiceObservation> observations_of(std::size_t person) const;
  /// Index of the first observation of `person` within observations().
  std::size_t offset_of(std::size_t person) const { return offsets_[person]; }
  std::size_t person_of_observation(std::size_t obs) const { return owner_[obs]; }
  std::size_t person_index(const std::string& person_id) const;
  bool has_person(const std::string& person_id) const;

  std::size_t num_persons() const { return persons_.size(); }
  std::size_t num_observations() const { return observations_.size(); }
  std::size_t count(Source s) const;

  /// Keeps the observations for which keep[i] is true (persons left empty are dropped).
  Dataset filter(const std::vector<bool>& keep) const;

 private:
  std::vector<PersonProfile> persons_;
  std::vector<ChoiceObservation> observations_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> owner_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Checks the per-observation invariants (availability, nonnegativity,
/// zero cost for active modes, e-mobility only in SP). Throws DataError.
void validate_observation(const ChoiceObservation& obs);

/// Parses the persons table and computes the raw integration index. The
/// car_observed column may be optional (survey files read by the pipeline).
std::vector<PersonProfile> persons_from_table(const Table& persons, bool require_car_observed = true);

/// Builds a Dataset from the long-format observations table and the persons
/// table. Integration is computed from the four integ_* columns and centred
/// over the unique persons that have observations.
Dataset load_dataset(const Table& observations, const Table& persons);
Dataset load_dataset(const std::filesystem::path& observations, const std::filesystem::path& persons);

Table observations_table(const Dataset& data);
Table persons_table(const Dataset& data);

/// Per-mode routing presence used to derive availability.
struct RoutedModes {
  bool car = false;
  bool bus = false;
  bool subway = false;
  bool train = false;
  bool walk = false;
};

using ModeAvailability = std::array<bool, kNumModes>;

ModeAvailability build_availability(const PersonProfile& person, const RoutedModes& routed);

std::vector<double> center_integration(std::span<const double> raw);

}  // namespace tripchoice
