#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/model_spec.hpp"

namespace tripchoice {

/// A fully specified trip and traveller whose transit fare and access time
/// act as policy levers.
struct RepresentativeTrip {
  ChoiceObservation trip;
  PersonProfile person;
  double integration_sd = 2.0;  ///< index points per standard deviation
};

inline constexpr double kBaselineFare = 3.25;
inline constexpr double kBaselineAccess = 15.0;

/// Immigrant, full-time, 10 km work commute. Attribute values are calibrated
/// so that the baseline transit share at mean integration lies in [0.72, 0.83].
RepresentativeTrip default_representative_trip();
RepresentativeTrip trip_from_json(const nlohmann::json& j);
nlohmann::json trip_to_json(const RepresentativeTrip& t);
RepresentativeTrip load_representative_trip(const std::filesystem::path& path);

/// MNL probabilities (scale 1) of the trip at `integration_sd_units` from the mean.
ModeProbabilities scenario_probabilities(const RepresentativeTrip& trip,
                                         const ParameterVector& params, const ModelSpec& spec,
                                         double integration_sd_units);

double transit_share(const ModeProbabilities& p);

struct SweepTable {
  std::string lever;                  ///< "fare" or "access"
  std::vector<double> lever_values;   ///< rows
  std::vector<double> levels_sd;      ///< columns
  std::vector<std::vector<double>> transit_pct;  ///< [row][column], percent
  std::vector<double> gain_pp;        ///< last row minus first row
};

SweepTable sweep_fare(const RepresentativeTrip& trip, const ParameterVector& params,
                      const ModelSpec& spec, const std::vector<double>& fare_grid,
                      const std::vector<double>& levels_sd = {-1.0, 0.0, 1.0});

SweepTable sweep_access(const RepresentativeTrip& trip, const ParameterVector& params,
                        const ModelSpec& spec, const std::vector<double>& access_grid,
                        const std::vector<double>& levels_sd = {-1.0, 0.0, 1.0});

struct GradientCurve {
  std::vector<double> level_sd;
  std::vector<ModeProbabilities> probabilities;
  std::vector<double> transit;
  std::vector<double> car_transit_gap;  ///< transit minus car, probability units
};

/// Probabilities over an evenly spaced integration range in SD units.
/// Requires beta_I1 in the spec.
GradientCurve integration_gradient(const RepresentativeTrip& trip, const ParameterVector& params,
                                   const ModelSpec& spec, double from_sd = -1.0,
                                   double to_sd = 1.0, int steps = 21);

nlohmann::json to_json(const SweepTable& t);
nlohmann::json to_json(const GradientCurve& c);

}  // namespace tripchoice
