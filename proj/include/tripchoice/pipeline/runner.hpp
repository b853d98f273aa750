#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/pipeline/alternatives.hpp"
#include "tripchoice/pipeline/anchors.hpp"
#include "tripchoice/pipeline/context.hpp"
#include "tripchoice/pipeline/screening.hpp"
#include "tripchoice/pipeline/sp_gate.hpp"
#include "tripchoice/pipeline/transit.hpp"

namespace tripchoice::pipeline {

struct PipelineConfig {
  ScreeningConfig screening;
  AnchorConfig anchors;
  DecompositionConfig decomposition;
  double trip_break_min = 10.0;    ///< stays at least this long end a trip
  double anchor_match_m = 150.0;   ///< trip end counts as at an anchor within this distance
  int regular_min_trips = 3;       ///< same rounded OD this often makes a trip regular
  double gate_window_days = 7.0;
  double min_trip_km = 0.1;
  int workers = 1;
};

struct PipelineTrip {
  std::string person_id;
  std::string obs_id;
  std::string trip_id;  ///< diary trip id of the main leg, may be empty
  Mode mode = Mode::Car;
  bool mode_known = true;
  Timestamp departure;
  Timestamp arrival;
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double dest_lat = 0.0;
  double dest_lon = 0.0;
  double distance_km = 0.0;
  double duration_min = 0.0;
  ClusterKey key;
  TripPurpose purpose = TripPurpose::Other;
  bool purpose_work_study = false;
  std::optional<TransitDecomposition> transit;
  SpCategory gate = SpCategory::Ineligible;
  bool sp_trigger = false;
  TripContext context;
  bool kept = false;  ///< became an observation
  std::vector<std::string> flags;
};

struct PersonAnchors {
  std::string person_id;
  AnchorResult anchors;
};

struct PipelineOutput {
  Dataset data;
  std::vector<PersonScreening> screening;
  std::vector<PersonAnchors> anchors;
  std::vector<PipelineTrip> trips;
  std::vector<std::string> warnings;
};

/// Segments a person's cleaned event stream into trips. Stays of at least
/// trip_break_min end a trip; transit legs are decomposed and chained through
/// transfers, and the walks they absorb are not separate trips. Trip fields
/// that need anchors, providers or the gate are left at their defaults.
std::vector<PipelineTrip> segment_trips(const std::vector<GpsEvent>& events, const PipelineConfig& config = {});

/// Screening, anchors, trip segmentation, alternatives, costs, context and
/// the SP gate. `survey` provides person covariates (car_observed is derived
/// from the trips); persons without a survey record are skipped.
PipelineOutput run_pipeline(const std::vector<GpsEvent>& events, const std::vector<PersonProfile>& survey,
                            RoutingProvider& routing, WeatherProvider& weather, const FareTable& fares,
                            const WmoTable& wmo, const PipelineConfig& config = {});

Table trips_table(const std::vector<PipelineTrip>& trips);
Table anchors_table(const std::vector<PersonAnchors>& anchors);

/// observations.csv, persons.csv, trips.csv, screening.csv, anchors.csv
void write_pipeline_outputs(const std::filesystem::path& dir, const PipelineOutput& out);

}  // namespace tripchoice::pipeline
