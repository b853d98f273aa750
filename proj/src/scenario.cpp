#include "tripchoice/scenario.hpp"

#include <fstream>

#include "tripchoice/errors.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

namespace {

void set_mode(ChoiceObservation& o, Mode m, double cost, double ivtt, double access, double distance) {
  o.at(m) = {cost, ivtt, access, distance, true};
}

}  // namespace

RepresentativeTrip default_representative_trip() {
  RepresentativeTrip t;
  ChoiceObservation& o = t.trip;
  o.obs_id = "representative";
  o.person_id = "representative";
  o.source = Source::RP;
  o.chosen = Mode::Car;
  o.purpose_work_study = true;
  o.snow = false;
  set_mode(o, Mode::Car, 14.0, 22.0, 0.0, 10.0);
  set_mode(o, Mode::Bus, kBaselineFare, 30.0, kBaselineAccess, 10.0);
  set_mode(o, Mode::Subway, kBaselineFare, 26.0, kBaselineAccess, 10.0);
  set_mode(o, Mode::Train, kBaselineFare, 18.0, kBaselineAccess, 10.0);
  set_mode(o, Mode::Walk, 0.0, 125.0, 0.0, 10.0);
  set_mode(o, Mode::Bicycle, 0.0, 25.0, 0.0, 10.0);

  PersonProfile& p = t.person;
  p.person_id = "representative";
  p.migrant = true;
  p.full_time = true;
  p.safe = true;
  p.cycling_friendly = true;
  p.car_owned = true;
  p.bike_owned = true;
  return t;
}

RepresentativeTrip trip_from_json(const nlohmann::json& j) {
  RepresentativeTrip t = default_representative_trip();
  try {
    t.integration_sd = j.value("integration_sd", t.integration_sd);
    if (!(t.integration_sd > 0.0)) throw SpecError("integration_sd must be positive");
    t.trip.purpose_work_study = j.value("purpose_work_study", t.trip.purpose_work_study);
    t.trip.snow = j.value("snow", t.trip.snow);
    if (j.contains("person")) {
      const auto& p = j.at("person");
      PersonProfile& q = t.person;
      q.migrant = p.value("migrant", q.migrant);
      q.full_time = p.value("full_time", q.full_time);
      q.student = p.value("student", q.student);
      q.child_0_10 = p.value("child_0_10", q.child_0_10);
      q.safe = p.value("safe", q.safe);
      q.cycling_friendly = p.value("cycling_friendly", q.cycling_friendly);
    }
    if (j.contains("modes")) {
      for (Mode m : kRpModes) t.trip.at(m).available = false;
      for (const auto& [name, a] : j.at("modes").items()) {
        const Mode m = parse_mode(name);
        if (m == Mode::EMobility) throw SpecError("representative trip cannot include e-mobility");
        t.trip.at(m) = {a.value("cost", 0.0), a.at("ivtt").get<double>(), a.value("walk_access", 0.0),
                        a.value("distance", 0.0), true};
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("representative trip: ") + e.what());
  }
  validate_observation(t.trip);
  return t;
}

nlohmann::json trip_to_json(const RepresentativeTrip& t) {
  nlohmann::json modes = nlohmann::json::object();
  for (Mode m : kRpModes) {
    const auto& a = t.trip.at(m);
    if (!a.available) continue;
    modes[std::string(to_string(m))] = {
        {"cost", a.cost}, {"ivtt", a.ivtt}, {"walk_access", a.walk_access}, {"distance", a.distance}};
  }
  const PersonProfile& p = t.person;
  return {{"integration_sd", t.integration_sd},
          {"purpose_work_study", t.trip.purpose_work_study},
          {"snow", t.trip.snow},
          {"person",
           {{"migrant", p.migrant},
            {"full_time", p.full_time},
            {"student", p.student},
            {"child_0_10", p.child_0_10},
            {"safe", p.safe},
            {"cycling_friendly", p.cycling_friendly}}},
          {"modes", modes}};
}

RepresentativeTrip load_representative_trip(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("file not found: " + path.string());
  try {
    return trip_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ModeProbabilities scenario_probabilities(const RepresentativeTrip& trip,
                                         const ParameterVector& params, const ModelSpec& spec,
                                         double integration_sd_units) {
  if (spec.mixed()) throw SpecError("scenarios use closed-form MNL probabilities; got a mixed spec");
  PersonProfile person = trip.person;
  person.integration_centred = integration_sd_units * trip.integration_sd;
  ModeUtilities v{};
  ModeAvailability avail{};
  for (Mode m : kRpModes) {
    if (!trip.trip.available(m)) continue;
    const AltDesign d = design_row(trip.trip, person, spec, m);
    v[index_of(m)] = d.linear_utility(params) + params[ParamId::Time] * d.time_s +
                     params[ParamId::Cost] * d.cost_s;
    avail[index_of(m)] = true;
  }
  return choice_probabilities(v, avail);
}

double transit_share(const ModeProbabilities& p) {
  return p[index_of(Mode::Bus)] + p[index_of(Mode::Subway)] + p[index_of(Mode::Train)];
}

namespace {

void check_grid(const std::vector<double>& grid, const char* lever) {
  if (grid.empty()) throw SpecError(std::string(lever) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw SpecError(std::string(lever) + " grid must be nonnegative");
    if (i > 0 && grid[i] > grid[i - 1]) throw SpecError(std::string(lever) + " grid must be decreasing");
  }
}

template <class Apply>
SweepTable sweep(const char* lever, const RepresentativeTrip& trip, const ParameterVector& params,
                 const ModelSpec& spec, const std::vector<double>& grid,
                 const std::vector<double>& levels, Apply apply) {
  check_grid(grid, lever);
  SweepTable t;
  t.lever = lever;
  t.lever_values = grid;
  t.levels_sd = levels;
  for (double value : grid) {
    RepresentativeTrip modified = trip;
    for (Mode m : {Mode::Bus, Mode::Subway, Mode::Train}) {
      if (modified.trip.available(m)) apply(modified.trip.at(m), value);
    }
    std::vector<double> row;
    for (double level : levels) {
      row.push_back(100.0 * transit_share(scenario_probabilities(modified, params, spec, level)));
    }
    t.transit_pct.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < levels.size(); ++c) {
    t.gain_pp.push_back(t.transit_pct.back()[c] - t.transit_pct.front()[c]);
  }
  return t;
}

}  // namespace

SweepTable sweep_fare(const RepresentativeTrip& trip, const ParameterVector& params,
                      const ModelSpec& spec, const std::vector<double>& fare_grid,
                      const std::vector<double>& levels_sd) {
  return sweep("fare", trip, params, spec, fare_grid, levels_sd,
               [](AlternativeAttributes& a, double v) { a.cost = v; });
}

SweepTable sweep_access(const RepresentativeTrip& trip, const ParameterVector& params,
                        const ModelSpec& spec, const std::vector<double>& access_grid,
                        const std::vector<double>& levels_sd) {
  return sweep("access", trip, params, spec, access_grid, levels_sd,
               [](AlternativeAttributes& a, double v) { a.walk_access = v; });
}

GradientCurve integration_gradient(const RepresentativeTrip& trip, const ParameterVector& params,
                                   const ModelSpec& spec, double from_sd, double to_sd, int steps) {
  if (!spec.includes(ParamId::IntegPt)) throw SpecError("integration gradient needs beta_integ_pt in the spec");
  if (steps < 2) throw SpecError("integration gradient needs at least 2 steps");
  GradientCurve c;
  for (int i = 0; i < steps; ++i) {
    const double level = from_sd + (to_sd - from_sd) * i / (steps - 1);
    const ModeProbabilities p = scenario_probabilities(trip, params, spec, level);
    c.level_sd.push_back(level);
    c.probabilities.push_back(p);
    c.transit.push_back(transit_share(p));
    c.car_transit_gap.push_back(transit_share(p) - p[index_of(Mode::Car)]);
  }
  return c;
}

nlohmann::json to_json(const SweepTable& t) {
  return {{"lever", t.lever},
          {"lever_values", t.lever_values},
          {"levels_sd", t.levels_sd},
          {"transit_pct", t.transit_pct},
          {"gain_pp", t.gain_pp}};
}

nlohmann::json to_json(const GradientCurve& c) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < c.level_sd.size(); ++i) {
    nlohmann::json probs = nlohmann::json::object();
    for (Mode m : kRpModes) probs[std::string(to_string(m))] = c.probabilities[i][index_of(m)];
    steps.push_back({{"step", i},
                     {"level_sd", c.level_sd[i]},
                     {"probabilities", probs},
                     {"transit", c.transit[i]},
                     {"car_transit_gap", c.car_transit_gap[i]}});
  }
  return {{"steps", steps}};
}

}  // namespace tripchoice
