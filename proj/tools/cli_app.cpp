#include "cli_app.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "tripchoice/analysis.hpp"
#include "tripchoice/choice_data.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/joint_rpsp.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/pipeline/runner.hpp"
#include "tripchoice/report.hpp"
#include "tripchoice/scenario.hpp"
#include "tripchoice/synth.hpp"
#include "tripchoice/validation.hpp"

#ifndef TRIPCHOICE_VERSION
#define TRIPCHOICE_VERSION "unknown"
#endif

namespace tripchoice::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error([&] {
        std::string m = "invalid configuration (" + std::to_string(issues.size()) + " problem" +
                        (issues.size() == 1 ? "" : "s") + ")";
        for (const auto& i : issues) m += "\n  " + i.path + ": " + i.message;
        return m;
      }()),
      issues_(std::move(issues)) {}

json error_record(const std::string& command, const std::string& kind, const std::string& message,
                  const std::vector<ConfigIssue>& issues) {
  json list = json::array();
  for (const auto& i : issues) list.push_back({{"path", i.path}, {"message", i.message}});
  return {{"status", "error"}, {"command", command}, {"kind", kind}, {"message", message}, {"issues", list}};
}

std::string config_hash(const json& effective_config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : effective_config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Typed access to the config document that records problems instead of
// stopping at the first one.
class Config {
 public:
  Config(json root, fs::path base) : root_(std::move(root)), base_(std::move(base)) {}

  json& root() { return root_; }
  const std::vector<ConfigIssue>& issues() const { return issues_; }
  void issue(std::string path, std::string message) { issues_.push_back({std::move(path), std::move(message)}); }

  const json* find(const std::string& path) const {
    const json* node = &root_;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
      if (!node->is_object() || !node->contains(part)) return nullptr;
      node = &(*node)[part];
    }
    return node;
  }

  bool has(const std::string& path) const { return find(path) != nullptr; }

  template <class T>
  T get(const std::string& path, T fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    try {
      return n->get<T>();
    } catch (const json::exception&) {
      issue(path, "expected " + type_name<T>() + ", got " + std::string(n->type_name()));
      return fallback;
    }
  }

  double number(const std::string& path, double fallback, double lo, double hi) {
    const double v = get<double>(path, fallback);
    if (has(path) && !(v >= lo && v <= hi)) {
      issue(path, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "], got " + fmt(v));
      return fallback;
    }
    return v;
  }

  int integer(const std::string& path, int fallback, int lo, int hi) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_number_integer()) {
      issue(path, "expected integer, got " + std::string(n->type_name()));
      return fallback;
    }
    const auto v = n->get<long long>();
    if (v < lo || v > hi) {
      issue(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v));
      return fallback;
    }
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const std::string& path, std::vector<double> fallback) {
    const json* n = find(path);
    if (!n) return fallback;
    if (!n->is_array() || n->empty() || !std::all_of(n->begin(), n->end(), [](const json& x) { return x.is_number(); })) {
      issue(path, "expected a non-empty array of numbers");
      return fallback;
    }
    return n->get<std::vector<double>>();
  }

  /// Resolved path of an input file; missing or absent files are recorded.
  std::optional<fs::path> input_file(const std::string& path, bool required) {
    const json* n = find(path);
    if (!n) {
      if (required) issue(path, "required file path is missing");
      return std::nullopt;
    }
    if (!n->is_string() || n->get<std::string>().empty()) {
      issue(path, "expected a file path string");
      return std::nullopt;
    }
    const fs::path p = resolve(n->get<std::string>());
    if (!fs::is_regular_file(p)) {
      issue(path, "file not found: " + p.string());
      return std::nullopt;
    }
    return p;
  }

  std::vector<fs::path> input_files(const std::string& path) {
    std::vector<fs::path> out;
    const json* n = find(path);
    if (!n) return out;
    if (!n->is_array()) {
      issue(path, "expected an array of file paths");
      return out;
    }
    for (std::size_t i = 0; i < n->size(); ++i) {
      const json& e = (*n)[i];
      const std::string where = path + "[" + std::to_string(i) + "]";
      if (!e.is_string()) {
        issue(where, "expected a file path string");
        continue;
      }
      const fs::path p = resolve(e.get<std::string>());
      if (!fs::is_regular_file(p)) issue(where, "file not found: " + p.string());
      else out.push_back(p);
    }
    return out;
  }

  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : base_ / path;
  }

  void allow_keys(const std::string& path, const std::set<std::string>& keys) {
    const json* n = path.empty() ? &root_ : find(path);
    if (!n) return;
    if (!n->is_object()) {
      issue(path, "expected an object");
      return;
    }
    for (const auto& [k, v] : n->items()) {
      if (!keys.contains(k)) issue(path.empty() ? k : path + "." + k, "unknown key");
    }
  }

  void check() const {
    if (!issues_.empty()) throw ConfigError(issues_);
  }

 private:
  template <class T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "boolean";
    else if constexpr (std::is_arithmetic_v<T>) return "number";
    else if constexpr (std::is_same_v<T, std::string>) return "string";
    else return "value";
  }
  static std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

  json root_;
  fs::path base_;
  std::vector<ConfigIssue> issues_;
};

struct Context {
  std::string command;
  Config cfg;
  Overrides overrides;
  fs::path out_dir;
  std::uint64_t seed = 1;
  int workers = 1;
  json artifacts = json::array();
  std::ostream& out;
};

void write_text(Context& c, const std::string& name, const std::string& text) {
  const fs::path p = c.out_dir / name;
  std::ofstream f(p);
  if (!f) throw DataError("cannot write " + p.string());
  f << text;
  c.artifacts.push_back(name);
}

void write_json(Context& c, const std::string& name, const json& j) { write_text(c, name, j.dump(2) + "\n"); }

OptimizerOptions optimizer_options(Config& cfg) {
  OptimizerOptions o;
  cfg.allow_keys("optimizer", {"gradient_tolerance", "relative_tolerance", "max_iterations"});
  o.gradient_tolerance = cfg.number("optimizer.gradient_tolerance", o.gradient_tolerance, 1e-14, 1.0);
  o.relative_tolerance = cfg.number("optimizer.relative_tolerance", o.relative_tolerance, 0.0, 1.0);
  o.max_iterations = cfg.integer("optimizer.max_iterations", o.max_iterations, 1, 1000000);
  return o;
}

// Spec from "spec" (file) or "model" (preset name), with draw/cap overrides.
std::optional<ModelSpec> model_spec(Context& c) {
  Config& cfg = c.cfg;
  std::optional<ModelSpec> spec;
  if (cfg.has("spec")) {
    if (const auto p = cfg.input_file("spec", true)) {
      try {
        spec = load_model_spec(*p);
      } catch (const Error& e) {
        cfg.issue("spec", e.what());
      }
    }
  } else if (cfg.has("model")) {
    try {
      spec = preset_spec(parse_spec_kind(cfg.get<std::string>("model", "")));
    } catch (const Error& e) {
      cfg.issue("model", e.what());
    }
  } else {
    cfg.issue("spec", "a model spec file (spec) or preset name (model) is required");
  }
  const int draws = c.overrides.draws ? *c.overrides.draws : cfg.integer("draws", -1, 1, 100000000);
  const int cap = c.overrides.trip_cap ? *c.overrides.trip_cap : cfg.integer("trip_cap", -1, 0, 100000000);
  if (c.overrides.draws && *c.overrides.draws < 1) cfg.issue("--draws", "must be positive");
  if (c.overrides.trip_cap && *c.overrides.trip_cap < 0) cfg.issue("--trip-cap", "must be >= 0");
  if (spec) {
    if (draws > 0) spec->draws = draws;
    if (cap >= 0) spec->trip_cap = cap;
  }
  return spec;
}

struct DataPaths {
  std::optional<fs::path> observations;
  std::optional<fs::path> persons;
};

DataPaths data_paths(Config& cfg) {
  cfg.allow_keys("data", {"observations", "persons"});
  if (!cfg.has("data")) cfg.issue("data", "required section is missing");
  return {cfg.input_file("data.observations", true), cfg.input_file("data.persons", true)};
}

std::optional<ParameterVector> start_from_result(Config& cfg, const std::string& key) {
  const auto p = cfg.input_file(key, false);
  if (!p) return std::nullopt;
  try {
    return load_result(*p).estimates;
  } catch (const Error& e) {
    cfg.issue(key, e.what());
  }
  return std::nullopt;
}

// --- pipeline ------------------------------------------------------------

void cmd_pipeline(Context& c) {
  Config& cfg = c.cfg;
  cfg.allow_keys("pipeline", {"events", "survey", "routing", "weather", "provider_seed", "cache_dir", "fares",
                              "wmo", "screening", "anchors", "decomposition", "trip_break_min", "gate_window_days",
                              "min_trip_km"});
  if (!cfg.has("pipeline")) cfg.issue("pipeline", "required section is missing");
  const auto events = cfg.input_file("pipeline.events", true);
  const auto survey = cfg.input_file("pipeline.survey", true);
  const auto fares_path = cfg.input_file("pipeline.fares", false);
  const auto wmo_path = cfg.input_file("pipeline.wmo", false);
  for (const char* key : {"pipeline.routing", "pipeline.weather"}) {
    const std::string v = cfg.get<std::string>(key, "synthetic");
    if (v != "synthetic") cfg.issue(key, "unsupported provider '" + v + "' (available: synthetic)");
  }
  const auto provider_seed = cfg.get<std::uint64_t>("pipeline.provider_seed", c.seed);
  pipeline::PipelineConfig pc;
  pc.workers = c.workers;
  cfg.allow_keys("pipeline.screening", {"max_speed_mps", "zero_variance_run", "repeat_threshold", "max_removed_share"});
  pc.screening.max_speed_mps = cfg.number("pipeline.screening.max_speed_mps", pc.screening.max_speed_mps, 1.0, 1e4);
  pc.screening.zero_variance_run =
      static_cast<std::size_t>(cfg.integer("pipeline.screening.zero_variance_run", 3, 2, 1000000));
  pc.screening.repeat_threshold =
      static_cast<std::size_t>(cfg.integer("pipeline.screening.repeat_threshold", 5, 2, 1000000));
  pc.screening.max_removed_share =
      cfg.number("pipeline.screening.max_removed_share", pc.screening.max_removed_share, 0.0, 1.0);
  cfg.allow_keys("pipeline.anchors", {"radius_m", "min_stays", "min_days", "home_night_hours", "home_nights",
                                      "home_first_last", "work_day_hours", "work_days", "work_regularity",
                                      "min_workdays"});
  auto& a = pc.anchors;
  a.radius_m = cfg.number("pipeline.anchors.radius_m", a.radius_m, 1.0, 1e5);
  a.min_stays = static_cast<std::size_t>(cfg.integer("pipeline.anchors.min_stays", 3, 1, 1000000));
  a.min_days = cfg.integer("pipeline.anchors.min_days", a.min_days, 1, 100000);
  a.home_night_hours = cfg.number("pipeline.anchors.home_night_hours", a.home_night_hours, 0.0, 1.0);
  a.home_nights = cfg.number("pipeline.anchors.home_nights", a.home_nights, 0.0, 1.0);
  a.home_first_last = cfg.number("pipeline.anchors.home_first_last", a.home_first_last, 0.0, 1.0);
  a.work_day_hours = cfg.number("pipeline.anchors.work_day_hours", a.work_day_hours, 0.0, 1.0);
  a.work_days = cfg.number("pipeline.anchors.work_days", a.work_days, 0.0, 1.0);
  a.work_regularity = cfg.number("pipeline.anchors.work_regularity", a.work_regularity, 0.0, 1.0);
  a.min_workdays = cfg.integer("pipeline.anchors.min_workdays", a.min_workdays, 1, 100000);
  cfg.allow_keys("pipeline.decomposition", {"max_gap_m", "max_gap_min", "teleport_mps"});
  auto& d = pc.decomposition;
  d.max_gap_m = cfg.number("pipeline.decomposition.max_gap_m", d.max_gap_m, 0.0, 1e5);
  d.max_gap_min = cfg.number("pipeline.decomposition.max_gap_min", d.max_gap_min, 0.0, 1e4);
  d.teleport_mps = cfg.number("pipeline.decomposition.teleport_mps", d.teleport_mps, 1.0, 1e4);
  pc.trip_break_min = cfg.number("pipeline.trip_break_min", pc.trip_break_min, 0.0, 1e4);
  pc.gate_window_days = cfg.number("pipeline.gate_window_days", pc.gate_window_days, 0.0, 1e4);
  pc.min_trip_km = cfg.number("pipeline.min_trip_km", pc.min_trip_km, 0.0, 1e4);

  pipeline::FareTable fares;
  pipeline::WmoTable wmo = pipeline::default_wmo_table();
  if (fares_path) {
    try {
      fares = pipeline::load_fare_table(*fares_path);
    } catch (const Error& e) {
      cfg.issue("pipeline.fares", e.what());
    }
  }
  if (wmo_path) {
    try {
      wmo = pipeline::load_wmo_table(*wmo_path);
    } catch (const Error& e) {
      cfg.issue("pipeline.wmo", e.what());
    }
  }
  cfg.check();

  const fs::path cache_dir = cfg.has("pipeline.cache_dir")
                                 ? cfg.resolve(cfg.get<std::string>("pipeline.cache_dir", ""))
                                 : c.out_dir / "cache";
  pipeline::SyntheticRoutingProvider routing_base(provider_seed);
  pipeline::SyntheticWeatherProvider weather_base(provider_seed);
  pipeline::CachingRoutingProvider routing(routing_base, cache_dir / "routes.json");
  pipeline::CachingWeatherProvider weather(weather_base, cache_dir / "weather.json");

  const auto ev = pipeline::read_events(*events);
  const auto people = persons_from_table(read_table(*survey), false);
  const pipeline::PipelineOutput res = pipeline::run_pipeline(ev, people, routing, weather, fares, wmo, pc);
  pipeline::write_pipeline_outputs(c.out_dir, res);
  for (const char* f : {"observations.csv", "persons.csv", "trips.csv", "screening.csv", "anchors.csv"}) {
    c.artifacts.push_back(f);
  }
  routing.save();
  weather.save();
  std::string warnings;
  for (const auto& w : res.warnings) warnings += w + "\n";
  write_text(c, "warnings.txt", warnings);
  std::size_t rejected = 0;
  for (const auto& s : res.screening) rejected += s.rejected ? 1 : 0;
  c.out << "pipeline: " << res.data.num_persons() << " persons, " << res.data.num_observations()
        << " observations, " << rejected << " rejected records, " << res.warnings.size() << " warnings\n";
}

// --- estimate ------------------------------------------------------------

void cmd_estimate(Context& c) {
  Config& cfg = c.cfg;
  const DataPaths dp = data_paths(cfg);
  auto spec = model_spec(c);
  EstimationOptions opt;
  opt.optimizer = optimizer_options(cfg);
  opt.seed = c.seed;
  opt.workers = c.workers;
  cfg.allow_keys("estimation", {"start_result", "freeze", "balanced_subsample", "numeric_mxl_gradient"});
  opt.numeric_mxl_gradient = cfg.get<bool>("estimation.numeric_mxl_gradient", false);
  const bool balanced = cfg.get<bool>("estimation.balanced_subsample", false);
  const auto start = start_from_result(cfg, "estimation.start_result");
  std::vector<ParamId> freeze;
  for (const auto& name : cfg.get<std::vector<std::string>>("estimation.freeze", {})) {
    if (const auto p = find_param(name)) freeze.push_back(*p);
    else cfg.issue("estimation.freeze", "unknown parameter '" + name + "'");
  }
  if (!freeze.empty() && !start) cfg.issue("estimation.freeze", "frozen parameters need estimation.start_result");
  if (balanced && spec && !spec->joint()) cfg.issue("estimation.balanced_subsample", "requires a joint RP-SP spec");
  cfg.check();

  Dataset data = load_dataset(*dp.observations, *dp.persons);
  if (balanced) data = balanced_subsample(data);
  if (start) {
    ParameterVector s = start_values(*spec);
    for (ParamId p : s.ids()) {
      if (start->has(p)) s.set(p, (*start)[p]);
    }
    for (ParamId p : freeze) {
      if (!s.has(p)) throw SpecError("estimation.freeze: parameter '" + std::string(param_name(p)) + "' not in spec");
      s.freeze(p);
    }
    opt.start = s;
  }
  const EstimationResult r = estimate(data, *spec, opt);
  save_result(c.out_dir / "result.json", r);
  c.artifacts.push_back("result.json");
  write_text(c, "parameters.txt", parameter_table({r}));
  write_text(c, "parameters.csv", parameter_csv({r}));
  write_text(c, "fit.txt", fit_table({r}));
  write_text(c, "vot.txt", vot_table(vot_summary(r)));
  c.out << parameter_table({r}) << "\n" << fit_table({r});
  for (const auto& w : r.warnings) c.out << "warning: " << w << "\n";
}

// --- cv ------------------------------------------------------------------

void cmd_cv(Context& c) {
  Config& cfg = c.cfg;
  const DataPaths dp = data_paths(cfg);
  auto spec = model_spec(c);
  EstimationOptions opt;
  opt.optimizer = optimizer_options(cfg);
  opt.seed = c.seed;
  opt.workers = c.workers;
  cfg.allow_keys("cv", {"folds", "start_result"});
  const int folds = cfg.integer("cv.folds", 5, 2, 1000);
  const auto start = start_from_result(cfg, "cv.start_result");
  cfg.check();
  const Dataset data = load_dataset(*dp.observations, *dp.persons);
  const CvReport rep = cross_validate(data, *spec, folds, c.seed, opt, start ? &*start : nullptr);
  write_json(c, "cv.json", to_json(rep));
  char buf[160];
  std::snprintf(buf, sizeof buf, "cv: %d folds, mean accuracy %.4f (sd %.4f)\n", folds, rep.mean, rep.sd);
  c.out << buf;
}

// --- scenario ------------------------------------------------------------

void cmd_scenario(Context& c) {
  Config& cfg = c.cfg;
  cfg.allow_keys("scenario", {"result", "reference", "trip", "fare_grid", "access_grid", "levels_sd", "gradient"});
  std::optional<EstimationResult> result;
  std::optional<SpecKind> reference;
  if (cfg.has("scenario.result")) {
    if (const auto p = cfg.input_file("scenario.result", true)) {
      try {
        result = load_result(*p);
      } catch (const Error& e) {
        cfg.issue("scenario.result", e.what());
      }
    }
  } else {
    try {
      reference = parse_spec_kind(cfg.get<std::string>("scenario.reference", "M3"));
    } catch (const Error& e) {
      cfg.issue("scenario.reference", e.what());
    }
  }
  RepresentativeTrip trip = default_representative_trip();
  if (const auto p = cfg.input_file("scenario.trip", false)) {
    try {
      trip = load_representative_trip(*p);
    } catch (const Error& e) {
      cfg.issue("scenario.trip", e.what());
    }
  }
  const auto fare_grid = cfg.numbers("scenario.fare_grid", {3.25, 2.50, 1.50, 0.75, 0.0});
  const auto access_grid = cfg.numbers("scenario.access_grid", {15.0, 10.0, 5.0, 0.0});
  const auto levels = cfg.numbers("scenario.levels_sd", {-1.0, 0.0, 1.0});
  cfg.allow_keys("scenario.gradient", {"from_sd", "to_sd", "steps"});
  const double from = cfg.get<double>("scenario.gradient.from_sd", -1.0);
  const double to = cfg.get<double>("scenario.gradient.to_sd", 1.0);
  const int steps = cfg.integer("scenario.gradient.steps", 21, 2, 100000);
  cfg.check();

  ModelSpec spec = result ? preset_spec(result->kind) : preset_spec(*reference);
  ParameterVector params = result ? result->estimates : reference_estimates(*reference);
  if (result) {
    spec.included = params.present();
    spec.name = result->spec_name;
  }
  const SweepTable fare = sweep_fare(trip, params, spec, fare_grid, levels);
  const SweepTable access = sweep_access(trip, params, spec, access_grid, levels);
  write_text(c, "fare.txt", sweep_text(fare));
  write_text(c, "fare.csv", sweep_csv(fare));
  write_text(c, "access.txt", sweep_text(access));
  write_text(c, "access.csv", sweep_csv(access));
  json j = {{"fare", to_json(fare)}, {"access", to_json(access)}};
  if (spec.includes(ParamId::IntegPt)) {
    const GradientCurve g = integration_gradient(trip, params, spec, from, to, steps);
    write_text(c, "gradient.csv", gradient_csv(g));
    j["gradient"] = to_json(g);
  }
  write_json(c, "scenario.json", j);
  c.out << sweep_text(fare) << "\n" << sweep_text(access);
}

// --- synth ---------------------------------------------------------------

void cmd_synth(Context& c) {
  Config& cfg = c.cfg;
  cfg.allow_keys("synth", {"persons", "rp_per_person", "sp_per_person", "noise", "truth", "recover", "marginals"});
  auto spec = model_spec(c);
  const int persons = cfg.integer("synth.persons", 100, 0, 10000000);
  SimulationOptions so;
  so.rp_per_person = static_cast<std::size_t>(cfg.integer("synth.rp_per_person", 100, 0, 1000000));
  so.sp_per_person = static_cast<std::size_t>(cfg.integer("synth.sp_per_person", 0, 0, 1000000));
  so.noise = cfg.get<bool>("synth.noise", true);
  so.seed = c.seed;
  const bool recover = cfg.get<bool>("synth.recover", false);
  CovariateMarginals marg;
  cfg.allow_keys("synth.marginals", {"migrant", "full_time", "student", "child_0_10", "safe", "cycling_friendly",
                                     "car_owned", "bike_owned"});
  for (auto [key, field] : std::initializer_list<std::pair<const char*, double CovariateMarginals::*>>{
           {"migrant", &CovariateMarginals::migrant},
           {"full_time", &CovariateMarginals::full_time},
           {"student", &CovariateMarginals::student},
           {"child_0_10", &CovariateMarginals::child_0_10},
           {"safe", &CovariateMarginals::safe},
           {"cycling_friendly", &CovariateMarginals::cycling_friendly},
           {"car_owned", &CovariateMarginals::car_owned},
           {"bike_owned", &CovariateMarginals::bike_owned}}) {
    marg.*field = cfg.number(std::string("synth.marginals.") + key, marg.*field, 0.0, 1.0);
  }
  std::optional<ParameterVector> truth;
  if (cfg.has("synth.truth")) truth = start_from_result(cfg, "synth.truth");
  cfg.check();

  ParameterVector params = truth ? *truth : reference_estimates(spec->kind);
  const auto people = generate_population(static_cast<std::size_t>(persons), marg, c.seed);
  const Dataset data = simulate_choices(people, params, *spec, so);
  fs::create_directories(c.out_dir / "data");
  write_table(c.out_dir / "data" / "observations.csv", observations_table(data));
  write_table(c.out_dir / "data" / "persons.csv", persons_table(data));
  c.artifacts.push_back("data/observations.csv");
  c.artifacts.push_back("data/persons.csv");
  json tj = json::object();
  for (ParamId p : params.ids()) tj[std::string(param_name(p))] = params[p];
  write_json(c, "truth.json", {{"spec", spec_to_json(*spec)}, {"parameters", tj}});
  c.out << "synth: " << data.num_persons() << " persons, " << data.count(Source::RP) << " RP and "
        << data.count(Source::SP) << " SP observations\n";
  if (!recover) return;
  EstimationOptions opt;
  opt.optimizer = optimizer_options(cfg);
  opt.seed = c.seed;
  opt.workers = c.workers;
  const EstimationResult r = estimate(data, *spec, opt);
  save_result(c.out_dir / "result.json", r);
  c.artifacts.push_back("result.json");
  std::string csv = "parameter,truth,estimate,bias,z,flagged\n";
  std::size_t flagged = 0;
  for (const auto& row : recovery_report(params, r)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.3f,%d\n", std::string(param_name(row.id)).c_str(),
                  row.truth, row.estimate, row.bias, row.z, row.flagged ? 1 : 0);
    csv += buf;
    flagged += row.flagged ? 1 : 0;
  }
  write_text(c, "recovery.csv", csv);
  c.out << "recovery: " << flagged << " parameters with |z| > 3\n";
}

// --- report --------------------------------------------------------------

void cmd_report(Context& c) {
  Config& cfg = c.cfg;
  cfg.allow_keys("report", {"results", "cv"});
  const auto result_files = cfg.input_files("report.results");
  const auto cv_files = cfg.input_files("report.cv");
  if (!cv_files.empty() && cv_files.size() != result_files.size()) {
    cfg.issue("report.cv", "needs one CV report per result file");
  }
  cfg.check();
  std::vector<EstimationResult> results;
  for (const auto& p : result_files) results.push_back(load_result(p));
  std::vector<CvReport> cvs;
  for (const auto& p : cv_files) {
    std::ifstream in(p);
    const json j = json::parse(in);
    CvReport r;
    r.mean = j.at("mean").get<double>();
    r.sd = j.at("sd").get<double>();
    r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
    cvs.push_back(r);
  }
  std::vector<const CvReport*> cv_ptrs;
  for (const auto& r : cvs) cv_ptrs.push_back(&r);
  std::vector<VotRow> vot;
  for (const auto& r : results) {
    for (auto& row : vot_summary(r)) vot.push_back(std::move(row));
  }
  const std::string params = parameter_table(results);
  const std::string fit = fit_table(results, cv_ptrs);
  const std::string vt = vot_table(vot);
  write_text(c, "parameters.txt", params);
  write_text(c, "parameters.csv", parameter_csv(results));
  write_text(c, "fit.txt", fit);
  write_text(c, "vot.txt", vt);
  c.out << params << "\n" << fit << "\n" << vt;
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> m = {
      {"pipeline", cmd_pipeline}, {"estimate", cmd_estimate}, {"cv", cmd_cv},
      {"scenario", cmd_scenario}, {"synth", cmd_synth},       {"report", cmd_report}};
  return m;
}

json versions() {
  return {{"tripchoice", TRIPCHOICE_VERSION},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

int fail(const std::string& command, const fs::path* out_dir, const json& record, std::ostream& err, int code) {
  err << record.dump() << "\n";
  if (out_dir && fs::is_directory(*out_dir)) {
    std::ofstream(*out_dir / "error.json") << record.dump(2) << "\n";
  }
  (void)command;
  return code;
}

}  // namespace

int run(const std::string& command, const std::optional<fs::path>& config_path, const Overrides& ov,
        std::ostream& out, std::ostream& err) {
  const auto it = commands().find(command);
  if (it == commands().end()) {
    return fail(command, nullptr, error_record(command, "usage", "unknown subcommand '" + command + "'"), err, 64);
  }
  json root = json::object();
  fs::path base = fs::current_path();
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) {
      return fail(command, nullptr,
                  error_record(command, "config", "invalid configuration",
                               {{"--config", "file not found: " + config_path->string()}}),
                  err, 2);
    }
    try {
      root = json::parse(in);
    } catch (const json::parse_error& e) {
      return fail(command, nullptr,
                  error_record(command, "config", "invalid configuration", {{"--config", e.what()}}), err, 2);
    }
    if (!root.is_object()) {
      return fail(command, nullptr,
                  error_record(command, "config", "invalid configuration",
                               {{"--config", "top level must be an object"}}),
                  err, 2);
    }
    base = fs::absolute(*config_path).parent_path();
  }

  Context c{command, Config(root, base), ov, {}, 1, 1, json::array(), out};
  Config& cfg = c.cfg;
  cfg.allow_keys("", {"data", "spec", "model", "draws", "trip_cap", "seed", "workers", "out", "optimizer",
                      "estimation", "pipeline", "cv", "scenario", "synth", "report"});
  c.seed = ov.seed ? *ov.seed : cfg.get<std::uint64_t>("seed", 1);
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  c.workers = ov.workers ? *ov.workers : cfg.integer("workers", hw, 1, 4096);
  if (ov.workers && *ov.workers < 1) cfg.issue("--workers", "must be at least 1");
  c.out_dir = ov.out ? *ov.out : cfg.has("out") ? cfg.resolve(cfg.get<std::string>("out", "")) : fs::path("runs") / command;

  // Effective config: the document with the flag overrides applied.
  json effective = root;
  effective["seed"] = c.seed;
  effective["workers"] = c.workers;
  if (ov.draws) effective["draws"] = *ov.draws;
  if (ov.trip_cap) effective["trip_cap"] = *ov.trip_cap;

  try {
    fs::create_directories(c.out_dir);
    it->second(c);
    json manifest = {{"command", command},
                     {"config", config_path ? fs::absolute(*config_path).string() : ""},
                     {"config_hash", config_hash(effective)},
                     {"effective_config", effective},
                     {"seed", c.seed},
                     {"workers", c.workers},
                     {"versions", versions()},
                     {"artifacts", c.artifacts}};
    std::ofstream(c.out_dir / "manifest.json") << manifest.dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    return fail(command, &c.out_dir, error_record(command, "config", "invalid configuration", e.issues()), err, 2);
  } catch (const DataError& e) {
    return fail(command, &c.out_dir, error_record(command, "data", e.what()), err, 3);
  } catch (const SpecError& e) {
    return fail(command, &c.out_dir, error_record(command, "spec", e.what()), err, 3);
  } catch (const Error& e) {
    return fail(command, &c.out_dir, error_record(command, "runtime", e.what()), err, 1);
  } catch (const std::exception& e) {
    return fail(command, &c.out_dir, error_record(command, "internal", e.what()), err, 1);
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Travel mode choice estimation toolkit", "tripchoice"};
  app.require_subcommand(1);
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> draws, trip_cap, workers;
  std::optional<std::string> out;
  const std::map<std::string, std::string> help = {
      {"pipeline", "GPS events and survey -> choice data files"},
      {"estimate", "estimate M1-M4 on choice data"},
      {"cv", "k-fold cross-validation report"},
      {"scenario", "fare, access and integration scenario tables"},
      {"synth", "generate synthetic choice data, optionally re-estimate"},
      {"report", "render parameter, fit and VOT tables from result files"}};
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--draws", draws, "Halton draws for mixed logit");
    sub->add_option("--trip-cap", trip_cap, "per-person RP trip cap (0 disables)");
    sub->add_option("--workers", workers, "worker threads (default: available cores)");
    sub->add_option("--out", out, "run directory");
  }
  if (argc > 1 && argv[1][0] != '-' &&
      std::find(kCommands.begin(), kCommands.end(), std::string(argv[1])) == kCommands.end()) {
    std::cerr << error_record(argv[1], "usage", "unknown subcommand '" + std::string(argv[1]) + "'").dump() << "\n";
    return 64;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_record(argc > 1 ? argv[1] : "", "usage", e.what()).dump() << "\n";
    return 64;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  Overrides ov{seed, draws, trip_cap, workers, out ? std::optional<fs::path>(*out) : std::nullopt};
  return run(command, config ? std::optional<fs::path>(*config) : std::nullopt, ov, std::cout, std::cerr);
}

}  // namespace tripchoice::cli
