#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tripchoice/analysis.hpp"
#include "tripchoice/choice_data.hpp"
#include "tripchoice/csv.hpp"
#include "tripchoice/errors.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/report.hpp"
#include "tripchoice/scenario.hpp"
#include "tripchoice/synth.hpp"
#include "tripchoice/validation.hpp"

namespace py = pybind11;
using namespace tripchoice;

namespace {

using ParamMap = std::map<std::string, double>;

ModelSpec spec_of(const std::string& spec_json) {
  return spec_from_json(nlohmann::json::parse(spec_json));
}

ParameterVector params_of(const ParamMap& m) {
  ParameterVector p;
  for (const auto& [name, value] : m) p.set(parse_param(name), value);
  return p;
}

ParamMap map_of(const ParameterVector& p) {
  ParamMap m;
  for (ParamId id : p.ids()) m.emplace(std::string(param_name(id)), p[id]);
  return m;
}

RepresentativeTrip trip_of(const std::optional<std::string>& trip_json) {
  return trip_json ? trip_from_json(nlohmann::json::parse(*trip_json))
                   : default_representative_trip();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mode choice estimation core";

  auto base = py::register_exception<Error>(m, "TripchoiceError");
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<SpecError>(m, "SpecError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<OptimizationError>(m, "OptimizationError", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("num_persons", &Dataset::num_persons)
      .def_property_readonly("num_observations", &Dataset::num_observations)
      .def_property_readonly("num_rp", [](const Dataset& d) { return d.count(Source::RP); })
      .def_property_readonly("num_sp", [](const Dataset& d) { return d.count(Source::SP); })
      .def("person_ids",
           [](const Dataset& d) {
             std::vector<std::string> ids;
             for (const auto& p : d.persons()) ids.push_back(p.person_id);
             return ids;
           })
      .def("chosen_modes",
           [](const Dataset& d) {
             std::vector<std::string> modes;
             for (const auto& o : d.observations()) modes.emplace_back(to_string(o.chosen));
             return modes;
           })
      .def("save",
           [](const Dataset& d, const std::filesystem::path& observations,
              const std::filesystem::path& persons) {
             write_table(observations, observations_table(d));
             write_table(persons, persons_table(d));
           },
           py::arg("observations"), py::arg("persons"))
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset persons=" + std::to_string(d.num_persons()) +
               " observations=" + std::to_string(d.num_observations()) + ">";
      });

  m.def("load_dataset",
        [](const std::filesystem::path& observations, const std::filesystem::path& persons) {
          return load_dataset(observations, persons);
        },
        py::arg("observations"), py::arg("persons"));

  m.def("preset_spec_json",
        [](const std::string& kind) { return spec_to_json(preset_spec(parse_spec_kind(kind))).dump(); },
        py::arg("kind"));
  m.def("load_spec_json",
        [](const std::filesystem::path& path) { return spec_to_json(load_model_spec(path)).dump(); },
        py::arg("path"));
  m.def("reference_estimates",
        [](const std::string& kind) { return map_of(reference_estimates(parse_spec_kind(kind))); },
        py::arg("kind"));
  m.def("parameter_names", [] {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < kNumParams; ++i) names.emplace_back(param_name(param_at(i)));
    return names;
  });

  m.def("simulate",
        [](const std::string& spec_json, std::size_t n_persons, std::size_t rp_per_person,
           std::size_t sp_per_person, std::uint64_t seed, bool noise,
           const std::optional<ParamMap>& truth) {
          ModelSpec spec = spec_of(spec_json);
          ParameterVector p = truth ? params_of(*truth) : reference_estimates(spec.kind);
          py::gil_scoped_release release;
          auto persons = generate_population(n_persons, CovariateMarginals{}, seed);
          SimulationOptions opt;
          opt.rp_per_person = rp_per_person;
          opt.sp_per_person = sp_per_person;
          opt.noise = noise;
          opt.seed = seed + 1;
          return simulate_choices(persons, p, spec, opt);
        },
        py::arg("spec_json"), py::arg("n_persons"), py::arg("rp_per_person") = 100,
        py::arg("sp_per_person") = 0, py::arg("seed") = 1, py::arg("noise") = true,
        py::arg("truth") = py::none());

  m.def("estimate_json",
        [](const Dataset& data, const std::string& spec_json, int workers,
           std::optional<int> max_iterations, const std::optional<ParamMap>& start) {
          ModelSpec spec = spec_of(spec_json);
          EstimationOptions opt;
          opt.workers = workers;
          if (max_iterations) opt.optimizer.max_iterations = *max_iterations;
          if (start) opt.start = params_of(*start);
          py::gil_scoped_release release;
          return to_json(estimate(data, spec, opt)).dump();
        },
        py::arg("data"), py::arg("spec_json"), py::arg("workers") = 1,
        py::arg("max_iterations") = py::none(), py::arg("start") = py::none());

  m.def("parameter_table",
        [](const std::vector<std::string>& results) {
          std::vector<EstimationResult> rs;
          for (const auto& r : results) rs.push_back(result_from_json(nlohmann::json::parse(r)));
          return parameter_table(rs);
        },
        py::arg("results_json"));

  m.def("vot_mnl",
        [](double beta_time, double beta_access, double beta_cost) {
          VotPair v = vot_mnl(beta_time, beta_access, beta_cost);
          return std::make_pair(v.ivtt, v.walk);
        },
        py::arg("beta_time"), py::arg("beta_access"), py::arg("beta_cost"));
  m.def("vot_ratio_mxl", &vot_ratio_mxl, py::arg("mu_time"), py::arg("delta_mig"));
  m.def("population_mean_cost", &population_mean_cost, py::arg("mu_cost"), py::arg("sigma_cost"));
  m.def("vot_summary_json",
        [](const std::string& result_json) {
          nlohmann::json out = nlohmann::json::array();
          for (const auto& r : vot_summary(result_from_json(nlohmann::json::parse(result_json)))) {
            nlohmann::json row{{"model", r.model}, {"population", r.population},
                               {"ivtt", r.ivtt}, {"walk", r.walk}};
            if (r.has_ratio) row["ratio"] = r.ratio;
            out.push_back(row);
          }
          return out.dump();
        },
        py::arg("result_json"));

  m.def("choice_probabilities",
        [](const std::array<double, kNumModes>& v, const std::array<bool, kNumModes>& available) {
          return choice_probabilities(v, available);
        },
        py::arg("utilities"), py::arg("available"));
  m.def("mode_names", [] {
    std::vector<std::string> names;
    for (Mode md : kAllModes) names.emplace_back(to_string(md));
    return names;
  });

  m.def("sweep_json",
        [](const std::string& lever, const ParamMap& params, const std::string& spec_json,
           const std::vector<double>& grid, const std::vector<double>& levels_sd,
           const std::optional<std::string>& trip_json) {
          ModelSpec spec = spec_of(spec_json);
          RepresentativeTrip trip = trip_of(trip_json);
          ParameterVector p = params_of(params);
          if (lever == "fare") return to_json(sweep_fare(trip, p, spec, grid, levels_sd)).dump();
          if (lever == "access") return to_json(sweep_access(trip, p, spec, grid, levels_sd)).dump();
          throw SpecError("unknown lever: " + lever);
        },
        py::arg("lever"), py::arg("params"), py::arg("spec_json"), py::arg("grid"),
        py::arg("levels_sd") = std::vector<double>{-1.0, 0.0, 1.0},
        py::arg("trip_json") = py::none());

  m.def("integration_gradient_json",
        [](const ParamMap& params, const std::string& spec_json, double from_sd, double to_sd,
           int steps, const std::optional<std::string>& trip_json) {
          return to_json(integration_gradient(trip_of(trip_json), params_of(params),
                                              spec_of(spec_json), from_sd, to_sd, steps))
              .dump();
        },
        py::arg("params"), py::arg("spec_json"), py::arg("from_sd") = -1.0,
        py::arg("to_sd") = 1.0, py::arg("steps") = 21, py::arg("trip_json") = py::none());

  m.def("default_trip_json", [] { return trip_to_json(default_representative_trip()).dump(); });

  m.def("cross_validate_json",
        [](const Dataset& data, const std::string& spec_json, int k, std::uint64_t seed,
           int workers) {
          ModelSpec spec = spec_of(spec_json);
          EstimationOptions opt;
          opt.workers = workers;
          py::gil_scoped_release release;
          return to_json(cross_validate(data, spec, k, seed, opt)).dump();
        },
        py::arg("data"), py::arg("spec_json"), py::arg("k") = 5, py::arg("seed") = 1,
        py::arg("workers") = 1);
}
