#include "tripchoice/validation.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "tripchoice/analysis.hpp"
#include "tripchoice/errors.hpp"
#include "tripchoice/mxl.hpp"

namespace tripchoice {

std::vector<int> make_folds(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw SpecError("cross-validation needs at least 2 folds");
  std::vector<int> fold(data.num_observations(), -1);
  for (std::size_t n = 0; n < data.num_persons(); ++n) {
    const auto obs = data.observations_of(n);
    std::vector<std::size_t> rp;
    for (std::size_t t = 0; t < obs.size(); ++t) {
      if (obs[t].source == Source::RP) rp.push_back(data.offset_of(n) + t);
    }
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + n);
    for (std::size_t i = rp.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(rp[i - 1], rp[pick(rng)]);
    }
    for (std::size_t i = 0; i < rp.size(); ++i) fold[rp[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  return fold;
}

Mode predict_mode(const ChoiceObservation& obs, const PersonProfile& person,
                  const ParameterVector& params, const ModelSpec& spec) {
  double beta_time = params[ParamId::Time];
  double beta_cost = params[ParamId::Cost];
  if (spec.mixed()) {
    beta_time = params[ParamId::MuTime] + (person.migrant ? params[ParamId::DeltaMig] : 0.0);
    beta_cost = population_mean_cost(params[ParamId::MuCost], params[ParamId::SigmaCost]);
  }
  Mode best = Mode::Car;
  double best_v = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (Mode m : kRpModes) {
    if (!obs.available(m)) continue;
    const AltDesign d = design_row(obs, person, spec, m);
    const double v = d.linear_utility(params) + beta_time * d.time_s + beta_cost * d.cost_s;
    if (!any || v > best_v) {
      best = m;
      best_v = v;
      any = true;
    }
  }
  if (!any) throw DataError("observation " + obs.obs_id + " has no available RP alternative");
  return best;
}

double prediction_accuracy(const Dataset& data, const ParameterVector& params,
                           const ModelSpec& spec, const std::vector<bool>& test) {
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    const auto& o = data.observations()[i];
    if (o.source != Source::RP || (!test.empty() && !test[i])) continue;
    const auto& person = data.persons()[data.person_of_observation(i)];
    hits += predict_mode(o, person, params, spec) == o.chosen ? 1 : 0;
    ++total;
  }
  if (total == 0) throw DataError("no RP observations to score");
  return static_cast<double>(hits) / static_cast<double>(total);
}

CvReport cross_validate(const Dataset& data, const ModelSpec& spec, int k, std::uint64_t seed,
                        const EstimationOptions& options, const ParameterVector* full_sample) {
  validate_spec(spec);
  const std::vector<int> folds = make_folds(data, k, seed);

  const ParameterVector start = full_sample ? *full_sample : estimate(data, spec, options).estimates;

  std::vector<bool> cap;
  std::optional<DrawMatrix> draws;
  if (spec.mixed()) {
    if (spec.trip_cap > 0) cap = cap_mask(data, static_cast<std::size_t>(spec.trip_cap), options.seed);
    draws = draws_for(data, spec);
  }

  CvReport report;
  for (int f = 0; f < k; ++f) {
    std::vector<bool> train(data.num_observations()), test(data.num_observations());
    std::size_t n_test = 0;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      test[i] = folds[i] == f;
      train[i] = !test[i] && (cap.empty() || cap[i]);
      n_test += test[i] ? 1 : 0;
    }
    report.fold_size.push_back(n_test);
    try {
      const EstimationData compiled = compile(data, spec, train);
      EstimationOptions fold_options = options;
      fold_options.start = start;
      const EstimationResult r = estimate_compiled(compiled, draws ? &*draws : nullptr, fold_options);
      report.fold_params.push_back(r.estimates);
      report.fold_accuracy.push_back(prediction_accuracy(data, r.estimates, spec, test));
      report.fold_errors.emplace_back();
    } catch (const Error& e) {
      report.fold_params.emplace_back();
      report.fold_accuracy.push_back(std::numeric_limits<double>::quiet_NaN());
      report.fold_errors.emplace_back(e.what());
    }
  }

  std::vector<double> ok;
  for (double a : report.fold_accuracy) {
    if (std::isfinite(a)) ok.push_back(a);
  }
  if (!ok.empty()) {
    report.mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
    double ss = 0.0;
    for (double a : ok) ss += (a - report.mean) * (a - report.mean);
    report.sd = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
  } else {
    report.mean = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

nlohmann::json to_json(const CvReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t f = 0; f < report.fold_accuracy.size(); ++f) {
    nlohmann::json params = nlohmann::json::object();
    for (ParamId p : report.fold_params[f].ids()) params[std::string(param_name(p))] = report.fold_params[f][p];
    nlohmann::json entry = {{"fold", f}, {"n_test", report.fold_size[f]}, {"parameters", params}};
    if (report.fold_errors[f].empty()) {
      entry["accuracy"] = report.fold_accuracy[f];
    } else {
      entry["accuracy"] = nullptr;
      entry["error"] = report.fold_errors[f];
    }
    folds.push_back(entry);
  }
  nlohmann::json out = {{"folds", folds}, {"sd", report.sd}};
  out["mean"] = std::isfinite(report.mean) ? nlohmann::json(report.mean) : nlohmann::json(nullptr);
  return out;
}

}  // namespace tripchoice
