// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tripchoice/analysis.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/joint_rpsp.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/mxl.hpp"
#include "tripchoice/optimizer.hpp"
#include "tripchoice/pipeline/transit.hpp"
#include "tripchoice/scenario.hpp"
#include "tripchoice/synth.hpp"
#include "tripchoice/validation.hpp"

using namespace tripchoice;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

// --- closed-form criteria ------------------------------------------------------

Outcome vot_mnl_check() {
  const VotPair m1 = vot_mnl(-0.361, -0.461, -0.766);
  const VotPair m3 = vot_mnl(-0.347, -0.455, -0.801);
  const bool ok = within(m1.ivtt, 28.3, 0.05) && within(m1.walk, 36.1, 0.05) && within(m3.ivtt, 26.0, 0.05) &&
                  within(m3.walk, 34.1, 0.05);
  return {ok, fmt("M1 %.3f / %.3f CAD/h, M3 %.3f / %.3f CAD/h", m1.ivtt, m1.walk, m3.ivtt, m3.walk)};
}

Outcome vot_ratio_check() {
  const double r2 = vot_ratio_mxl(-0.848, 0.556);
  const double r4 = vot_ratio_mxl(-0.798, 0.525);
  return {within(r2, 0.34, 0.005) && within(r4, 0.34, 0.005), fmt("M2 %.4f, M4 %.4f", r2, r4)};
}

Outcome immigrant_mean_check() {
  ParameterVector p;
  p.set(ParamId::MuTime, -0.848);
  p.set(ParamId::DeltaMig, 0.556);
  p.set(ParamId::SigmaTime, 0.713);
  p.set(ParamId::MuCost, -2.130);
  p.set(ParamId::SigmaCost, 1.724);
  const double b = realize_random_params(0.0, 0.0, true, p).beta_time;
  return {std::abs(b - (-0.292)) < 1e-12 && fmt("%.3f", b) == "-0.292", fmt("beta_T = %.15f", b)};
}

Outcome fit_statistics_check() {
  const double a1 = fit_statistics(-10000.0, -6842.8, 21, 0).aic;
  const double a2 = fit_statistics(-10000.0, -4257.6, 17, 0).aic;
  const bool ok = within(a1, 13727.6, 1e-9) && within(a2, 8549.2, 1e-9) && std::lround(a1) == 13728 &&
                  std::lround(a2) == 8549;
  return {ok, fmt("AIC %.1f and %.1f", a1, a2)};
}

// --- recovery --------------------------------------------------------------------

int flagged(const std::vector<RecoveryRow>& rows) {
  int n = 0;
  for (const auto& r : rows) n += r.flagged ? 1 : 0;
  return n;
}

Outcome mnl_recovery_check() {
  const ParameterVector truth = reference_estimates(SpecKind::M1);
  const ModelSpec spec = preset_spec(SpecKind::M1);
  int passed = 0;
  double slowest = 0.0;
  std::string failures;
  for (std::uint64_t rep = 1; rep <= 20; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    SimulationOptions so;
    so.rp_per_person = 100;
    so.seed = 1000 + rep;
    const Dataset d = simulate_choices(generate_population(100, {}, 1000 + rep), truth, spec, so);
    const EstimationResult r = estimate(d, spec);
    const int f = flagged(recovery_report(truth, r));
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (f == 0 && r.converged) {
      ++passed;
    } else {
      failures += fmt(" rep%llu:%d", static_cast<unsigned long long>(rep), f);
    }
  }
  return {passed >= 18 && slowest < 60.0,
          fmt("%d/20 replications fully within 3 robust SE, slowest fit %.1fs%s", passed, slowest,
              failures.empty() ? "" : (" (flags" + failures + ")").c_str())};
}

Outcome mxl_recovery_check() {
  ParameterVector truth = reference_estimates(SpecKind::M2);
  truth.set(ParamId::MuTime, -0.85);
  truth.set(ParamId::SigmaTime, 0.70);
  truth.set(ParamId::DeltaMig, 0.55);
  truth.set(ParamId::MuCost, -2.1);
  truth.set(ParamId::SigmaCost, 1.7);
  ModelSpec spec = preset_spec(SpecKind::M2);
  spec.draws = 500;
  SimulationOptions so;
  so.rp_per_person = 50;
  so.seed = 606;
  const Dataset d = simulate_choices(generate_population(200, {}, 606), truth, spec, so);
  const EstimationResult r = estimate(d, spec);
  std::string detail;
  bool ok = r.converged;
  for (const auto& row : recovery_report(truth, r)) {
    if (!is_random_hyperparameter(row.id)) continue;
    ok = ok && !row.flagged;
    detail += fmt("%s %.3f (true %.2f, z %.2f) ", std::string(param_name(row.id)).c_str(), row.estimate,
                  row.truth, row.z);
  }
  return {ok, detail + fmt("[%d iterations]", r.iterations)};
}

Outcome scale_recovery_check() {
  ParameterVector truth = reference_estimates(SpecKind::M3);
  truth.set(ParamId::ScaleSp, 0.30);
  const ModelSpec spec = preset_spec(SpecKind::M3);
  SimulationOptions so;
  so.rp_per_person = 100;
  so.sp_per_person = 5;
  so.seed = 707;
  const Dataset d = simulate_choices(generate_population(200, {}, 707), truth, spec, so);
  const double ratio = static_cast<double>(d.count(Source::RP)) / static_cast<double>(d.count(Source::SP));
  const EstimationResult full = estimate(d, spec);
  const ParameterEstimate* mu = full.row(ParamId::ScaleSp);
  const double z_full = std::abs(mu->estimate - 0.30) / mu->robust_se;

  // Balanced 1:1 design: SP plus the RP trips that triggered them, with the
  // person-covariate terms held at the full-sample estimates.
  const Dataset balanced = balanced_subsample(d);
  ParameterVector start = full.estimates;
  for (ParamId p : {ParamId::WorkCar, ParamId::ChildPt, ParamId::MigSubway, ParamId::FullTimeSubway,
                    ParamId::StudentTrain, ParamId::StudentWalk, ParamId::SafeSubway, ParamId::CycleBike,
                    ParamId::IntegPt, ParamId::IntegActive, ParamId::SnowActive}) {
    start.freeze(p);
  }
  EstimationOptions o;
  o.start = start;
  const EstimationResult bal = estimate(balanced, spec, o);
  const ParameterEstimate* mub = bal.row(ParamId::ScaleSp);
  const double z_bal = std::abs(mub->estimate - 0.30) / mub->robust_se;
  const bool ok = ratio >= 19.99 && z_full <= 3.0 && z_bal <= 3.0;
  return {ok, fmt("RP:SP %.1f:1, mu_SP %.3f (SE %.3f, z %.2f); balanced %zu RP + %zu SP: mu_SP %.3f (SE %.3f, z %.2f)",
                  ratio, mu->estimate, mu->robust_se, z_full, balanced.count(Source::RP), balanced.count(Source::SP),
                  mub->estimate, mub->robust_se, z_bal)};
}

// --- numerical correctness ---------------------------------------------------------

Outcome gradient_check() {
  const Dataset d = fixtures::fifty_obs_fixture();
  const ModelSpec spec = preset_spec(SpecKind::M1);
  const EstimationData ed = compile(d, spec);
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    ParameterVector p = start_values(spec);
    const auto ids = p.ids();
    for (ParamId id : ids) p.set(id, u(rng));
    const LikelihoodValue lv = mnl_loglikelihood(ed, p);
    Eigen::VectorXd x(static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) x[static_cast<Eigen::Index>(i)] = p[ids[i]];
    auto f = [&](const Eigen::VectorXd& y) {
      ParameterVector q = p;
      for (std::size_t i = 0; i < ids.size(); ++i) q.set(ids[i], y[static_cast<Eigen::Index>(i)]);
      return mnl_loglikelihood(ed, q, {false, false, 1}).ll;
    };
    const Eigen::VectorXd fd = numeric_gradient(f, x, 1e-6);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double g = lv.gradient[static_cast<Eigen::Index>(index_of(ids[i]))];
      const double a = fd[static_cast<Eigen::Index>(i)];
      worst = std::max(worst, std::abs(g - a) / std::max(1.0, std::abs(a)));
    }
  }
  return {worst < 1e-6, fmt("max relative error %.2e over 20 points x 21 parameters", worst)};
}

Outcome sll_oracle_check() {
  const Dataset d = fixtures::toy_panel();
  const ModelSpec spec = preset_spec(SpecKind::M2);
  ParameterVector p = start_values(spec);
  p.set(ParamId::AscBus, 0.4);
  p.set(ParamId::Access, -0.3);
  p.set(ParamId::MuTime, -0.8);
  p.set(ParamId::DeltaMig, 0.5);
  p.set(ParamId::MuCost, -1.0);
  p.set(ParamId::SigmaTime, 0.03);
  p.set(ParamId::SigmaCost, 0.03);
  const EstimationData ed = compile(d, spec);
  const double sll = panel_simulated_loglikelihood(ed, p, pseudo_random_draws(3, 2, 10000, 7)).ll;
  const double gh = oracles::gh_panel_loglikelihood(d, p, spec, 20);

  ParameterVector flat = p;
  flat.set(ParamId::SigmaTime, 0.0);
  flat.set(ParamId::SigmaCost, 0.0);
  const double sll0 = panel_simulated_loglikelihood(ed, flat, halton_draws(3, 2, 100)).ll;
  double mnl = 0.0;
  for (std::size_t n = 0; n < d.num_persons(); ++n) {
    const double bt = flat[ParamId::MuTime] + (d.persons()[n].migrant ? flat[ParamId::DeltaMig] : 0.0);
    mnl += oracles::person_loglikelihood(d, n, flat, spec, bt, -std::exp(flat[ParamId::MuCost]));
  }
  return {std::abs(sll - gh) < 1e-3 && std::abs(sll0 - mnl) < 1e-10,
          fmt("|SLL - quadrature| = %.2e (sigma 0.03), |SLL(sigma=0) - MNL| = %.2e", std::abs(sll - gh),
              std::abs(sll0 - mnl))};
}

Outcome normalization_check() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::bernoulli_distribution avail(0.7);
  double worst_sum = 0.0, worst_shift = 0.0;
  bool zeros = true;
  for (int k = 0; k < 100000; ++k) {
    ModeUtilities v{};
    ModeAvailability a{};
    int n = 0;
    for (std::size_t j = 0; j < kNumModes; ++j) {
      v[j] = u(rng);
      a[j] = avail(rng);
      n += a[j] ? 1 : 0;
    }
    if (n < 2) a[0] = a[1] = true;
    const ModeProbabilities p = choice_probabilities(v, a);
    ModeUtilities shifted = v;
    for (double& x : shifted) x += 700.0;
    const ModeProbabilities q = choice_probabilities(shifted, a);
    double s = 0.0;
    for (std::size_t j = 0; j < kNumModes; ++j) {
      s += p[j];
      if (!a[j]) zeros = zeros && p[j] == 0.0 && q[j] == 0.0;
      worst_shift = std::max(worst_shift, std::abs(p[j] - q[j]));
    }
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  const bool ok = worst_sum <= 1e-12 && zeros && worst_shift <= 1e-12;
  return {ok, fmt("max |sum P - 1| %.1e, unavailable exactly 0: %s, max shift difference %.1e (100000 evaluations)",
                  worst_sum, zeros ? "yes" : "no", worst_shift)};
}

// --- pipeline ------------------------------------------------------------------------

std::vector<pipeline::GpsEvent> moved(std::vector<pipeline::GpsEvent> e, const std::string& trip, double metres,
                                      double seconds, bool and_after) {
  bool on = false;
  for (auto& x : e) {
    if (x.trip_id == trip) on = true;
    else if (!and_after) on = false;
    if (!on) continue;
    x.lat = fixtures::north(x.lat, metres);
    x.time = fixtures::plus(x.time, seconds);
  }
  return e;
}

Outcome transit_check() {
  using pipeline::decompose_transit_journey;
  const auto f = fixtures::fig4_fixture();
  const auto d = decompose_transit_journey(f.events, f.track_first, f.track_last);
  const bool base = within(d.access_walk, 4.3, 0.05) && within(d.platform_wait, 3.7, 0.05) &&
                    within(d.egress_walk, 5.6, 0.05);
  // Egress walk 300 m away, then 24 vs 26 minutes after alighting.
  const double far = decompose_transit_journey(moved(f.events, "W-egress", 300.0, 0.0, true), f.track_first,
                                               f.track_last).egress_walk;
  const double near = decompose_transit_journey(moved(f.events, "W-egress", 200.0, 0.0, false), f.track_first,
                                                f.track_last).egress_walk;
  const double late = decompose_transit_journey(moved(f.events, "W-egress", 0.0, 26 * 60.0, true), f.track_first,
                                                f.track_last).egress_walk;
  const double in_time = decompose_transit_journey(moved(f.events, "W-egress", 0.0, 24 * 60.0, true),
                                                   f.track_first, f.track_last).egress_walk;
  const double far_access = decompose_transit_journey(moved(f.events, "W-access", -300.0, 0.0, false),
                                                      f.track_first, f.track_last).access_walk;
  const bool mutations = far == 0.0 && near > 0.0 && late == 0.0 && in_time > 0.0 && far_access == 0.0;
  return {base && mutations,
          fmt("access %.2f, wait %.2f, egress %.2f min; distance mutation 300 m -> %.1f / 200 m -> %.1f, "
              "access 300 m -> %.1f; time mutation 26 min -> %.1f / 24 min -> %.1f",
              d.access_walk, d.platform_wait, d.egress_walk, far, near, far_access, late, in_time)};
}

// --- cross-validation ----------------------------------------------------------------

Outcome cv_check() {
  const ParameterVector truth = reference_estimates(SpecKind::M1);
  const ModelSpec spec = preset_spec(SpecKind::M1);
  SimulationOptions so;
  so.rp_per_person = 40;
  so.seed = 1212;
  const Dataset d = simulate_choices(generate_population(200, {}, 1212), truth, spec, so);
  const int k = 5;
  const auto folds = make_folds(d, k, 12);
  bool partition = true, round_robin = true;
  for (std::size_t n = 0; n < d.num_persons(); ++n) {
    std::set<int> seen;
    const std::size_t t = d.observations_of(n).size();
    for (std::size_t i = 0; i < t; ++i) {
      const int f = folds[d.offset_of(n) + i];
      partition = partition && f >= 0 && f < k;
      seen.insert(f);
    }
    if (t >= static_cast<std::size_t>(k)) round_robin = round_robin && seen.size() == static_cast<std::size_t>(k);
  }
  const CvReport cv = cross_validate(d, spec, k, 12);
  const double bayes = oracles::bayes_rate(d, truth, spec);
  const bool ok = partition && round_robin && std::abs(cv.mean - bayes) <= 0.02;
  return {ok, fmt("partition %s, round-robin %s, CV accuracy %.2f%% vs Bayes rate %.2f%% (gap %.2f pp)",
                  partition ? "ok" : "broken", round_robin ? "ok" : "broken", 100 * cv.mean, 100 * bayes,
                  100 * std::abs(cv.mean - bayes))};
}

// --- scenarios -----------------------------------------------------------------------

Outcome scenario_check() {
  const RepresentativeTrip trip = default_representative_trip();
  const ParameterVector p = reference_estimates(SpecKind::M3);
  const ModelSpec spec = preset_spec(SpecKind::M3);
  const double base = transit_share(scenario_probabilities(trip, p, spec, 0.0));
  const SweepTable fare = sweep_fare(trip, p, spec, {3.25, 2.50, 1.50, 0.0});
  const SweepTable access = sweep_access(trip, p, spec, {15.0, 10.0, 5.0, 0.0});
  bool ratios = true;
  double min_ratio = 1e9;
  for (std::size_t c = 0; c < fare.gain_pp.size(); ++c) {
    ratios = ratios && fare.gain_pp[c] > 0.0 && access.gain_pp[c] > 0.0 && access.gain_pp[c] >= 2.0 * fare.gain_pp[c];
    min_ratio = std::min(min_ratio, access.gain_pp[c] / fare.gain_pp[c]);
  }
  const double swing = 100.0 * (transit_share(scenario_probabilities(trip, p, spec, -1.0)) -
                                transit_share(scenario_probabilities(trip, p, spec, 1.0)));
  RepresentativeTrip free_trip = trip;
  for (Mode m : {Mode::Bus, Mode::Subway, Mode::Train}) {
    free_trip.trip.at(m).cost = 0.0;
    free_trip.trip.at(m).walk_access = 0.0;
  }
  const double gap = 100.0 * (transit_share(scenario_probabilities(free_trip, p, spec, -1.0)) -
                              transit_share(scenario_probabilities(free_trip, p, spec, 1.0)));
  const bool ok = base >= 0.72 && base <= 0.83 && ratios && swing >= 4.0 && swing <= 6.0 && gap > 0.0;
  return {ok, fmt("baseline %.1f%%, fare gains %+.1f/%+.1f/%+.1f pp, access gains %+.1f/%+.1f/%+.1f pp "
                  "(min ratio %.2f), 2-SD swing %.1f pp, gap at zero fare and access %.1f pp",
                  100 * base, fare.gain_pp[0], fare.gain_pp[1], fare.gain_pp[2], access.gain_pp[0],
                  access.gain_pp[1], access.gain_pp[2], min_ratio, swing, gap)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"vot_mnl", vot_mnl_check},
      {"vot_ratio_mxl", vot_ratio_check},
      {"immigrant_mean_ivtt", immigrant_mean_check},
      {"fit_statistics", fit_statistics_check},
      {"mnl_recovery", mnl_recovery_check},
      {"mxl_recovery", mxl_recovery_check},
      {"sp_scale_recovery", scale_recovery_check},
      {"mnl_gradient", gradient_check},
      {"sll_quadrature", sll_oracle_check},
      {"probability_normalization", normalization_check},
      {"transit_decomposition", transit_check},
      {"cross_validation", cv_check},
      {"scenario_properties", scenario_check},
  };
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) only.insert(argv[i]);
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-26s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
