#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tripchoice/errors.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/mxl.hpp"
#include "tripchoice/optimizer.hpp"
#include "tripchoice/utility.hpp"

using namespace tripchoice;

namespace {

ParameterVector toy_params(double sigma_t, double sigma_c) {
  ParameterVector p = start_values(preset_spec(SpecKind::M2));
  p.set(ParamId::AscBus, 0.4);
  p.set(ParamId::Access, -0.3);
  p.set(ParamId::MuTime, -0.8);
  p.set(ParamId::DeltaMig, 0.5);
  p.set(ParamId::MuCost, -1.0);
  p.set(ParamId::SigmaTime, sigma_t);
  p.set(ParamId::SigmaCost, sigma_c);
  return p;
}

std::vector<ChoiceObservation> stratum(std::size_t n, Mode chosen, bool work) {
  std::vector<ChoiceObservation> out;
  for (std::size_t i = 0; i < n; ++i) {
    ChoiceObservation o = fixtures::observation("o", "p", chosen, {{Mode::Car, 1, 1, 0, 1}, {Mode::Bus, 1, 1, 1, 1}});
    o.purpose_work_study = work;
    out.push_back(o);
  }
  return out;
}

}  // namespace

TEST_SUITE("mxl") {
  TEST_CASE("radical inverse") {
    CHECK(radical_inverse(1, 2) == 0.5);
    CHECK(radical_inverse(2, 2) == 0.25);
    CHECK(radical_inverse(3, 2) == 0.75);
    CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(radical_inverse(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(radical_inverse(3, 3) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
  }

  TEST_CASE("Halton draws follow the sequence per person") {
    const DrawMatrix d = halton_draws(2, 2, 3, 0);
    CHECK(d(0, 0, 0) == doctest::Approx(inverse_normal_cdf(0.5)));
    CHECK(d(0, 1, 0) == doctest::Approx(inverse_normal_cdf(0.25)));
    CHECK(d(0, 2, 0) == doctest::Approx(inverse_normal_cdf(0.75)));
    CHECK(d(0, 2, 1) == doctest::Approx(inverse_normal_cdf(1.0 / 9.0)));
    CHECK(d(1, 0, 0) == doctest::Approx(inverse_normal_cdf(radical_inverse(4, 2))));
    const DrawMatrix e = halton_draws(2, 2, 3, 10);
    CHECK(e(0, 0, 0) == doctest::Approx(inverse_normal_cdf(radical_inverse(11, 2))));
    CHECK_THROWS_AS(halton_draws(2, 2, 0), SpecError);
  }

  TEST_CASE("Halton draws have near-zero mean and unit variance") {
    const DrawMatrix d = halton_draws(1, 2, 5000, 10);
    for (std::size_t k = 0; k < 2; ++k) {
      double m = 0.0, v = 0.0;
      for (std::size_t r = 0; r < 5000; ++r) m += d(0, r, k);
      m /= 5000;
      for (std::size_t r = 0; r < 5000; ++r) v += (d(0, r, k) - m) * (d(0, r, k) - m);
      v /= 4999;
      CHECK(std::abs(m) < 0.01);
      CHECK(std::abs(v - 1.0) < 0.02);
    }
  }

  TEST_CASE("pseudo-random draws are seeded") {
    const DrawMatrix a = pseudo_random_draws(3, 2, 10, 42);
    const DrawMatrix b = pseudo_random_draws(3, 2, 10, 42);
    const DrawMatrix c = pseudo_random_draws(3, 2, 10, 43);
    CHECK(a(2, 9, 1) == b(2, 9, 1));
    CHECK(a(2, 9, 1) != c(2, 9, 1));
  }

  TEST_CASE("realize_random_params") {
    ParameterVector p;
    p.set(ParamId::MuTime, -0.848);
    p.set(ParamId::DeltaMig, 0.556);
    p.set(ParamId::SigmaTime, 0.713);
    p.set(ParamId::MuCost, -2.130);
    p.set(ParamId::SigmaCost, 1.724);
    CHECK(realize_random_params(0, 0, true, p).beta_time == doctest::Approx(-0.292).epsilon(1e-12));
    CHECK(realize_random_params(0, 0, false, p).beta_time == doctest::Approx(-0.848).epsilon(1e-12));
    CHECK(realize_random_params(0, 0, false, p).beta_cost == doctest::Approx(-std::exp(-2.130)).epsilon(1e-12));
    CHECK(realize_random_params(0, 0, false, p).beta_cost == doctest::Approx(-0.1188).epsilon(1e-3));
    CHECK(realize_random_params(1.0, -1.0, false, p).beta_time == doctest::Approx(-0.848 + 0.713));
    CHECK(realize_random_params(1.0, -1.0, false, p).beta_cost == doctest::Approx(-std::exp(-2.130 - 1.724)));
  }

  TEST_CASE("trip cap") {
    auto under = stratum(120, Mode::Car, false);
    CHECK(cap_trips(under, 300, 1).size() == 120);
    auto single = stratum(600, Mode::Car, false);
    CHECK(cap_trips(single, 300, 1).size() == 300);

    auto two = stratum(400, Mode::Car, false);
    const auto b = stratum(200, Mode::Bus, false);
    two.insert(two.end(), b.begin(), b.end());
    const auto kept = cap_trips(two, 300, 9);
    REQUIRE(kept.size() == 300);
    std::size_t car = 0;
    for (std::size_t i : kept) car += two[i].chosen == Mode::Car ? 1 : 0;
    CHECK(car == 200);
    CHECK(std::is_sorted(kept.begin(), kept.end()));
    CHECK(cap_trips(two, 300, 9) == kept);
  }

  TEST_CASE("trip cap uses largest remainders and keeps SP") {
    // Strata 5 / 3 / 2 capped to 4: quotas 2.0, 1.2, 0.8 -> 2, 1, 1.
    auto obs = stratum(5, Mode::Car, false);
    auto b = stratum(3, Mode::Bus, false);
    auto c = stratum(2, Mode::Car, true);
    obs.insert(obs.end(), b.begin(), b.end());
    obs.insert(obs.end(), c.begin(), c.end());
    auto sp = stratum(3, Mode::Bus, true);
    for (auto& o : sp) o.source = Source::SP;
    obs.insert(obs.end(), sp.begin(), sp.end());
    const auto kept = cap_trips(obs, 4, 2);
    std::size_t n_car = 0, n_bus = 0, n_work = 0, n_sp = 0;
    for (std::size_t i : kept) {
      if (obs[i].source == Source::SP) {
        ++n_sp;
      } else if (obs[i].purpose_work_study) {
        ++n_work;
      } else if (obs[i].chosen == Mode::Car) {
        ++n_car;
      } else {
        ++n_bus;
      }
    }
    CHECK(n_sp == 3);
    CHECK(n_car == 2);
    CHECK(n_bus == 1);
    CHECK(n_work == 1);
  }

  TEST_CASE("degenerate distributions reduce to MNL") {
    const Dataset d = fixtures::toy_panel();
    const ModelSpec spec = preset_spec(SpecKind::M2);
    const ParameterVector p = toy_params(0.0, 0.0);
    const DrawMatrix draws = halton_draws(d.num_persons(), 2, 50);
    const double sll = panel_simulated_loglikelihood(compile(d, spec), p, draws).ll;
    double oracle = 0.0;
    for (std::size_t n = 0; n < d.num_persons(); ++n) {
      const double bt = p[ParamId::MuTime] + (d.persons()[n].migrant ? p[ParamId::DeltaMig] : 0.0);
      oracle += oracles::person_loglikelihood(d, n, p, spec, bt, -std::exp(p[ParamId::MuCost]));
    }
    CHECK(std::abs(sll - oracle) < 1e-10);
  }

  TEST_CASE("a single draw equals MNL at that draw") {
    const Dataset d = fixtures::toy_panel();
    const ModelSpec spec = preset_spec(SpecKind::M2);
    const ParameterVector p = toy_params(0.6, 0.4);
    const DrawMatrix draws = pseudo_random_draws(d.num_persons(), 2, 1, 17);
    double oracle = 0.0;
    for (std::size_t n = 0; n < d.num_persons(); ++n) {
      const auto rc = realize_random_params(draws(n, 0, 0), draws(n, 0, 1), d.persons()[n].migrant, p);
      oracle += oracles::person_loglikelihood(d, n, p, spec, rc.beta_time, rc.beta_cost);
    }
    CHECK(std::abs(panel_simulated_loglikelihood(compile(d, spec), p, draws).ll - oracle) < 1e-10);
  }

  TEST_CASE("simulated log-likelihood approaches the quadrature oracle") {
    const Dataset d = fixtures::toy_panel();
    const ModelSpec spec = preset_spec(SpecKind::M2);
    const ParameterVector modest = toy_params(0.03, 0.03);
    const double sll =
        panel_simulated_loglikelihood(compile(d, spec), modest, pseudo_random_draws(3, 2, 10000, 7)).ll;
    CHECK(std::abs(sll - oracles::gh_panel_loglikelihood(d, modest, spec, 20)) < 1e-3);
    const ParameterVector wide = toy_params(0.5, 0.4);
    const double halton = panel_simulated_loglikelihood(compile(d, spec), wide, halton_draws(3, 2, 2000)).ll;
    CHECK(std::abs(halton - oracles::gh_panel_loglikelihood(d, wide, spec, 20)) < 1e-3);
  }

  TEST_CASE("analytic SLL gradient matches central differences") {
    const Dataset d = fixtures::fifty_obs_fixture();
    for (SpecKind k : {SpecKind::M2, SpecKind::M4}) {
      const ModelSpec spec = preset_spec(k);
      const EstimationData ed = compile(d, spec);
      const DrawMatrix draws = halton_draws(d.num_persons(), 2, 100);
      ParameterVector p = reference_estimates(k);
      p.set(ParamId::MuCost, -1.2);
      p.set(ParamId::SigmaCost, 0.6);
      const LikelihoodValue lv = panel_simulated_loglikelihood(ed, p, draws);
      const std::vector<ParamId> ids = p.ids();
      Eigen::VectorXd x(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) x[i] = p[ids[i]];
      auto f = [&](const Eigen::VectorXd& y) {
        ParameterVector q = p;
        for (std::size_t i = 0; i < ids.size(); ++i) q.set(ids[i], y[i]);
        return panel_simulated_loglikelihood(ed, q, draws, {false, false, 1}).ll;
      };
      const Eigen::VectorXd fd = numeric_gradient(f, x, 1e-6);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double g = lv.gradient[static_cast<Eigen::Index>(index_of(ids[i]))];
        INFO(param_name(ids[i]));
        CHECK(std::abs(g - fd[i]) <= 1e-6 * std::max(1.0, std::abs(fd[i])));
      }
    }
  }

  TEST_CASE("per-draw log-likelihoods average to the SLL") {
    const Dataset d = fixtures::toy_panel();
    const ModelSpec spec = preset_spec(SpecKind::M2);
    const ParameterVector p = toy_params(0.5, 0.4);
    const EstimationData ed = compile(d, spec);
    const DrawMatrix draws = halton_draws(3, 2, 64);
    double total = 0.0;
    for (const auto& person : ed.persons) {
      const auto l = person_draw_loglikelihoods(person, p, draws, false);
      double s = 0.0;
      for (double v : l) s += std::exp(v);
      total += std::log(s / 64.0);
    }
    CHECK(total == doctest::Approx(panel_simulated_loglikelihood(ed, p, draws).ll).epsilon(1e-12));
  }

  TEST_CASE("draw matrix must cover every person") {
    const Dataset d = fixtures::toy_panel();
    CHECK_THROWS_AS(panel_simulated_loglikelihood(compile(d, preset_spec(SpecKind::M2)), toy_params(0.5, 0.4),
                                                  halton_draws(2, 2, 10)),
                    SpecError);
  }
}
