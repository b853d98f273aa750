#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tripchoice/errors.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/optimizer.hpp"
#include "tripchoice/utility.hpp"

using namespace tripchoice;

namespace {

ParameterVector random_point(const ModelSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ParameterVector p = start_values(spec);
  for (ParamId id : p.ids()) p.set(id, u(rng));
  return p;
}

}  // namespace

TEST_SUITE("utility") {
  TEST_CASE("only the constant survives on zero attributes") {
    const ModelSpec spec = preset_spec(SpecKind::M1);
    const ParameterVector params = reference_estimates(SpecKind::M1);
    ChoiceObservation o = fixtures::observation("o", "p", Mode::Bus, {{Mode::Bus, 0, 0, 0, 0}, {Mode::Car, 0, 0, 0, 0}});
    PersonProfile p;
    p.person_id = "p";
    const double v = systematic_utility(o, p, params, params[ParamId::Time], params[ParamId::Cost], spec, Mode::Bus);
    CHECK(v == doctest::Approx(-0.271).epsilon(1e-12));
  }

  TEST_CASE("car utility under the M1 estimates") {
    const ModelSpec spec = preset_spec(SpecKind::M1);
    const ParameterVector params = reference_estimates(SpecKind::M1);
    ChoiceObservation o = fixtures::observation("o", "p", Mode::Car, {{Mode::Car, 10, 20, 0, 10}, {Mode::Bus, 3, 30, 5, 10}});
    o.purpose_work_study = true;
    PersonProfile p;
    const double v = systematic_utility(o, p, params, params[ParamId::Time], params[ParamId::Cost], spec, Mode::Car);
    // -0.766*1.0 - 0.361*2.0 + 0.356*0.01 - 0.291
    const double hand = -0.766 * 1.0 - 0.361 * 2.0 + 0.356 * 0.01 - 0.291;
    CHECK(hand == doctest::Approx(-1.77544).epsilon(1e-9));
    CHECK(v == doctest::Approx(hand).epsilon(1e-12));
  }

  TEST_CASE("immigrant shift on subway") {
    const ModelSpec spec = preset_spec(SpecKind::M1);
    const ParameterVector params = reference_estimates(SpecKind::M1);
    ChoiceObservation o = fixtures::observation("o", "p", Mode::Subway, {{Mode::Subway, 3.25, 20, 6, 9}, {Mode::Car, 8, 15, 0, 9}});
    PersonProfile nat, mig;
    mig.migrant = true;
    const double bt = params[ParamId::Time], bc = params[ParamId::Cost];
    const double d = systematic_utility(o, mig, params, bt, bc, spec, Mode::Subway) -
                     systematic_utility(o, nat, params, bt, bc, spec, Mode::Subway);
    CHECK(d == doctest::Approx(-0.708).epsilon(1e-12));
  }

  TEST_CASE("coefficients outside the spec are rejected") {
    const ModelSpec spec = preset_spec(SpecKind::M2);
    ParameterVector params = reference_estimates(SpecKind::M2);
    params.set(ParamId::MigSubway, -0.7);
    CHECK_THROWS_WITH_AS(check_params_in_spec(params, spec), doctest::Contains("beta_mig_subway"), SpecError);
  }

  TEST_CASE("e-mobility has no RP design row") {
    ChoiceObservation o = fixtures::observation("o", "p", Mode::Car, {{Mode::Car, 1, 1, 0, 1}, {Mode::Bus, 1, 1, 1, 1}});
    CHECK_THROWS_AS(design_row(o, PersonProfile{}, preset_spec(SpecKind::M3), Mode::EMobility), SpecError);
  }

  TEST_CASE("apply_sp_scale") {
    CHECK(apply_sp_scale(2.0, Source::RP, 0.298) == 2.0);
    CHECK(apply_sp_scale(2.0, Source::SP, 0.298) == doctest::Approx(0.596).epsilon(1e-12));
    CHECK(apply_sp_scale(0.0, Source::SP, 0.77) == 0.0);
  }
}

TEST_SUITE("mnl") {
  TEST_CASE("two-alternative probabilities") {
    ModeUtilities v{};
    ModeAvailability a{};
    a[0] = a[1] = true;
    v[0] = v[1] = 1.0;
    ModeProbabilities p = choice_probabilities(v, a);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    v[0] = std::log(2.0);
    v[1] = 0.0;
    p = choice_probabilities(v, a);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }

  TEST_CASE("unavailable alternatives get exactly zero") {
    ModeUtilities v{};
    v[0] = v[1] = v[2] = 5.0;
    ModeAvailability a{};
    a[0] = a[1] = true;
    const ModeProbabilities p = choice_probabilities(v, a);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[2] == 0.0);
    ModeAvailability one{};
    one[0] = true;
    CHECK_THROWS_AS(choice_probabilities(v, one), SpecError);
  }

  TEST_CASE("probabilities match the unshifted oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int rep = 0; rep < 50; ++rep) {
      ModeUtilities v{};
      ModeAvailability a{};
      std::vector<double> vs;
      for (std::size_t j = 0; j < 6; ++j) {
        v[j] = u(rng);
        a[j] = (rep + j) % 4 != 0 || j < 2;
        if (a[j]) vs.push_back(v[j]);
      }
      const ModeProbabilities p = choice_probabilities(v, a);
      const std::vector<double> q = oracles::logit(vs);
      std::size_t k = 0;
      for (std::size_t j = 0; j < 6; ++j) {
        if (a[j]) CHECK(p[j] == doctest::Approx(q[k++]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("log-likelihood basics") {
    const ModelSpec spec = preset_spec(SpecKind::M1);
    Dataset one({fixtures::person("p")},
                {fixtures::observation("o", "p", Mode::Car, {{Mode::Car, 0, 0, 0, 0}, {Mode::Bus, 0, 0, 0, 0}})});
    ParameterVector zero = start_values(spec);
    zero.set(ParamId::AscBus, 0.0);
    const LikelihoodValue lv = mnl_loglikelihood(compile(one, spec), zero);
    CHECK(lv.ll == doctest::Approx(std::log(0.5)).epsilon(1e-14));

    const Dataset d = fixtures::fifty_obs_fixture();
    const EstimationData ed = compile(d, spec);
    double expect = 0.0;
    for (const auto& o : d.observations()) expect += std::log(1.0 / static_cast<double>(o.num_available()));
    CHECK(mnl_loglikelihood(ed, start_values(spec)).ll == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(null_loglikelihood(ed) - mnl_loglikelihood(ed, start_values(spec)).ll) < 1e-10);
    CHECK(std::abs(null_loglikelihood(d) - expect) < 1e-10);
  }

  TEST_CASE("null log-likelihood") {
    std::vector<ChoiceObservation> obs;
    for (int i = 0; i < 10; ++i) {
      obs.push_back(fixtures::observation("o" + std::to_string(i), "p", Mode::Car,
                                          {{Mode::Car, 1, 1, 0, 1}, {Mode::Bus, 1, 1, 1, 1},
                                           {Mode::Walk, 0, 9, 0, 1}, {Mode::Bicycle, 0, 5, 0, 1}}));
    }
    CHECK(null_loglikelihood(Dataset({fixtures::person("p")}, obs)) == doctest::Approx(10 * std::log(0.25)));
    Dataset mixed({fixtures::person("p")},
                  {fixtures::observation("a", "p", Mode::Car, {{Mode::Car, 1, 1, 0, 1}, {Mode::Bus, 1, 1, 1, 1}}),
                   fixtures::observation("b", "p", Mode::Car,
                                         {{Mode::Car, 1, 1, 0, 1}, {Mode::Bus, 1, 1, 1, 1}, {Mode::Walk, 0, 3, 0, 1}})});
    CHECK(null_loglikelihood(mixed) == doctest::Approx(std::log(0.5) + std::log(1.0 / 3.0)));
  }

  TEST_CASE("log-likelihood matches the observation-loop oracle") {
    const Dataset d = fixtures::fifty_obs_fixture();
    for (SpecKind k : {SpecKind::M1, SpecKind::M3}) {
      const ModelSpec spec = preset_spec(k);
      std::mt19937_64 rng(11);
      for (int rep = 0; rep < 5; ++rep) {
        ParameterVector p = random_point(spec, rng);
        if (spec.joint()) p.set(ParamId::ScaleSp, 1.0);
        CHECK(mnl_loglikelihood(compile(d, spec), p).ll ==
              doctest::Approx(oracles::mnl_loglikelihood(d, p, spec)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("analytic gradient matches central differences") {
    const Dataset d = fixtures::fifty_obs_fixture();
    const ModelSpec spec = preset_spec(SpecKind::M1);
    const EstimationData ed = compile(d, spec);
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 5; ++rep) {
      const ParameterVector p = random_point(spec, rng);
      const LikelihoodValue lv = mnl_loglikelihood(ed, p);
      const std::vector<ParamId> ids = p.ids();
      Eigen::VectorXd x(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) x[i] = p[ids[i]];
      auto f = [&](const Eigen::VectorXd& y) {
        ParameterVector q = p;
        for (std::size_t i = 0; i < ids.size(); ++i) q.set(ids[i], y[i]);
        return mnl_loglikelihood(ed, q, {false, false, 1}).ll;
      };
      const Eigen::VectorXd fd = numeric_gradient(f, x, 1e-6);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double g = lv.gradient[static_cast<Eigen::Index>(index_of(ids[i]))];
        CHECK(std::abs(g - fd[i]) <= 1e-6 * std::max(1.0, std::abs(fd[i])));
      }
    }
  }

  TEST_CASE("parallel evaluation equals serial") {
    const Dataset d = fixtures::fifty_obs_fixture();
    const ModelSpec spec = preset_spec(SpecKind::M1);
    const EstimationData ed = compile(d, spec);
    const ParameterVector p = reference_estimates(SpecKind::M1);
    const LikelihoodValue a = mnl_loglikelihood(ed, p, {true, false, 1});
    const LikelihoodValue b = mnl_loglikelihood(ed, p, {true, false, 4});
    CHECK(a.ll == b.ll);
    CHECK((a.gradient - b.gradient).norm() == 0.0);
  }

  TEST_CASE("underflow names the observation") {
    const ModelSpec spec = preset_spec(SpecKind::M1);
    Dataset one({fixtures::person("p")},
                {fixtures::observation("bad-obs", "p", Mode::Car, {{Mode::Car, 100, 0, 0, 0}, {Mode::Bus, 0, 0, 0, 0}})});
    ParameterVector p = start_values(spec);
    p.set(ParamId::Cost, -1e4);
    CHECK_THROWS_AS(mnl_loglikelihood(compile(one, spec), p), NumericError);
  }
}
