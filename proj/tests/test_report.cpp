#include <doctest.h>

#include <algorithm>

#include <sstream>

#include "tripchoice/model_spec.hpp"
#include "tripchoice/report.hpp"
#include "tripchoice/scenario.hpp"

using namespace tripchoice;

namespace {

EstimationResult m1_with_t() {
  EstimationResult r;
  r.spec_name = "M1";
  r.kind = SpecKind::M1;
  r.estimates = reference_estimates(SpecKind::M1);
  for (ParamId id : r.estimates.ids()) {
    ParameterEstimate e;
    e.id = id;
    e.estimate = r.estimates[id];
    e.robust_t = id == ParamId::Cost ? -15.02 : 2.0;
    e.robust_se = e.estimate / e.robust_t;
    r.rows.push_back(e);
  }
  r.n_params = 21;
  r.ll_final = -6842.8;
  r.aic = 13727.6;
  return r;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("parameter row layout") {
    const std::string t = parameter_table({m1_with_t()});
    std::istringstream in(t);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
      if (line.rfind("β_C (Cost)", 0) != 0) continue;
      found = true;
      CHECK(line.find("-0.766 (-15.02)") != std::string::npos);
    }
    CHECK(found);
    CHECK(count_lines(t) == 22);
    CHECK(count_lines(parameter_csv({m1_with_t()})) == 22);
  }

  TEST_CASE("frozen parameters are marked") {
    EstimationResult r = m1_with_t();
    r.rows[0].frozen = true;
    CHECK(parameter_table({r}).find("(fixed)") != std::string::npos);
  }

  TEST_CASE("fit table") {
    const std::string t = fit_table({m1_with_t()});
    CHECK(t.find("13727.6") != std::string::npos);
    CHECK(t.find("-6842.8") != std::string::npos);
  }

  TEST_CASE("sweep table closes with a gain row") {
    const SweepTable s = sweep_fare(default_representative_trip(), reference_estimates(SpecKind::M3),
                                    preset_spec(SpecKind::M3), {3.25, 0.0});
    const std::string t = sweep_text(s);
    CHECK(t.find("Gain (pp)") != std::string::npos);
    CHECK(t.find("Mean") != std::string::npos);
    CHECK(count_lines(sweep_csv(s)) == 3);
  }

  TEST_CASE("gradient series") {
    const GradientCurve c = integration_gradient(default_representative_trip(), reference_estimates(SpecKind::M3),
                                                 preset_spec(SpecKind::M3), -1.0, 1.0, 3);
    CHECK(count_lines(gradient_csv(c)) == 1 + 3 * kRpModes.size());
  }

  TEST_CASE("empty result set gives headers only") {
    CHECK(count_lines(parameter_table({})) == 1);
    CHECK(parameter_table({}).find("Parameter") == 0);
    CHECK(count_lines(vot_table({})) == 1);
    CHECK(fit_table({}).find("AIC") != std::string::npos);
  }
}
