#include "tripchoice/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tripchoice/errors.hpp"

namespace tripchoice {

VotPair vot_mnl(double beta_time, double beta_access, double beta_cost) {
  if (beta_cost == 0.0) throw SpecError("value of time undefined: cost coefficient is zero");
  return {beta_time / beta_cost * 60.0, beta_access / beta_cost * 60.0};
}

double vot_ratio_mxl(double mu_time, double delta_mig) {
  if (mu_time == 0.0) throw SpecError("value-of-time ratio undefined: mu_time is zero");
  return (mu_time + delta_mig) / mu_time;
}

double population_mean_cost(double mu_cost, double sigma_cost) {
  return -std::exp(mu_cost + 0.5 * sigma_cost * sigma_cost);
}

ConditionalEstimate conditional_parameters(const CompiledPerson& person,
                                           const ParameterVector& params,
                                           const DrawMatrix& draws, bool joint) {
  const std::vector<double> ll = person_draw_loglikelihoods(person, params, draws, joint);
  const double lmax = *std::max_element(ll.begin(), ll.end());
  if (!std::isfinite(lmax)) {
    throw NumericError("all draw likelihoods underflow for person " + person.person_id);
  }
  double total = 0.0;
  ConditionalEstimate out;
  for (std::size_t r = 0; r < ll.size(); ++r) {
    const double w = std::exp(ll[r] - lmax);
    const RandomCoefficients b =
        realize_random_params(draws(person.person_index, r, 0), draws(person.person_index, r, 1),
                              person.migrant, params);
    out.beta_time += w * b.beta_time;
    out.beta_cost += w * b.beta_cost;
    total += w;
  }
  out.beta_time /= total;
  out.beta_cost /= total;
  return out;
}

std::vector<VotRow> vot_summary(const EstimationResult& result) {
  const ParameterVector& p = result.estimates;
  const std::string model = result.spec_name.empty() ? std::string(to_string(result.kind)) : result.spec_name;
  std::vector<VotRow> rows;
  if (!is_mixed(result.kind)) {
    const VotPair v = vot_mnl(p[ParamId::Time], p[ParamId::Access], p[ParamId::Cost]);
    rows.push_back({model, "All", v.ivtt, v.walk, 0.0, false});
    return rows;
  }
  const double cost = population_mean_cost(p[ParamId::MuCost], p[ParamId::SigmaCost]);
  const double mu_t = p[ParamId::MuTime];
  const double delta = p[ParamId::DeltaMig];
  const VotPair native = vot_mnl(mu_t, p[ParamId::Access], cost);
  const VotPair migrant = vot_mnl(mu_t + delta, p[ParamId::Access], cost);
  rows.push_back({model, "Canadian-born", native.ivtt, native.walk, 0.0, false});
  rows.push_back({model, "Immigrant", migrant.ivtt, migrant.walk, vot_ratio_mxl(mu_t, delta), true});
  return rows;
}

}  // namespace tripchoice
