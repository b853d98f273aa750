#include "tripchoice/mnl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tripchoice/detail/parallel.hpp"
#include "tripchoice/errors.hpp"

namespace tripchoice {

double softmax_inplace(std::span<double> v) {
  const double vmax = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - vmax);
    sum += x;
  }
  for (double& x : v) x /= sum;
  return std::log(sum);
}

ModeProbabilities choice_probabilities(const ModeUtilities& v, const ModeAvailability& available) {
  std::array<double, kNumModes> dense{};
  std::array<std::size_t, kNumModes> where{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumModes; ++i) {
    if (available[i]) {
      where[n] = i;
      dense[n++] = v[i];
    }
  }
  if (n < 2) throw SpecError("choice set needs at least two available alternatives");
  softmax_inplace(std::span<double>(dense.data(), n));
  ModeProbabilities p{};
  for (std::size_t k = 0; k < n; ++k) p[where[k]] = dense[k];
  return p;
}

namespace {

struct PersonContribution {
  double ll = 0.0;
  std::array<double, kNumParams> grad{};
};

double scale_of(const CompiledObservation& o, const ParameterVector& params, bool joint) {
  return (joint && o.sp) ? params[ParamId::ScaleSp] : 1.0;
}

}  // namespace

LikelihoodValue mnl_loglikelihood(const EstimationData& data, const ParameterVector& params,
                                  const EvalOptions& options) {
  const bool joint = data.spec.joint();
  const double beta_time = params[ParamId::Time];
  const double beta_cost = params[ParamId::Cost];
  std::vector<PersonContribution> parts(data.persons.size());

  detail::parallel_for(data.persons.size(), options.workers, [&](std::size_t n) {
    PersonContribution& out = parts[n];
    std::vector<double> unscaled;
    std::vector<double> prob;
    for (const CompiledObservation& o : data.persons[n].obs) {
      const std::size_t j = o.alts.size();
      const double mu = scale_of(o, params, joint);
      unscaled.resize(j);
      prob.resize(j);
      for (std::size_t a = 0; a < j; ++a) {
        const AltDesign& d = o.alts[a];
        unscaled[a] = d.linear_utility(params) + beta_time * d.time_s + beta_cost * d.cost_s;
        prob[a] = mu * unscaled[a];
      }
      const double vmax = *std::max_element(prob.begin(), prob.end());
      const double log_denom = softmax_inplace(prob);
      const double log_p = mu * unscaled[o.chosen] - vmax - log_denom;
      if (!std::isfinite(log_p) || prob[o.chosen] <= 0.0) {
        const std::string id = std::to_string(o.source_index);
        throw NumericError("P(chosen) underflows to zero at observation index " + id);
      }
      out.ll += log_p;
      if (!options.gradient) continue;
      // d log P_i / d theta = mu * (x_i - sum_j P_j x_j)
      for (std::size_t a = 0; a < j; ++a) {
        const double w = mu * ((a == o.chosen ? 1.0 : 0.0) - prob[a]);
        const AltDesign& d = o.alts[a];
        for (const auto& t : d.linear_terms()) out.grad[index_of(t.param)] += w * t.value;
        out.grad[index_of(ParamId::Time)] += w * d.time_s;
        out.grad[index_of(ParamId::Cost)] += w * d.cost_s;
      }
      if (joint && o.sp) {
        double mean_v = 0.0;
        for (std::size_t a = 0; a < j; ++a) mean_v += prob[a] * unscaled[a];
        out.grad[index_of(ParamId::ScaleSp)] += unscaled[o.chosen] - mean_v;
      }
    }
  });

  LikelihoodValue result;
  result.gradient = Eigen::VectorXd::Zero(kNumParams);
  if (options.person_scores) result.person_scores = Eigen::MatrixXd::Zero(parts.size(), kNumParams);
  for (std::size_t n = 0; n < parts.size(); ++n) {
    result.ll += parts[n].ll;
    for (std::size_t k = 0; k < kNumParams; ++k) {
      result.gradient[k] += parts[n].grad[k];
      if (options.person_scores) result.person_scores(n, k) = parts[n].grad[k];
    }
  }
  // Coefficients outside the spec carry no gradient.
  for (std::size_t k = 0; k < kNumParams; ++k) {
    if (!data.spec.included.test(k)) {
      result.gradient[k] = 0.0;
      if (options.person_scores) result.person_scores.col(k).setZero();
    }
  }
  return result;
}

double null_loglikelihood(const EstimationData& data) {
  double ll = 0.0;
  for (const auto& p : data.persons) {
    for (const auto& o : p.obs) ll -= std::log(static_cast<double>(o.alts.size()));
  }
  return ll;
}

double null_loglikelihood(const Dataset& data) {
  double ll = 0.0;
  for (const auto& o : data.observations()) {
    ll -= std::log(static_cast<double>(o.num_available()));
  }
  return ll;
}

}  // namespace tripchoice
