#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tripchoice/utility.hpp"

namespace oracles {

using namespace tripchoice;

std::vector<double> logit(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::exp(x);
  std::vector<double> p;
  for (double x : v) p.push_back(std::exp(x) / s);
  return p;
}

double person_loglikelihood(const Dataset& data, std::size_t n, const ParameterVector& params,
                            const ModelSpec& spec, double bt, double bc) {
  const PersonProfile& person = data.persons()[n];
  const double mu = params.value_or(ParamId::ScaleSp, 1.0);
  double ll = 0.0;
  for (const auto& o : data.observations_of(n)) {
    if (o.source == Source::SP && !spec.joint()) continue;
    std::vector<double> v;
    double vc = 0.0;
    for (Mode m : kAllModes) {
      if (!o.available(m)) continue;
      const double u = apply_sp_scale(systematic_utility(o, person, params, bt, bc, spec, m), o.source, mu);
      v.push_back(u);
      if (m == o.chosen) vc = u;
    }
    double s = 0.0;
    for (double x : v) s += std::exp(x);
    ll += vc - std::log(s);
  }
  return ll;
}

double mnl_loglikelihood(const Dataset& data, const ParameterVector& params, const ModelSpec& spec) {
  double ll = 0.0;
  for (std::size_t n = 0; n < data.num_persons(); ++n) {
    ll += person_loglikelihood(data, n, params, spec, params[ParamId::Time], params[ParamId::Cost]);
  }
  return ll;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[i] = std::sqrt(M_PI) * v0 * v0;
  }
  return {x, w};
}

double normal_expectation(const std::function<double(double)>& f, int n) {
  const auto [x, w] = gauss_hermite(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * f(std::sqrt(2.0) * x[i]);
  return s / std::sqrt(M_PI);
}

double gh_panel_loglikelihood(const Dataset& data, const ParameterVector& params, const ModelSpec& spec,
                              int nodes) {
  const auto [x, w] = gauss_hermite(nodes);
  double ll = 0.0;
  for (std::size_t n = 0; n < data.num_persons(); ++n) {
    const bool mig = data.persons()[n].migrant;
    double lik = 0.0;
    for (int a = 0; a < nodes; ++a) {
      for (int b = 0; b < nodes; ++b) {
        const double zt = std::sqrt(2.0) * x[a];
        const double zc = std::sqrt(2.0) * x[b];
        const double bt = params[ParamId::MuTime] + (mig ? params[ParamId::DeltaMig] : 0.0) +
                          params[ParamId::SigmaTime] * zt;
        const double bc = -std::exp(params[ParamId::MuCost] + params[ParamId::SigmaCost] * zc);
        lik += w[a] * w[b] / M_PI * std::exp(person_loglikelihood(data, n, params, spec, bt, bc));
      }
    }
    ll += std::log(lik);
  }
  return ll;
}

double bayes_rate(const Dataset& data, const ParameterVector& truth, const ModelSpec& spec,
                  const std::vector<bool>& select) {
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    if (!select.empty() && !select[i]) continue;
    const ChoiceObservation& o = data.observations()[i];
    if (o.source != Source::RP) continue;
    const PersonProfile& p = data.persons()[data.person_of_observation(i)];
    double best = -1e300;
    Mode arg = Mode::Car;
    for (Mode m : kAllModes) {
      if (!o.available(m)) continue;
      const double v = systematic_utility(o, p, truth, truth[ParamId::Time], truth[ParamId::Cost], spec, m);
      if (v > best) best = v, arg = m;
    }
    hits += arg == o.chosen ? 1 : 0;
    ++total;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace oracles
