#include "tripchoice/mxl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "tripchoice/detail/parallel.hpp"
#include "tripchoice/errors.hpp"

namespace tripchoice {

namespace {

constexpr std::array<unsigned, 10> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double uniform_from(std::mt19937_64& rng) {
  // 53-bit mantissa in (0, 1)
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

double inverse_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) throw NumericError("inverse_normal_cdf: argument outside (0, 1)");
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, u);
}

DrawMatrix::DrawMatrix(std::size_t persons, std::size_t draws, std::size_t dims, Generator generator)
    : persons_(persons), draws_(draws), dims_(dims), generator_(std::move(generator)),
      data_(persons * draws * dims, 0.0) {}

DrawMatrix DrawMatrix::person_slice(std::size_t person) const {
  DrawMatrix out(1, draws_, dims_, generator_);
  for (std::size_t r = 0; r < draws_; ++r) {
    for (std::size_t d = 0; d < dims_; ++d) out(0, r, d) = (*this)(person, r, d);
  }
  return out;
}

DrawMatrix halton_draws(std::size_t n_persons, std::size_t n_dims, std::size_t n_draws,
                        std::size_t discard, std::uint64_t seed) {
  if (n_draws == 0) throw SpecError("halton_draws: number of draws must be positive");
  if (n_dims > kPrimes.size()) throw SpecError("halton_draws: too many dimensions");
  DrawMatrix::Generator gen{"halton", {kPrimes.begin(), kPrimes.begin() + n_dims}, discard, seed};
  DrawMatrix m(n_persons, n_draws, n_dims, gen);
  for (std::size_t d = 0; d < n_dims; ++d) {
    const unsigned base = kPrimes[d];
    for (std::size_t n = 0; n < n_persons; ++n) {
      for (std::size_t r = 0; r < n_draws; ++r) {
        const std::uint64_t element = discard + n * n_draws + r;
        m(n, r, d) = inverse_normal_cdf(radical_inverse(element + 1, base));
      }
    }
  }
  return m;
}

DrawMatrix pseudo_random_draws(std::size_t n_persons, std::size_t n_dims, std::size_t n_draws,
                               std::uint64_t seed) {
  if (n_draws == 0) throw SpecError("pseudo_random_draws: number of draws must be positive");
  DrawMatrix m(n_persons, n_draws, n_dims, {"pseudo-random", {}, 0, seed});
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < n_persons; ++n) {
    for (std::size_t r = 0; r < n_draws; ++r) {
      for (std::size_t d = 0; d < n_dims; ++d) m(n, r, d) = inverse_normal_cdf(uniform_from(rng));
    }
  }
  return m;
}

RandomCoefficients realize_random_params(double z_time, double z_cost, bool migrant,
                                         const ParameterVector& params) {
  RandomCoefficients c;
  c.beta_time = params[ParamId::MuTime] + (migrant ? params[ParamId::DeltaMig] : 0.0) +
                params[ParamId::SigmaTime] * z_time;
  c.beta_cost = -std::exp(params[ParamId::MuCost] + params[ParamId::SigmaCost] * z_cost);
  return c;
}

std::vector<std::size_t> cap_trips(std::span<const ChoiceObservation> obs, std::size_t cap,
                                   std::uint64_t seed) {
  if (cap < 1) throw SpecError("cap_trips: cap must be at least 1");
  std::vector<std::size_t> keep;
  using Key = std::tuple<Mode, bool, Weather>;
  std::map<Key, std::vector<std::size_t>> strata;
  std::size_t n_rp = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].source == Source::SP) {
      keep.push_back(i);
      continue;
    }
    ++n_rp;
    strata[{obs[i].chosen, obs[i].purpose_work_study, obs[i].weather}].push_back(i);
  }
  if (n_rp <= cap) {
    std::vector<std::size_t> all(obs.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }

  struct Quota {
    std::vector<std::size_t>* members;
    std::size_t take;
    double remainder;
    std::size_t order;
  };
  std::vector<Quota> quotas;
  std::size_t allocated = 0;
  for (auto& [key, members] : strata) {
    const double exact = static_cast<double>(cap) * members.size() / static_cast<double>(n_rp);
    const auto whole = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({&members, whole, exact - whole, quotas.size()});
    allocated += whole;
  }
  std::vector<Quota*> by_remainder;
  for (auto& q : quotas) by_remainder.push_back(&q);
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [](const Quota* a, const Quota* b) { return a->remainder > b->remainder; });
  for (std::size_t i = 0; allocated < cap; ++i, ++allocated) by_remainder[i % by_remainder.size()]->take += 1;

  std::mt19937_64 rng(seed);
  for (auto& q : quotas) {
    auto members = *q.members;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < q.take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
      std::swap(members[i], members[pick(rng)]);
      keep.push_back(members[i]);
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<bool> cap_mask(const Dataset& data, std::size_t cap, std::uint64_t seed) {
  std::vector<bool> keep(data.num_observations(), false);
  for (std::size_t n = 0; n < data.num_persons(); ++n) {
    const auto idx = cap_trips(data.observations_of(n), cap, seed * 1000003ULL + n);
    for (std::size_t i : idx) keep[data.offset_of(n) + i] = true;
  }
  return keep;
}

namespace {

struct PersonResult {
  double ll = 0.0;
  std::array<double, kNumParams> grad{};
};

struct Workspace {
  std::vector<double> lin;        // per (obs, alt) linear utility
  std::vector<double> probs;      // per (draw, obs, alt)
  std::vector<double> draw_ll;
  std::vector<double> g_time;     // per draw
  std::vector<double> g_cost;
  std::vector<double> g_scale;
  std::vector<double> v;
};

void evaluate_person(const CompiledPerson& person, const ParameterVector& params,
                     const DrawMatrix& draws, std::size_t draw_row, bool joint, bool gradient,
                     Workspace& ws, PersonResult& out) {
  const std::size_t R = draws.draws();
  const double mu_sp = joint ? params[ParamId::ScaleSp] : 1.0;

  std::size_t cells = 0;
  for (const auto& o : person.obs) cells += o.alts.size();
  ws.lin.resize(cells);
  {
    std::size_t c = 0;
    for (const auto& o : person.obs) {
      for (const auto& a : o.alts) ws.lin[c++] = a.linear_utility(params);
    }
  }
  ws.draw_ll.assign(R, 0.0);
  if (gradient) {
    ws.probs.resize(R * cells);
    ws.g_time.assign(R, 0.0);
    ws.g_cost.assign(R, 0.0);
    ws.g_scale.assign(R, 0.0);
  }

  for (std::size_t r = 0; r < R; ++r) {
    const RandomCoefficients b = realize_random_params(draws(draw_row, r, 0), draws(draw_row, r, 1),
                                                       person.migrant, params);
    double ll_r = 0.0;
    std::size_t c = 0;
    for (const auto& o : person.obs) {
      const std::size_t J = o.alts.size();
      const double mu = o.sp ? mu_sp : 1.0;
      ws.v.resize(J);
      double vmax = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < J; ++j) {
        const AltDesign& a = o.alts[j];
        ws.v[j] = mu * (ws.lin[c + j] + b.beta_time * a.time_s + b.beta_cost * a.cost_s);
        vmax = std::max(vmax, ws.v[j]);
      }
      const double v_chosen = ws.v[o.chosen];
      double sum = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        ws.v[j] = std::exp(ws.v[j] - vmax);
        sum += ws.v[j];
      }
      ll_r += v_chosen - vmax - std::log(sum);
      if (gradient) {
        double* p = ws.probs.data() + r * cells + c;
        double mean_time = 0.0, mean_cost = 0.0, mean_u = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
          p[j] = ws.v[j] / sum;
          const AltDesign& a = o.alts[j];
          mean_time += p[j] * a.time_s;
          mean_cost += p[j] * a.cost_s;
          if (o.sp) mean_u += p[j] * (ws.lin[c + j] + b.beta_time * a.time_s + b.beta_cost * a.cost_s);
        }
        const AltDesign& ch = o.alts[o.chosen];
        ws.g_time[r] += mu * (ch.time_s - mean_time);
        ws.g_cost[r] += mu * (ch.cost_s - mean_cost) * b.beta_cost;
        if (o.sp) {
          ws.g_scale[r] += (ws.lin[c + o.chosen] + b.beta_time * ch.time_s + b.beta_cost * ch.cost_s) - mean_u;
        }
      }
      c += J;
    }
    ws.draw_ll[r] = ll_r;
  }

  const double lmax = *std::max_element(ws.draw_ll.begin(), ws.draw_ll.end());
  double total = 0.0;
  for (double l : ws.draw_ll) total += std::exp(l - lmax);
  out.ll = lmax + std::log(total / static_cast<double>(R));
  if (!std::isfinite(out.ll)) {
    throw NumericError("simulated probability underflows to zero for person " + person.person_id);
  }
  if (!gradient) return;

  // Posterior weights over draws.
  std::vector<double> w(R);
  for (std::size_t r = 0; r < R; ++r) w[r] = std::exp(ws.draw_ll[r] - lmax) / total;

  std::array<double, kNumParams>& g = out.grad;
  for (std::size_t r = 0; r < R; ++r) {
    const double zt = draws(draw_row, r, 0);
    const double zc = draws(draw_row, r, 1);
    g[index_of(ParamId::MuTime)] += w[r] * ws.g_time[r];
    g[index_of(ParamId::SigmaTime)] += w[r] * ws.g_time[r] * zt;
    g[index_of(ParamId::MuCost)] += w[r] * ws.g_cost[r];
    g[index_of(ParamId::SigmaCost)] += w[r] * ws.g_cost[r] * zc;
    g[index_of(ParamId::ScaleSp)] += w[r] * ws.g_scale[r];
  }
  if (person.migrant) g[index_of(ParamId::DeltaMig)] = g[index_of(ParamId::MuTime)];

  // Linear coefficients: mu (x_chosen - sum_j Pbar_j x_j) with Pbar the
  // posterior-weighted probabilities.
  std::size_t c = 0;
  for (const auto& o : person.obs) {
    const double mu = o.sp ? mu_sp : 1.0;
    for (std::size_t j = 0; j < o.alts.size(); ++j) {
      double pbar = 0.0;
      for (std::size_t r = 0; r < R; ++r) pbar += w[r] * ws.probs[r * cells + c + j];
      const double weight = mu * ((j == o.chosen ? 1.0 : 0.0) - pbar);
      for (const auto& t : o.alts[j].linear_terms()) g[index_of(t.param)] += weight * t.value;
    }
    c += o.alts.size();
  }
}

void require_draws(const EstimationData& data, const DrawMatrix& draws) {
  if (draws.dims() < kNumRandomDims) throw SpecError("draw matrix needs two random dimensions");
  for (const auto& p : data.persons) {
    if (p.person_index >= draws.persons()) throw SpecError("draw matrix does not cover every person");
  }
}

}  // namespace

LikelihoodValue panel_simulated_loglikelihood(const EstimationData& data,
                                              const ParameterVector& params,
                                              const DrawMatrix& draws, const EvalOptions& options) {
  require_draws(data, draws);
  const bool joint = data.spec.joint();
  std::vector<PersonResult> parts(data.persons.size());
  detail::parallel_for(data.persons.size(), options.workers, [&](std::size_t n) {
    const CompiledPerson& person = data.persons[n];
    if (person.obs.empty()) return;
    thread_local Workspace ws;
    evaluate_person(person, params, draws, person.person_index, joint, options.gradient, ws, parts[n]);
  });

  LikelihoodValue result;
  result.gradient = Eigen::VectorXd::Zero(kNumParams);
  if (options.person_scores) result.person_scores = Eigen::MatrixXd::Zero(parts.size(), kNumParams);
  for (std::size_t n = 0; n < parts.size(); ++n) {
    result.ll += parts[n].ll;
    for (std::size_t k = 0; k < kNumParams; ++k) {
      if (!data.spec.included.test(k)) continue;
      result.gradient[k] += parts[n].grad[k];
      if (options.person_scores) result.person_scores(n, k) = parts[n].grad[k];
    }
  }
  return result;
}

std::vector<double> person_draw_loglikelihoods(const CompiledPerson& person,
                                               const ParameterVector& params,
                                               const DrawMatrix& draws, bool joint) {
  if (person.person_index >= draws.persons()) throw SpecError("draw matrix does not cover person");
  Workspace ws;
  PersonResult out;
  if (person.obs.empty()) return std::vector<double>(draws.draws(), 0.0);
  evaluate_person(person, params, draws, person.person_index, joint, false, ws, out);
  return ws.draw_ll;
}

}  // namespace tripchoice
