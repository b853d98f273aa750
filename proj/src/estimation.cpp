#include "tripchoice/estimation.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "tripchoice/errors.hpp"
#include "tripchoice/mnl.hpp"

namespace tripchoice {

const ParameterEstimate* EstimationResult::row(ParamId p) const {
  for (const auto& r : rows) {
    if (r.id == p) return &r;
  }
  return nullptr;
}

namespace {

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

nlohmann::json to_json(const EstimationResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : r.rows) {
    rows.push_back({{"parameter", std::string(param_name(e.id))},
                    {"estimate", number(e.estimate)},
                    {"robust_se", number(e.robust_se)},
                    {"robust_t", number(e.robust_t)},
                    {"classical_se", number(e.classical_se)},
                    {"frozen", e.frozen}});
  }
  return {{"spec", r.spec_name},
          {"model", std::string(to_string(r.kind))},
          {"parameters", rows},
          {"ll0", r.ll0},
          {"ll_final", r.ll_final},
          {"adj_rho2", r.adj_rho2},
          {"aic", r.aic},
          {"n_obs", r.n_obs},
          {"n_persons", r.n_persons},
          {"n_params", r.n_params},
          {"n_random", r.n_random},
          {"draws", r.draws},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"gradient_norm", r.gradient_norm},
          {"warnings", r.warnings}};
}

EstimationResult result_from_json(const nlohmann::json& j) {
  EstimationResult r;
  try {
    r.spec_name = j.at("spec").get<std::string>();
    r.kind = parse_spec_kind(j.at("model").get<std::string>());
    for (const auto& row : j.at("parameters")) {
      ParameterEstimate e;
      e.id = parse_param(row.at("parameter").get<std::string>());
      e.estimate = number_from(row.at("estimate"));
      e.robust_se = number_from(row.at("robust_se"));
      e.robust_t = number_from(row.at("robust_t"));
      e.classical_se = number_from(row.value("classical_se", nlohmann::json(nullptr)));
      e.frozen = row.value("frozen", false);
      r.estimates.set(e.id, e.estimate);
      r.estimates.freeze(e.id, e.frozen);
      r.rows.push_back(e);
    }
    r.ll0 = j.at("ll0").get<double>();
    r.ll_final = j.at("ll_final").get<double>();
    r.adj_rho2 = j.at("adj_rho2").get<double>();
    r.aic = j.at("aic").get<double>();
    r.n_obs = j.at("n_obs").get<std::size_t>();
    r.n_persons = j.value("n_persons", std::size_t{0});
    r.n_params = j.at("n_params").get<int>();
    r.n_random = j.value("n_random", 0);
    r.draws = j.value("draws", 0);
    r.converged = j.value("converged", false);
    r.iterations = j.value("iterations", 0);
    r.gradient_norm = j.value("gradient_norm", 0.0);
    r.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed estimation result: ") + e.what());
  }
  return r;
}

void save_result(const std::filesystem::path& path, const EstimationResult& r) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(r).dump(2) << "\n";
}

EstimationResult load_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("file not found: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return result_from_json(j);
}

ParameterTransform::ParameterTransform(const ModelSpec& spec, const ParameterVector& start)
    : template_(start) {
  for (std::size_t k = 0; k < kNumParams; ++k) {
    const ParamId p = param_at(k);
    if (!spec.includes(p)) continue;
    ids_.push_back(p);
    frozen_.push_back(start.frozen(p));
  }
}

Eigen::VectorXd ParameterTransform::to_internal(const ParameterVector& p) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(ids_.size()));
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const double v = p[ids_[i]];
    if (is_log_transformed(ids_[i])) {
      if (!(v > 0.0)) {
        throw SpecError(std::string(param_name(ids_[i])) + " must be positive to start estimation");
      }
      x[static_cast<Eigen::Index>(i)] = std::log(v);
    } else {
      x[static_cast<Eigen::Index>(i)] = v;
    }
  }
  return x;
}

ParameterVector ParameterTransform::to_natural(const Eigen::VectorXd& x) const {
  ParameterVector p = template_;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const double v = x[static_cast<Eigen::Index>(i)];
    p.set(ids_[i], is_log_transformed(ids_[i]) ? std::exp(v) : v);
  }
  return p;
}

Eigen::VectorXd ParameterTransform::jacobian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd d(x.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    d[k] = is_log_transformed(ids_[i]) ? std::exp(x[k]) : 1.0;
  }
  return d;
}

Eigen::VectorXd ParameterTransform::internal_gradient(const Eigen::VectorXd& natural,
                                                      const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d = jacobian(x);
  Eigen::VectorXd g(x.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    g[k] = natural[static_cast<Eigen::Index>(index_of(ids_[i]))] * d[k];
  }
  return g;
}

namespace {

ParameterVector complete_start(const ModelSpec& spec, const std::optional<ParameterVector>& given) {
  ParameterVector start = start_values(spec);
  if (!given) return start;
  check_params_in_spec(*given, spec);
  for (ParamId p : given->ids()) {
    start.set(p, (*given)[p]);
    start.freeze(p, given->frozen(p));
  }
  start.validate();
  return start;
}

}  // namespace

EstimationResult estimate_compiled(const EstimationData& data, const DrawMatrix* draws,
                                   const EstimationOptions& options) {
  const ModelSpec& spec = data.spec;
  validate_spec(spec);
  if (spec.mixed() && draws == nullptr) throw SpecError("mixed logit estimation needs a draw matrix");
  if (data.num_observations() == 0) throw DataError("no observations to estimate on");

  EstimationResult result;
  result.spec_name = spec.name;
  result.kind = spec.kind;

  ParameterVector start = complete_start(spec, options.start);
  if (spec.joint() && data.num_sp() == 0) {
    start.set(ParamId::ScaleSp, start.value_or(ParamId::ScaleSp, 1.0));
    start.freeze(ParamId::ScaleSp);
    result.warnings.push_back("mu_sp not identified: no SP observations; held at its start value");
  }
  const ParameterTransform transform(spec, start);

  EvalOptions eval;
  eval.workers = options.workers;
  auto loglik = [&](const ParameterVector& p, const EvalOptions& o) {
    return spec.mixed() ? panel_simulated_loglikelihood(data, p, *draws, o)
                        : mnl_loglikelihood(data, p, o);
  };
  const bool numeric = spec.mixed() && options.numeric_mxl_gradient;
  ObjectiveFn objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const ParameterVector p = transform.to_natural(x);
    EvalOptions o = eval;
    o.gradient = grad != nullptr && !numeric;
    LikelihoodValue v;
    try {
      v = loglik(p, o);
    } catch (const NumericError&) {
      // Underflow at a trial point: let the line search back off.
      if (grad) *grad = Eigen::VectorXd::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
      return -std::numeric_limits<double>::infinity();
    }
    if (grad) {
      if (numeric) {
        EvalOptions plain = eval;
        plain.gradient = false;
        *grad = numeric_gradient(
            [&](const Eigen::VectorXd& y) { return loglik(transform.to_natural(y), plain).ll; }, x);
      } else {
        *grad = transform.internal_gradient(v.gradient, x);
      }
    }
    return v.ll;
  };

  const Eigen::VectorXd x0 = transform.to_internal(start);
  const OptimizeResult opt = maximize(objective, x0, transform.frozen(), options.optimizer);
  Eigen::VectorXd x_hat = opt.x;
  double ll_hat = opt.value;

  std::vector<Eigen::Index> free;
  for (std::size_t i = 0; i < transform.size(); ++i) {
    if (!transform.frozen()[i]) free.push_back(static_cast<Eigen::Index>(i));
  }
  const auto nf = static_cast<Eigen::Index>(free.size());
  auto embed = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd x = x_hat;
    for (Eigen::Index i = 0; i < nf; ++i) x[free[i]] = z[i];
    return x;
  };
  ObjectiveFn reduced = [&](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
    Eigen::VectorXd full;
    const double v = objective(embed(z), grad ? &full : nullptr);
    if (grad) {
      grad->resize(nf);
      for (Eigen::Index i = 0; i < nf; ++i) (*grad)[i] = full[free[i]];
    }
    return v;
  };
  Eigen::VectorXd z(nf);
  for (Eigen::Index i = 0; i < nf; ++i) z[i] = x_hat[free[i]];

  // Newton polish with the finite-difference Hessian when quasi-Newton
  // stopped on the relative-improvement rule in a flat direction.
  Eigen::VectorXd g_hat;
  reduced(z, &g_hat);
  Eigen::MatrixXd hessian;
  int polish = 0;
  for (; nf > 0 && polish < 10 && g_hat.cwiseAbs().maxCoeff() >= options.optimizer.gradient_tolerance; ++polish) {
    hessian = numeric_hessian(reduced, z);
    const Eigen::VectorXd step = hessian.ldlt().solve(-g_hat);
    if (!step.allFinite() || g_hat.dot(step) <= 0.0) break;
    double t = 1.0;
    bool improved = false;
    for (int k = 0; k < 30 && !improved; ++k, t *= 0.5) {
      Eigen::VectorXd g_try;
      const Eigen::VectorXd z_try = z + t * step;
      const double v = reduced(z_try, &g_try);
      if (std::isfinite(v) && v >= ll_hat) {
        z = z_try;
        ll_hat = v;
        g_hat = g_try;
        improved = true;
      }
    }
    if (!improved) break;
    hessian.resize(0, 0);
  }
  x_hat = embed(z);
  const double g_norm = nf > 0 ? g_hat.cwiseAbs().maxCoeff() : 0.0;
  result.converged = opt.converged || g_norm < options.optimizer.gradient_tolerance;
  result.iterations = opt.iterations + polish;
  result.gradient_norm = g_norm;
  result.ll_final = ll_hat;
  result.estimates = transform.to_natural(x_hat);
  if (!result.converged) result.warnings.push_back("optimizer did not converge: " + opt.status);

  // Inference on the free coordinates.
  const Eigen::VectorXd jac = transform.jacobian(x_hat);
  Eigen::MatrixXd robust = Eigen::MatrixXd::Constant(nf, nf, std::numeric_limits<double>::quiet_NaN());
  Eigen::MatrixXd classical = robust;
  if (nf > 0) {
    try {
      if (hessian.size() == 0) hessian = numeric_hessian(reduced, z);
      const Eigen::MatrixXd hinv = invert_hessian(hessian);
      EvalOptions o = eval;
      o.person_scores = true;
      const LikelihoodValue v = loglik(result.estimates, o);
      std::size_t clusters = 0;
      for (const auto& p : data.persons) clusters += p.obs.empty() ? 0 : 1;
      Eigen::MatrixXd scores(static_cast<Eigen::Index>(clusters), nf);
      Eigen::Index row = 0;
      for (std::size_t n = 0; n < data.persons.size(); ++n) {
        if (data.persons[n].obs.empty()) continue;
        for (Eigen::Index i = 0; i < nf; ++i) {
          const ParamId id = transform.ids()[static_cast<std::size_t>(free[i])];
          scores(row, i) = v.person_scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(index_of(id))) * jac[free[i]];
        }
        ++row;
      }
      const RobustCovariance rc = robust_covariance(scores, hinv);
      if (rc.degenerate) result.warnings.push_back("all person scores are zero: degenerate fit");
      Eigen::VectorXd d(nf);
      for (Eigen::Index i = 0; i < nf; ++i) d[i] = jac[free[i]];
      robust = d.asDiagonal() * rc.covariance * d.asDiagonal();
      classical = d.asDiagonal() * (-hinv) * d.asDiagonal();
    } catch (const NumericError& e) {
      result.warnings.push_back(std::string("standard errors unavailable: ") + e.what());
    }
  }

  Eigen::Index fi = 0;
  for (std::size_t i = 0; i < transform.size(); ++i) {
    ParameterEstimate e;
    e.id = transform.ids()[i];
    e.estimate = result.estimates[e.id];
    e.frozen = transform.frozen()[i];
    if (!e.frozen) {
      const double rv = robust(fi, fi);
      const double cv = classical(fi, fi);
      e.robust_se = rv >= 0.0 ? std::sqrt(rv) : std::numeric_limits<double>::quiet_NaN();
      e.classical_se = cv >= 0.0 ? std::sqrt(cv) : std::numeric_limits<double>::quiet_NaN();
      e.robust_t = e.estimate / e.robust_se;
      ++fi;
    } else {
      e.robust_se = std::numeric_limits<double>::quiet_NaN();
      e.robust_t = std::numeric_limits<double>::quiet_NaN();
      e.classical_se = std::numeric_limits<double>::quiet_NaN();
    }
    result.rows.push_back(e);
  }

  result.ll0 = null_loglikelihood(data);
  result.n_obs = data.num_observations();
  for (const auto& p : data.persons) result.n_persons += p.obs.empty() ? 0 : 1;
  result.n_params = static_cast<int>(nf);
  result.n_random = spec.mixed() ? static_cast<int>(kNumRandomDims) : 0;
  result.draws = spec.mixed() ? static_cast<int>(draws->draws()) : 0;
  const FitStatistics fs = fit_statistics(result.ll0, result.ll_final, result.n_params, result.n_obs);
  result.adj_rho2 = fs.adj_rho2;
  result.aic = fs.aic;
  return result;
}

DrawMatrix draws_for(const Dataset& data, const ModelSpec& spec) {
  return halton_draws(data.num_persons(), kNumRandomDims, static_cast<std::size_t>(spec.draws),
                      static_cast<std::size_t>(spec.halton_discard), 0);
}

EstimationResult estimate(const Dataset& data, const ModelSpec& spec, const EstimationOptions& options) {
  validate_spec(spec);
  std::vector<bool> keep;
  if (spec.mixed() && spec.trip_cap > 0) {
    keep = cap_mask(data, static_cast<std::size_t>(spec.trip_cap), options.seed);
  }
  const EstimationData compiled = compile(data, spec, keep);
  if (!spec.mixed()) return estimate_compiled(compiled, nullptr, options);
  const DrawMatrix draws = draws_for(data, spec);
  return estimate_compiled(compiled, &draws, options);
}

}  // namespace tripchoice
