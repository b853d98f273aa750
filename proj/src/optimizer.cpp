#include "tripchoice/optimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tripchoice/errors.hpp"

namespace tripchoice {

double OptimizeResult::gradient_max_norm() const {
  return gradient.size() == 0 ? 0.0 : gradient.cwiseAbs().maxCoeff();
}

namespace {

using Eigen::VectorXd;

std::string describe(const VectorXd& x) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << "]";
  return os.str();
}

// Minimisation view over the free coordinates.
class Reduced {
 public:
  Reduced(const ObjectiveFn& f, VectorXd full, std::vector<Eigen::Index> free)
      : f_(f), full_(std::move(full)), free_(std::move(free)) {}

  double operator()(const VectorXd& z, VectorXd* g) const {
    VectorXd x = expand(z);
    VectorXd full_grad;
    const double v = f_(x, g ? &full_grad : nullptr);
    ++evaluations;
    if (g) {
      g->resize(static_cast<Eigen::Index>(free_.size()));
      for (std::size_t i = 0; i < free_.size(); ++i) (*g)[i] = -full_grad[free_[i]];
    }
    return -v;
  }

  VectorXd expand(const VectorXd& z) const {
    VectorXd x = full_;
    for (std::size_t i = 0; i < free_.size(); ++i) x[free_[i]] = z[static_cast<Eigen::Index>(i)];
    return x;
  }

  VectorXd reduce(const VectorXd& x) const {
    VectorXd z(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t i = 0; i < free_.size(); ++i) z[static_cast<Eigen::Index>(i)] = x[free_[i]];
    return z;
  }

  mutable int evaluations = 0;

 private:
  const ObjectiveFn& f_;
  VectorXd full_;
  std::vector<Eigen::Index> free_;
};

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  VectorXd g;
};

double cubic_min(const LinePoint& a, const LinePoint& b) {
  const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
  }
  return 0.5 * (a.alpha + b.alpha);
}

// Strong-Wolfe line search for minimisation.
bool wolfe_search(const Reduced& f, const VectorXd& z, double f0, const VectorXd& g0,
                  const VectorXd& dir, LinePoint& out) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  const double slope0 = g0.dot(dir);
  if (!(slope0 < 0.0)) return false;

  auto eval = [&](double alpha) {
    LinePoint p;
    p.alpha = alpha;
    p.f = f(z + alpha * dir, &p.g);
    p.slope = std::isfinite(p.f) ? p.g.dot(dir) : std::numeric_limits<double>::quiet_NaN();
    return p;
  };
  auto finite = [](const LinePoint& p) { return std::isfinite(p.f) && std::isfinite(p.slope); };

  auto zoom = [&](LinePoint lo, LinePoint hi) {
    for (int i = 0; i < 40; ++i) {
      LinePoint p = eval(cubic_min(lo, hi));
      if (!finite(p) || p.f > f0 + c1 * p.alpha * slope0 || p.f >= lo.f) {
        hi = p;
        if (!finite(p)) hi.f = std::numeric_limits<double>::max(), hi.slope = 0.0;
      } else {
        if (std::abs(p.slope) <= -c2 * slope0) {
          out = p;
          return true;
        }
        if (p.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = p;
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    if (lo.alpha > 0.0 && lo.f < f0) {
      out = lo;
      return true;
    }
    return false;
  };

  LinePoint prev{0.0, f0, slope0, g0};
  double alpha = 1.0;
  for (int i = 0; i < 30; ++i) {
    LinePoint p = eval(alpha);
    if (!finite(p)) {
      // Step into a non-finite region: shrink.
      alpha = 0.5 * (prev.alpha + alpha);
      if (alpha - prev.alpha < 1e-14) return false;
      continue;
    }
    if (p.f > f0 + c1 * alpha * slope0 || (i > 0 && p.f >= prev.f)) return zoom(prev, p);
    if (std::abs(p.slope) <= -c2 * slope0) {
      out = p;
      return true;
    }
    if (p.slope >= 0.0) return zoom(p, prev);
    prev = p;
    alpha *= 2.0;
  }
  return false;
}

}  // namespace

OptimizeResult maximize(const ObjectiveFn& objective, const Eigen::VectorXd& start,
                        const std::vector<bool>& frozen, const OptimizerOptions& options) {
  if (!frozen.empty() && frozen.size() != static_cast<std::size_t>(start.size())) {
    throw OptimizationError("frozen mask size does not match the parameter vector");
  }
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < start.size(); ++i) {
    if (frozen.empty() || !frozen[static_cast<std::size_t>(i)]) free.push_back(i);
  }
  Reduced f(objective, start, free);

  OptimizeResult result;
  VectorXd z = f.reduce(start);
  VectorXd g;
  double fz = f(z, &g);
  if (!std::isfinite(fz) || !g.allFinite()) {
    throw OptimizationError("objective is not finite at the start point " + describe(start));
  }
  const Eigen::Index n = z.size();
  // Unscaled first step of unit length.
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, g.norm());
  bool scaled = false;
  int small_steps = 0;
  result.status = "iteration limit reached";

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (n == 0 || g.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
      result.converged = true;
      result.status = "gradient tolerance";
      break;
    }
    VectorXd dir = -H * g;
    if (g.dot(dir) >= 0.0) {
      H = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, g.norm());
      scaled = false;
      dir = -g;
    }
    LinePoint p;
    bool found = wolfe_search(f, z, fz, g, dir, p);
    if (!found && scaled) {
      H = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, g.norm());
      scaled = false;
      dir = -H * g;
      found = wolfe_search(f, z, fz, g, dir, p);
    }
    if (!found) {
      result.status = "line search failed";
      break;
    }
    {
      const VectorXd s = p.alpha * dir;
      const VectorXd y = p.g - g;
      const double improvement = fz - p.f;
      z += s;
      const double previous = fz;
      fz = p.f;
      g = p.g;
      const double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        if (!scaled) {
          H = Eigen::MatrixXd::Identity(n, n) * (sy / y.dot(y));
          scaled = true;
        }
        const double rho = 1.0 / sy;
        const VectorXd Hy = H * y;
        H += (rho * rho * y.dot(Hy) + rho) * s * s.transpose() - rho * (Hy * s.transpose() + s * Hy.transpose());
      }
      if (improvement <= options.relative_tolerance * std::max(1.0, std::abs(previous))) {
        if (++small_steps >= 2) {
          ++it;
          result.converged = true;
          result.status = "relative tolerance";
          break;
        }
      } else {
        small_steps = 0;
      }
    }
  }
  if (it >= options.max_iterations && !result.converged) result.status = "iteration limit reached";

  result.x = f.expand(z);
  result.value = -fz;
  result.gradient = -g;
  result.iterations = it;
  if (result.status == "line search failed" && g.cwiseAbs().maxCoeff() < 1e3 * options.gradient_tolerance) {
    // Stalled at numerical precision next to the optimum.
    result.converged = true;
    result.status = "line search stalled at optimum";
  }
  return result;
}

Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double rel_step) {
  VectorXd g(x.size());
  VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double up = f(xp);
    xp[i] = x[i] - h;
    const double down = f(xp);
    xp[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd numeric_hessian(const ObjectiveFn& objective, const Eigen::VectorXd& x,
                                double rel_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  VectorXd xp = x, gu, gd;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    objective(xp, &gu);
    xp[i] = x[i] - h;
    objective(xp, &gd);
    xp[i] = x[i];
    H.col(i) = (gu - gd) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd invert_hessian(const Eigen::MatrixXd& hessian) {
  if (hessian.size() == 0) return hessian;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(hessian);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!hessian.allFinite() || !(cond < 1e14)) {
    std::ostringstream os;
    os << "singular Hessian (condition estimate " << cond << ")";
    throw NumericError(os.str());
  }
  return hessian.fullPivLu().inverse();
}

RobustCovariance robust_covariance(const Eigen::MatrixXd& cluster_scores,
                                   const Eigen::MatrixXd& hessian_inverse) {
  const auto G = static_cast<double>(cluster_scores.rows());
  if (G < 2) throw NumericError("robust covariance needs at least two clusters");
  const Eigen::MatrixXd meat = cluster_scores.transpose() * cluster_scores;
  RobustCovariance out;
  out.degenerate = cluster_scores.isZero(0.0);
  out.covariance = hessian_inverse * meat * hessian_inverse * (G / (G - 1.0));
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

FitStatistics fit_statistics(double ll0, double ll_final, int n_params, std::size_t /*n_obs*/) {
  FitStatistics s;
  s.aic = 2.0 * n_params - 2.0 * ll_final;
  s.adj_rho2 = 1.0 - (ll_final - n_params) / ll0;
  return s;
}

}  // namespace tripchoice
