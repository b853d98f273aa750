#include "tripchoice/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tripchoice {

namespace {

std::string fmt(const char* pattern, double v) {
  if (!std::isfinite(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false) {
  // Width in code points so labels with Greek letters line up.
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xC0) != 0x80 ? 1 : 0;
  if (cps >= width) return s;
  const std::string fill(width - cps, ' ');
  return left ? s + fill : fill + s;
}

std::string level_label(double sd) {
  if (sd == 0.0) return "Mean";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+g SD", sd);
  return buf;
}

bool any_present(const std::vector<EstimationResult>& results, ParamId p) {
  for (const auto& r : results) {
    if (r.row(p)) return true;
  }
  return false;
}

std::string model_name(const EstimationResult& r) {
  return r.spec_name.empty() ? std::string(to_string(r.kind)) : r.spec_name;
}

}  // namespace

std::string parameter_table(const std::vector<EstimationResult>& results) {
  constexpr std::size_t label_w = 28, col_w = 20;
  std::ostringstream out;
  out << pad("Parameter", label_w, true);
  for (const auto& r : results) out << pad(model_name(r), col_w);
  out << "\n";
  for (std::size_t k = 0; k < kNumParams; ++k) {
    const ParamId p = param_at(k);
    if (!any_present(results, p)) continue;
    out << pad(std::string(param_label(p)), label_w, true);
    for (const auto& r : results) {
      const ParameterEstimate* e = r.row(p);
      std::string cell;
      if (e) {
        cell = fmt("%.3f", e->estimate);
        cell += e->frozen ? " (fixed)" : " (" + fmt("%.2f", e->robust_t) + ")";
      }
      out << pad(cell, col_w);
    }
    out << "\n";
  }
  return out.str();
}

std::string parameter_csv(const std::vector<EstimationResult>& results) {
  std::ostringstream out;
  out << "model,parameter,estimate,robust_se,robust_t,frozen\n";
  for (const auto& r : results) {
    for (const auto& e : r.rows) {
      out << model_name(r) << ',' << param_name(e.id) << ',' << fmt("%.6g", e.estimate) << ','
          << fmt("%.6g", e.robust_se) << ',' << fmt("%.6g", e.robust_t) << ',' << (e.frozen ? 1 : 0)
          << "\n";
    }
  }
  return out.str();
}

std::string fit_table(const std::vector<EstimationResult>& results, const std::vector<const CvReport*>& cv) {
  constexpr std::size_t label_w = 24, col_w = 16;
  std::ostringstream out;
  out << pad("Statistic", label_w, true);
  for (const auto& r : results) out << pad(model_name(r), col_w);
  out << "\n";
  auto line = [&](const char* label, auto cell) {
    out << pad(label, label_w, true);
    for (std::size_t i = 0; i < results.size(); ++i) out << pad(cell(i), col_w);
    out << "\n";
  };
  line("Observations", [&](std::size_t i) { return std::to_string(results[i].n_obs); });
  line("Persons", [&](std::size_t i) { return std::to_string(results[i].n_persons); });
  line("Parameters (K)", [&](std::size_t i) { return std::to_string(results[i].n_params); });
  line("LL(0)", [&](std::size_t i) { return fmt("%.1f", results[i].ll0); });
  line("LL(final)", [&](std::size_t i) { return fmt("%.1f", results[i].ll_final); });
  line("Adj. rho2(0)", [&](std::size_t i) { return fmt("%.3f", results[i].adj_rho2); });
  line("AIC", [&](std::size_t i) { return fmt("%.1f", results[i].aic); });
  if (!cv.empty()) {
    line("CV accuracy (%)", [&](std::size_t i) {
      if (i >= cv.size() || !cv[i]) return std::string("-");
      return fmt("%.1f", 100.0 * cv[i]->mean) + " ± " + fmt("%.1f", 100.0 * cv[i]->sd);
    });
  }
  return out.str();
}

std::string vot_table(const std::vector<VotRow>& rows) {
  std::ostringstream out;
  out << pad("Model", 12, true) << pad("Population", 16, true) << pad("IVTT (CAD/h)", 14)
      << pad("Walk (CAD/h)", 14) << pad("Ratio", 8) << "\n";
  for (const auto& r : rows) {
    out << pad(r.model, 12, true) << pad(r.population, 16, true) << pad(fmt("%.1f", r.ivtt), 14)
        << pad(fmt("%.1f", r.walk), 14) << pad(r.has_ratio ? fmt("%.2f", r.ratio) : "", 8) << "\n";
  }
  return out.str();
}

std::string sweep_text(const SweepTable& t) {
  constexpr std::size_t w = 12;
  const bool fare = t.lever == "fare";
  std::ostringstream out;
  out << pad(fare ? "Fare (CAD)" : "Access (min)", 14, true);
  for (double l : t.levels_sd) out << pad(level_label(l), w);
  out << "\n";
  for (std::size_t r = 0; r < t.lever_values.size(); ++r) {
    out << pad(fmt(fare ? "%.2f" : "%.0f", t.lever_values[r]), 14, true);
    for (double v : t.transit_pct[r]) out << pad(fmt("%.1f", v), w);
    out << "\n";
  }
  if (!t.lever_values.empty()) {
    out << pad("Gain (pp)", 14, true);
    for (double g : t.gain_pp) out << pad(fmt("%+.1f", g), w);
    out << "\n";
  }
  return out.str();
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  out << t.lever;
  for (double l : t.levels_sd) out << ",transit_pct_" << fmt("%+g", l);
  out << "\n";
  for (std::size_t r = 0; r < t.lever_values.size(); ++r) {
    out << fmt("%g", t.lever_values[r]);
    for (double v : t.transit_pct[r]) out << ',' << fmt("%.4f", v);
    out << "\n";
  }
  return out.str();
}

std::string gradient_csv(const GradientCurve& c) {
  std::ostringstream out;
  out << "step,level_sd,mode,probability\n";
  for (std::size_t i = 0; i < c.level_sd.size(); ++i) {
    for (Mode m : kRpModes) {
      out << i << ',' << fmt("%.4f", c.level_sd[i]) << ',' << to_string(m) << ','
          << fmt("%.6f", c.probabilities[i][index_of(m)]) << "\n";
    }
  }
  return out.str();
}

}  // namespace tripchoice
