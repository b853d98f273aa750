#include "tripchoice/parameters.hpp"

#include <string>

#include "tripchoice/errors.hpp"

namespace tripchoice {
namespace {

struct ParamInfo {
  std::string_view name;
  std::string_view label;
};

constexpr std::array<ParamInfo, kNumParams> kInfo = {{
    {"asc_bus", "α_bus"},
    {"asc_subway", "α_sub"},
    {"asc_walk", "α_walk"},
    {"asc_bike", "α_bike"},
    {"asc_emob", "α_emob"},
    {"beta_cost", "β_C (Cost)"},
    {"beta_time", "β_T (IVTT)"},
    {"beta_access", "β_A (Walk time)"},
    {"beta_dist_car", "β_D1 (Car)"},
    {"beta_dist_pt", "β_D2 (PT)"},
    {"beta_dist_train", "β_D3 (Train)"},
    {"beta_dist_active", "β_D4 (Active)"},
    {"beta_work_car", "β_W (Work/study → Car)"},
    {"beta_child_pt", "β_Ch (Child → PT)"},
    {"beta_mig_subway", "β_M (immigrant → Sub)"},
    {"beta_ft_subway", "β_F (Full-time → Sub)"},
    {"beta_stu_train", "β_St (Student → Train)"},
    {"beta_stu_walk", "β_Sw (Student → Walk)"},
    {"beta_safe_subway", "β_S (Safe → Sub)"},
    {"beta_cyc_bike", "β_Cy (Cycle-fr. → Bike)"},
    {"beta_integ_pt", "β_I1 (INTEG_C → PT)"},
    {"beta_integ_active", "β_I2 (INTEG_C → Act)"},
    {"beta_snow_active", "β_Sn (Snow → Active)"},
    {"mu_time", "μ_T (IVTT mean)"},
    {"sigma_time", "σ_T (IVTT s.d.)"},
    {"delta_mig", "δ_MIG (immigrant shift)"},
    {"mu_cost", "μ_C (Cost log-mean)"},
    {"sigma_cost", "σ_C (Cost log-s.d.)"},
    {"mu_sp", "μ_SP"},
}};

}  // namespace

std::string_view param_name(ParamId p) { return kInfo[index_of(p)].name; }
std::string_view param_label(ParamId p) { return kInfo[index_of(p)].label; }

std::optional<ParamId> find_param(std::string_view name) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (kInfo[i].name == name) return param_at(i);
  }
  return std::nullopt;
}

ParamId parse_param(std::string_view name) {
  if (auto p = find_param(name)) return *p;
  throw SpecError("unknown parameter '" + std::string(name) + "'");
}

void ParameterVector::set(ParamId p, double value) {
  values_[index_of(p)] = value;
  present_.set(index_of(p));
}

void ParameterVector::erase(ParamId p) {
  values_[index_of(p)] = 0.0;
  present_.reset(index_of(p));
  frozen_.reset(index_of(p));
}

void ParameterVector::freeze(ParamId p, bool frozen) { frozen_.set(index_of(p), frozen); }

std::vector<ParamId> ParameterVector::ids() const {
  std::vector<ParamId> out;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (present_.test(i)) out.push_back(param_at(i));
  }
  return out;
}

void ParameterVector::validate() const {
  for (ParamId p : {ParamId::SigmaTime, ParamId::SigmaCost}) {
    if (has(p) && (*this)[p] < 0.0) {
      throw SpecError(std::string(param_name(p)) + " must be nonnegative");
    }
  }
  if (has(ParamId::ScaleSp) && !((*this)[ParamId::ScaleSp] > 0.0)) {
    throw SpecError("mu_sp must be positive");
  }
}

}  // namespace tripchoice
