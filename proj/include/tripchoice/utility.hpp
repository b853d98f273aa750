#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/model_spec.hpp"
#include "tripchoice/parameters.hpp"

namespace tripchoice {

struct UtilityTerm {
  ParamId param = ParamId::AscBus;
  double value = 0.0;
};

/// Systematic utility of one alternative split into the part that is linear in
/// the fixed coefficients and the two attributes carrying the time and cost
/// coefficients, which the caller injects (fixed for MNL, per draw for MXL).
struct AltDesign {
  static constexpr std::size_t kMaxTerms = 8;

  Mode alt = Mode::Car;
  std::array<UtilityTerm, kMaxTerms> terms{};
  std::size_t num_terms = 0;
  double time_s = 0.0;
  double cost_s = 0.0;

  std::span<const UtilityTerm> linear_terms() const { return {terms.data(), num_terms}; }
  double linear_utility(const ParameterVector& params) const;
};

/// Design row for `alt` under the inclusion mask of `spec`.
/// Throws SpecError for e-mobility on an RP observation.
AltDesign design_row(const ChoiceObservation& obs, const PersonProfile& person,
                     const ModelSpec& spec, Mode alt);

/// Unscaled systematic utility V. beta_time and beta_cost are the effective
/// coefficients. Throws SpecError if `params` carries a coefficient the spec
/// excludes, or for e-mobility on an RP observation.
double systematic_utility(const ChoiceObservation& obs, const PersonProfile& person,
                          const ParameterVector& params, double beta_time, double beta_cost,
                          const ModelSpec& spec, Mode alt);

/// mu_SP * V for stated-preference observations, V otherwise.
double apply_sp_scale(double v, Source source, double mu_sp);

/// Throws SpecError listing every present coefficient the spec does not include.
void check_params_in_spec(const ParameterVector& params, const ModelSpec& spec);

/// An observation compiled for likelihood evaluation: available alternatives
/// only, with the chosen one located.
struct CompiledObservation {
  std::size_t source_index = 0;  ///< index in Dataset::observations()
  bool sp = false;
  std::size_t chosen = 0;        ///< position in `alts`
  std::vector<AltDesign> alts;
};

struct CompiledPerson {
  std::size_t person_index = 0;  ///< index in Dataset::persons(); draw row
  std::string person_id;
  bool migrant = false;
  std::vector<CompiledObservation> obs;
};

/// Estimation-ready view of a Dataset under one ModelSpec. SP observations
/// are dropped for RP-only structures. Persons may have zero observations
/// (e.g. a cross-validation training split).
struct EstimationData {
  ModelSpec spec;
  std::vector<CompiledPerson> persons;
  std::size_t num_persons_total = 0;  ///< persons in the source dataset

  std::size_t num_observations() const;
  std::size_t num_sp() const;
};

/// `keep`, when non-empty, selects observations by Dataset index.
EstimationData compile(const Dataset& data, const ModelSpec& spec,
                       const std::vector<bool>& keep = {});

}  // namespace tripchoice
