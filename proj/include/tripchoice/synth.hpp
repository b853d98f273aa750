#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/model_spec.hpp"

namespace tripchoice {

/// Bernoulli shares of the person covariates and the integration mixture.
struct CovariateMarginals {
  double migrant = 0.33;
  double full_time = 0.60;
  double student = 0.25;
  double child_0_10 = 0.30;
  double safe = 0.80;
  double cycling_friendly = 0.75;
  double car_owned = 0.83;
  double bike_owned = 0.50;
  double integration_mean_migrant = 6.7;
  double integration_mean_native = 8.5;
  double integration_spread = 1.5;
};

/// Independent covariate draws; integration from a two-component normal
/// mixture by migrant status, clamped to [1, 10] and centred over persons.
std::vector<PersonProfile> generate_population(std::size_t n_persons,
                                               const CovariateMarginals& marginals,
                                               std::uint64_t seed);

struct SimulationOptions {
  std::size_t rp_per_person = 100;
  std::size_t sp_per_person = 0;  ///< used only for joint structures
  bool noise = true;              ///< Gumbel errors; false gives argmax V
  double snow_share = 0.12;
  double work_share = 0.40;
  std::uint64_t seed = 1;
};

/// Draws attributes per mode, then choices from V plus Gumbel noise. MXL
/// structures draw one (beta_T, beta_C) per person from the random-coefficient
/// distributions. SP choices use mu_SP * V and may include e-mobility; every
/// SP observation marks one RP trip of the same person as its trigger.
Dataset simulate_choices(const std::vector<PersonProfile>& persons,
                         const ParameterVector& true_params, const ModelSpec& spec,
                         const SimulationOptions& options);

/// Standard Gumbel variate from a uniform in (0, 1).
double gumbel_from_uniform(double u);

struct RecoveryRow {
  ParamId id = ParamId::AscBus;
  double truth = 0.0;
  double estimate = 0.0;
  double bias = 0.0;
  double z = 0.0;  ///< |estimate - truth| / robust SE
  bool flagged = false;  ///< z > 3
};

/// Per-parameter comparison of an estimate with the generating values over
/// the free parameters. Throws SpecError if the parameter sets differ.
std::vector<RecoveryRow> recovery_report(const ParameterVector& truth,
                                         const EstimationResult& estimated);

}  // namespace tripchoice
