#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/likelihood.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/parameters.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

/// Dimension order of the random coefficients.
enum class RandomDim : std::size_t { Time = 0, Cost = 1 };
inline constexpr std::size_t kNumRandomDims = 2;

/// Radical inverse of `index` in `base`: 1 -> 1/2, 2 -> 1/4, 3 -> 3/4 for base 2.
double radical_inverse(std::uint64_t index, unsigned base);

/// Standard-normal quantile.
double inverse_normal_cdf(double u);

/// Standard-normal draws per person, draw and dimension. Fixed before
/// optimisation starts and never regenerated during it.
class DrawMatrix {
 public:
  struct Generator {
    std::string kind;  ///< "halton" or "pseudo-random"
    std::vector<unsigned> bases;
    std::size_t discard = 0;
    std::uint64_t seed = 0;
  };

  DrawMatrix() = default;
  DrawMatrix(std::size_t persons, std::size_t draws, std::size_t dims, Generator generator);

  std::size_t persons() const { return persons_; }
  std::size_t draws() const { return draws_; }
  std::size_t dims() const { return dims_; }
  const Generator& generator() const { return generator_; }

  double operator()(std::size_t person, std::size_t draw, std::size_t dim) const {
    return data_[(person * draws_ + draw) * dims_ + dim];
  }
  double& operator()(std::size_t person, std::size_t draw, std::size_t dim) {
    return data_[(person * draws_ + draw) * dims_ + dim];
  }

  /// Copy restricted to one person (row 0 of the result).
  DrawMatrix person_slice(std::size_t person) const;

 private:
  std::size_t persons_ = 0;
  std::size_t draws_ = 0;
  std::size_t dims_ = 0;
  Generator generator_;
  std::vector<double> data_;
};

/// Halton draws in prime bases 2, 3, 5, ... (one per dimension). The first
/// `discard` points are dropped and the remaining sequence is dealt out to
/// persons in consecutive blocks of `n_draws`, then mapped through the normal
/// quantile. Unscrambled, so `seed` is recorded but does not alter the points.
DrawMatrix halton_draws(std::size_t n_persons, std::size_t n_dims, std::size_t n_draws,
                        std::size_t discard = 10, std::uint64_t seed = 0);

DrawMatrix pseudo_random_draws(std::size_t n_persons, std::size_t n_dims, std::size_t n_draws,
                               std::uint64_t seed);

struct RandomCoefficients {
  double beta_time = 0.0;
  double beta_cost = 0.0;
};

/// beta_T = mu_T + delta_MIG * MIG + sigma_T * z_time,
/// beta_C = -exp(mu_C + sigma_C * z_cost).
RandomCoefficients realize_random_params(double z_time, double z_cost, bool migrant,
                                         const ParameterVector& params);

/// Indices (into `person_observations`, ascending) retained by the per-person
/// RP cap. Strata are chosen mode x work/study purpose x weather, allocated
/// proportionally with largest-remainder rounding; SP observations are kept.
std::vector<std::size_t> cap_trips(std::span<const ChoiceObservation> person_observations,
                                   std::size_t cap, std::uint64_t seed);

/// Dataset-wide keep mask after applying cap_trips person by person.
std::vector<bool> cap_mask(const Dataset& data, std::size_t cap, std::uint64_t seed);

/// Panel simulated log-likelihood sum_n log((1/R) sum_r prod_t P_nt(r)), with
/// the per-draw product formed in logs and averaged with a max-shift. The
/// analytic gradient covers the fixed coefficients and the five random-
/// coefficient hyperparameters (and mu_SP in joint models). Throws
/// NumericError naming the person if P_n underflows.
LikelihoodValue panel_simulated_loglikelihood(const EstimationData& data,
                                              const ParameterVector& params,
                                              const DrawMatrix& draws,
                                              const EvalOptions& options = {});

/// Log panel likelihood of one person at every draw: log prod_t P_nt(r).
std::vector<double> person_draw_loglikelihoods(const CompiledPerson& person,
                                               const ParameterVector& params,
                                               const DrawMatrix& draws, bool joint);

}  // namespace tripchoice
