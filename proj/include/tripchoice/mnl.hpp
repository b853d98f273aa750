#pragma once

#include <array>
#include <span>
#include <vector>

#include "tripchoice/choice_data.hpp"
#include "tripchoice/likelihood.hpp"
#include "tripchoice/parameters.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

using ModeUtilities = std::array<double, kNumModes>;
using ModeProbabilities = std::array<double, kNumModes>;

/// Logit probabilities over the available alternatives with max-shift.
/// Unavailable alternatives receive exactly 0. Throws SpecError when fewer
/// than two alternatives are available.
ModeProbabilities choice_probabilities(const ModeUtilities& v, const ModeAvailability& available);

/// In-place max-shifted softmax over a dense utility vector; returns the
/// log of the normalising sum after the shift, i.e. logsumexp(v) - max(v).
double softmax_inplace(std::span<double> v);

struct EvalOptions {
  bool gradient = true;
  bool person_scores = false;
  int workers = 1;
};

/// Sum over observations of log P(chosen) with the analytic gradient.
/// Throws NumericError naming the observation if P(chosen) underflows to 0.
LikelihoodValue mnl_loglikelihood(const EstimationData& data, const ParameterVector& params,
                                  const EvalOptions& options = {});

/// Sum over observations of ln(1/|available|).
double null_loglikelihood(const EstimationData& data);
double null_loglikelihood(const Dataset& data);

}  // namespace tripchoice
