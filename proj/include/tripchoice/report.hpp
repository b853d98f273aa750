#pragma once

#include <string>
#include <vector>

#include "tripchoice/analysis.hpp"
#include "tripchoice/estimation.hpp"
#include "tripchoice/scenario.hpp"
#include "tripchoice/validation.hpp"

namespace tripchoice {

/// Fixed-width table: one row per parameter, one "estimate (robust t)" column
/// per result. Parameters absent from a result are left blank.
std::string parameter_table(const std::vector<EstimationResult>& results);
std::string parameter_csv(const std::vector<EstimationResult>& results);

/// Observations, persons, K, LL(0), LL(final), adjusted rho2, AIC and,
/// when given, CV accuracy per result.
std::string fit_table(const std::vector<EstimationResult>& results,
                      const std::vector<const CvReport*>& cv = {});

std::string vot_table(const std::vector<VotRow>& rows);

/// Transit share in percent (one decimal) per lever value and integration
/// level, closed by a "Gain (pp)" row.
std::string sweep_text(const SweepTable& table);
std::string sweep_csv(const SweepTable& table);

/// Plot-ready long series: step, level_sd, mode, probability.
std::string gradient_csv(const GradientCurve& curve);

}  // namespace tripchoice
