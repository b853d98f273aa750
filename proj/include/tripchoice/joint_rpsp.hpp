#pragma once

#include <cstddef>

#include "tripchoice/choice_data.hpp"

namespace tripchoice {

struct PooledData {
  Dataset data;
  std::size_t n_rp = 0;
  std::size_t n_sp = 0;
  /// False when there are no SP observations: mu_SP cannot be estimated.
  bool scale_identified = false;

  double rp_sp_ratio() const;
};

/// Merges an RP and an SP dataset. Persons are matched by id; a person present
/// in both must have the same profile. Source tags are preserved.
PooledData pool_rp_sp(const Dataset& rp, const Dataset& sp);

/// All SP observations plus only the RP trips flagged as SP triggers.
/// Throws DataError if no RP observation carries the flag.
Dataset balanced_subsample(const Dataset& joint);

}  // namespace tripchoice
