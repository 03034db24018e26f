#pragma once

#include <cstddef>
#include <vector>

#include "brpf/functionals.hpp"

namespace brpf::experiments {

struct SeriesRow {
  std::size_t step;
  double mean;
  double lower;  // quantile at p_low
  double upper;  // quantile at p_high
};

/// Per-step mean and quantiles (linear interpolation at h = (n - 1) p) of
/// the resampled particle values.
std::vector<SeriesRow> filtering_series(const Genealogy& genealogy, double p_low, double p_high);

/// Resampled particle values at `step`. Throws Error(invalid_step) when the
/// run has no such step.
std::vector<double> particles_at(const Genealogy& genealogy, std::size_t step);

/// Time average of |filtering mean - truth| over the steps.
double tracking_error(const Genealogy& genealogy, const std::vector<double>& truth);

}  // namespace brpf::experiments
