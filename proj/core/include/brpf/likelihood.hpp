#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brpf/state_space_model.hpp"
#include "brpf/trial_counter.hpp"

namespace brpf {

/// What one resampling step leaves behind for likelihood estimation.
struct StepRecord {
  std::size_t particles = 0;
  double weight_sum = 0.0;    // sum of exact or estimated weights (EWPF, RWPF)
  double constant_sum = 0.0;  // sum of factorization constants (BRPF)
  TrialCounter trials;        // race trial counts (BRPF)
  std::uint64_t total_flips = 0;
};

struct LikelihoodEstimate {
  std::vector<double> per_step_factors;
  double log_value = 0.0;

  double value() const { return std::exp(log_value); }
};

/**
 * Product of per-step factors. EWPF / RWPF: (1/N) sum w. BRPF:
 * (1/N) sum c * (N - 1) / (sum C - 1), unbiased because the second factor
 * is the unbiased estimator of the race's stopping probability.
 *
 * Throws Error(insufficient_draws) for a BRPF record with fewer than two
 * draws and Error(degenerate_step) for a non-positive factor.
 */
LikelihoodEstimate estimate_likelihood(Strategy strategy, std::span<const StepRecord> records);

}  // namespace brpf
