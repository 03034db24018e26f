#pragma once

#include <cstdint>
#include <vector>

namespace brpf {

/// Number of (proposal, flip) rounds each accepted race draw needed.
struct TrialCounter {
  std::vector<std::uint64_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  std::uint64_t total() const noexcept;
};

struct SampleMoments {
  double mean;
  double variance;  // unbiased; NaN for a single observation
};

/// Sample mean and unbiased variance of the trial counts.
/// Throws Error(empty_input) when the counter is empty.
SampleMoments geometric_sample_mean_variance(const TrialCounter& counter);

}  // namespace brpf
