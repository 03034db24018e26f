#include "brpf/trial_counter.hpp"

#include <limits>
#include <numeric>

#include "brpf/error.hpp"

namespace brpf {

std::uint64_t TrialCounter::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

SampleMoments geometric_sample_mean_variance(const TrialCounter& counter) {
  const std::size_t n = counter.size();
  if (n == 0) throw Error(Errc::empty_input, "trial counter is empty");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const std::uint64_t c : counter.counts) {
    ++k;
    const double x = static_cast<double>(c);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  const double variance =
      n > 1 ? m2 / static_cast<double>(n - 1) : std::numeric_limits<double>::quiet_NaN();
  return {mean, variance};
}

}  // namespace brpf
