#include "brpf/experiments/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "brpf/error.hpp"
#include "brpf/stats.hpp"

namespace brpf::experiments {

std::vector<SeriesRow> filtering_series(const Genealogy& genealogy, double p_low, double p_high) {
  std::vector<SeriesRow> rows;
  rows.reserve(genealogy.steps());
  for (std::size_t t = 0; t < genealogy.steps(); ++t) {
    std::vector<double> values = genealogy.filtering_values(t);
    std::sort(values.begin(), values.end());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    rows.push_back({t, mean, stats::quantile_sorted(values, p_low), stats::quantile_sorted(values, p_high)});
  }
  return rows;
}

std::vector<double> particles_at(const Genealogy& genealogy, std::size_t step) {
  if (step >= genealogy.steps()) {
    throw Error(Errc::invalid_step, "step " + std::to_string(step) + " not in a run of " +
                                        std::to_string(genealogy.steps()) + " steps");
  }
  return genealogy.filtering_values(step);
}

double tracking_error(const Genealogy& genealogy, const std::vector<double>& truth) {
  const std::size_t steps = std::min(genealogy.steps(), truth.size());
  if (steps == 0) return std::nan("");
  double total = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto values = genealogy.filtering_values(t);
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    total += std::abs(mean - truth[t]);
  }
  return total / static_cast<double>(steps);
}

}  // namespace brpf::experiments
