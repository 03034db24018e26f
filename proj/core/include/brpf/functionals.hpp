#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace brpf {

/**
 * Ancestry of a particle run stored as per-step proposed values plus
 * resampling pointers: after step t, particle i is proposed particle
 * ancestors(t)[i]; proposed particle j at step t was moved from particle j
 * after step t - 1. Memory is O(N T).
 */
class Genealogy {
 public:
  void push_step(std::vector<double> proposed_values, std::vector<std::size_t> ancestors);

  std::size_t steps() const noexcept { return values_.size(); }
  std::size_t particles() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
  const std::vector<double>& proposed_values(std::size_t t) const { return values_.at(t); }
  const std::vector<std::size_t>& ancestors(std::size_t t) const { return ancestors_.at(t); }

  /// Path x_{1:T} of particle i after the final resampling.
  std::vector<double> trajectory(std::size_t i) const;
  /// Resampled particle values at step t (the filtering approximation).
  std::vector<double> filtering_values(std::size_t t) const;
  /// Throws Error(invalid_parameter) if any ancestor index is out of range
  /// or the particle count changes between steps.
  void validate() const;

 private:
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::size_t>> ancestors_;
};

struct EnsembleContext {
  double final_mean;  // mean of x_T over the resampled ensemble
  std::size_t steps;
};

struct TestFunction {
  std::string label;
  std::function<double(std::span<const double> path, const EnsembleContext&)> evaluate;
};

/// h1 = mean_t x_t, h2 = ||x_{1:T}||_2, h3 = x_T, h4 = (x_T - mean x_T)^2.
const std::vector<TestFunction>& standard_test_functions();

/// (1/N) sum_i h(X^i_{1:T}) over the resampled trajectories.
std::map<std::string, double> estimate_functionals(const Genealogy& genealogy,
                                                   std::span<const TestFunction> functions);

}  // namespace brpf
