#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "brpf/alias_table.hpp"
#include "brpf/coin.hpp"
#include "brpf/random_stream.hpp"
#include "brpf/trial_counter.hpp"

namespace brpf {

/// Per-particle weight split w_i = c_i * b_i into a known constant and a coin
/// with success probability b_i.
struct WeightFactorization {
  std::vector<double> constants;
  std::vector<Coin> coins;

  std::size_t size() const noexcept { return constants.size(); }
  /// Throws Error(invalid_weights) on length mismatch, bad constants or
  /// empty coins.
  void validate() const;
};

struct RaceDraw {
  std::size_t index;
  std::uint64_t trials;
};

struct RaceOutcome {
  std::vector<std::size_t> indices;
  TrialCounter trials;
  std::uint64_t total_flips = 0;
};

struct RaceOptions {
  unsigned workers = 1;
  std::uint64_t flip_budget = 10'000'000;
};

/**
 * One Bernoulli race: propose I with probability c_I / sum c from the alias
 * table, flip coin I, repeat until a flip succeeds. The returned index has
 * law c_i b_i / sum_k c_k b_k and the trial count is geometric with
 * success probability sum c_k b_k / sum c_k.
 *
 * Throws Error(stopping_budget_exceeded) after `flip_budget` failed rounds.
 */
RaceDraw race_once(const WeightFactorization& factorization, const AliasTable& table,
                   RandomStream& stream, std::uint64_t flip_budget = 10'000'000);

/**
 * `draw_count` independent races. Draw j runs on `stream.substream(j)`, so
 * the outcome does not depend on `options.workers`. The alias table over
 * the constants is built once.
 */
RaceOutcome race_resample(const WeightFactorization& factorization, std::size_t draw_count,
                          const RandomStream& stream, const RaceOptions& options = {});

struct RhoEstimate {
  double naive;  // 1 / mean(C)
  double mvue;   // (N - 1) / (sum C - 1)
  std::size_t draw_count;
};

/// Both stopping-probability estimators. Throws Error(insufficient_draws)
/// for fewer than two draws.
RhoEstimate estimate_rho(const TrialCounter& trials);
inline RhoEstimate estimate_rho(const RaceOutcome& outcome) { return estimate_rho(outcome.trials); }

/// 1 / mean(C); defined for a single draw. Throws Error(empty_input).
double naive_rho(const TrialCounter& trials);

struct CltReport {
  double mean_scaled_variance;  // Var of sqrt(N) (mean C - 1/rho)
  double mean_target;           // (1 - rho) / rho^2
  double mvue_scaled_variance;  // Var of sqrt(N) (rho_mvue - rho)
  double mvue_target;           // (1 - rho) rho^2
  std::size_t replicates;
  std::size_t draws;
};

/// Simulates `replicates` batches of N geometric trial counts directly and
/// reports the empirical scaled variances next to their limits.
/// Throws Error(invalid_parameter) unless 0 < rho < 1, N >= 2, replicates >= 2.
CltReport clt_diagnostics(std::size_t replicates, std::size_t draws, double rho,
                          const RandomStream& stream);

}  // namespace brpf
