#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "brpf/bernoulli_race.hpp"
#include "brpf/experiments/config.hpp"
#include "brpf/particle_filter.hpp"

namespace brpf::experiments {

/// Busy-waits on the monotonic clock; models a coin whose flip costs time.
void spin_for(double seconds) noexcept;

/// Coin with success probability b that burns `cost_seconds` per flip.
Coin costly_coin(double b, double cost_seconds);

/// N constants drawn from U(0.5, 1.5) and coins all with probability rho,
/// so the race stopping probability is exactly rho.
WeightFactorization synthetic_factorization(std::size_t n, double rho, double coin_cost_seconds,
                                            RandomStream& stream);

struct BenchmarkRecord {
  std::string mode;
  std::string strategy;
  std::size_t particles = 0;
  unsigned workers = 1;
  std::size_t repetitions = 0;
  PhaseSeconds seconds;  // median repetition by total time
  std::uint64_t total_flips = 0;
  double rho_mvue = 0.0;  // mean over steps; NaN when undefined
  std::vector<double> rho_per_step;
  std::vector<std::uint64_t> flips_per_step;

  double total_seconds() const noexcept { return seconds.propose + seconds.weight + seconds.resample; }
};

/// log-log fit of weight + resample time against N.
struct ScalingFit {
  std::string strategy;
  unsigned workers = 1;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRecord> records;
  std::vector<ScalingFit> fits;
};

/// One synthetic resampling step: BRPF races on synthetic_factorization;
/// RWPF evaluates N weights at the same per-weight cost then resamples
/// multinomially; EWPF resamples on exact weights. `warmup` untimed runs,
/// then the median of `repetitions` timed runs.
BenchmarkRecord time_synthetic_step(Strategy strategy, std::size_t n, unsigned workers, double rho,
                                    double coin_cost_seconds, std::size_t repetitions, std::size_t warmup,
                                    const RandomStream& stream, std::uint64_t flip_budget = 10'000'000);

/// Fits per (strategy, workers) over distinct N; groups with fewer than two
/// distinct N get no fit.
std::vector<ScalingFit> fit_scaling(const std::vector<BenchmarkRecord>& records);

/// Runs the grid the config describes and writes bench.csv, bench_steps.csv,
/// fit.csv and metadata.json into config.output.
BenchmarkReport run_benchmark(const ExperimentConfig& config);

}  // namespace brpf::experiments
