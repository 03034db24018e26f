#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brpf/experiments/config.hpp"
#include "brpf/particle_filter.hpp"

namespace brpf::experiments {

/// Observations and the latent truth the filters are scored against.
/// Gaussian: t = 1..T. Sine: observation times. Cox: interval ends, with
/// `observations` holding arrival counts and `truth` the reference intensity.
struct PreparedData {
  std::vector<double> times;
  std::vector<double> truth;
  std::vector<double> observations;
  std::vector<double> arrivals;  // Cox only
  std::optional<double> exact_log_likelihood;  // Gaussian only
};

PreparedData prepare_data(const ExperimentConfig& config);

/// Runs one filter with the model the config describes.
FilterOutput run_configured_filter(const ExperimentConfig& config, const PreparedData& data,
                                   const StrategySpec& strategy, const FilterOptions& options,
                                   const RandomStream& stream);

struct ReplicateResult {
  std::map<std::string, double> functionals;
  double log_likelihood = 0.0;
  double tracking_error = 0.0;
  std::uint64_t total_flips = 0;
  double rho_mvue = 0.0;  // mean over steps; NaN unless BRPF
};

struct ReplicateFailure {
  std::size_t replicate;
  std::string code;
  std::optional<std::size_t> step;
  std::string message;
};

struct StrategyRun {
  StrategySpec strategy;
  std::vector<ReplicateResult> replicates;  // completed, in replicate order
  std::optional<ReplicateFailure> failure;  // lowest failing replicate
};

struct ExperimentResult {
  PreparedData data;
  std::vector<StrategyRun> runs;
  double wall_clock_seconds = 0.0;
  bool complete() const;
  /// "strategy BRPF replicate 3 step 7: ..." for the first failure.
  std::string failure_message() const;
};

/// Stream of replicate `r` for a strategy; independent across strategies.
RandomStream replicate_stream(const ExperimentConfig& config, const StrategySpec& strategy, std::size_t r);

/// All replications of all strategies, parallel across replicates.
/// Runtime errors are recorded per strategy rather than thrown.
ExperimentResult run_replications(const ExperimentConfig& config);

struct ResultRow {
  std::string strategy;
  std::string metric;
  double estimate;
  double sd;  // NaN when undefined
  std::optional<std::size_t> replications;
  double std_error;
};

/// Summary rows: per strategy h1..h4, log_likelihood, likelihood,
/// tracking_error, total_flips, rho_mvue; exact reference rows for the
/// Gaussian model; and "BRPF/<other>" sd_ratio rows.
std::vector<ResultRow> summarize_results(const ExperimentResult& result);

/// Writes results.csv, replicates.csv, dataset.csv (and arrivals.csv for
/// Cox) plus metadata.json into config.output.
void write_experiment(const ExperimentConfig& config, const ExperimentResult& result);

/// run_replications + write_experiment.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SeriesResult {
  PreparedData data;
  std::vector<std::pair<StrategySpec, FilterOutput>> runs;
};

/// One filter per strategy; writes series.csv, density.csv (when
/// density_step is set), dataset.csv and metadata.json. Errors propagate.
SeriesResult run_series(const ExperimentConfig& config);

/// Writes metadata.json for any subcommand.
void write_metadata(const ExperimentConfig& config, const std::filesystem::path& dir, std::string_view command,
                    bool complete, const std::string& error, double wall_clock_seconds,
                    const std::map<std::string, std::uint64_t>& total_flips,
                    const std::vector<std::string>& files);

/// Version string baked in at configure time (git describe when available).
std::string_view version_string() noexcept;

}  // namespace brpf::experiments
