#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "brpf/models/cox_process.hpp"
#include "brpf/models/gaussian_ssm.hpp"
#include "brpf/models/sine_diffusion.hpp"
#include "brpf/state_space_model.hpp"

namespace brpf::experiments {

/// Invalid configuration; `where()` is "file:line" or "--override key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class ModelKind { gaussian, sine, cox };
enum class BenchMode { synthetic, filter };

std::string_view to_string(ModelKind m) noexcept;
std::string_view to_string(BenchMode m) noexcept;

/// A strategy entry such as "BRPF" or "RWPF@1000" (RWPF averaging 1000
/// weight draws per particle).
struct StrategySpec {
  Strategy kind = Strategy::brpf;
  std::size_t rwpf_replicates = 1;
  std::string label;
};

/// Throws ConfigError for an unknown name or a bad replicate count.
StrategySpec parse_strategy_spec(std::string_view text, std::size_t default_rwpf_replicates = 1);

struct ExperimentConfig {
  ModelKind model = ModelKind::gaussian;
  std::vector<StrategySpec> strategies;
  std::size_t particles = 100;
  std::size_t steps = 50;  // Gaussian T, sine observation count, Cox interval count
  std::size_t replications = 100;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> dataset_seed;  // defaults to seed
  unsigned workers = 0;                       // 0 = all hardware threads
  std::string output = "out";
  std::size_t rwpf_replicates = 1;
  std::uint64_t flip_budget = 10'000'000;

  GaussianSSMParams gaussian;
  SineDiffusionParams sine;
  OUCoxParams cox;

  // series
  std::optional<std::size_t> density_step;  // 0-based
  double quantile_low = 0.1;
  double quantile_high = 0.9;

  // bench
  BenchMode bench_mode = BenchMode::synthetic;
  std::vector<std::size_t> particle_grid{1000, 10000, 100000};
  std::vector<unsigned> worker_grid{1, 0};
  double coin_cost_us = 0.0;
  double bench_rho = 0.5;
  std::size_t bench_repetitions = 5;
  std::size_t bench_warmup = 1;

  std::string source;  // file the config was read from

  std::uint64_t master_seed() const { return *seed; }
  std::uint64_t data_seed() const { return dataset_seed.value_or(*seed); }
};

/// Reads a flat YAML document and applies `key=value` overrides in order.
/// Throws ConfigError with a line-anchored message.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(std::string_view text, std::string_view source_name,
                              const std::vector<std::string>& overrides = {});

/// Cross-field checks (seed present, counts >= 1, model parameters).
/// Throws ConfigError.
void validate(ExperimentConfig& config);

/// Canonical JSON text of everything that affects results (excludes
/// output directory and worker count).
std::string canonical_json(const ExperimentConfig& config);
/// 64-bit FNV-1a; stable across platforms, used for stream keys and hashes.
std::uint64_t stable_hash(std::string_view text) noexcept;
/// 16 hex digits of stable_hash(canonical_json(config)).
std::string config_hash(const ExperimentConfig& config);

}  // namespace brpf::experiments
