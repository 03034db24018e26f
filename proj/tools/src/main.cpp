#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brpf/error.hpp"
#include "brpf/experiments/benchmark.hpp"
#include "brpf/experiments/config.hpp"
#include "brpf/experiments/experiment.hpp"
#include "brpf/experiments/selftest.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "experiment config (YAML)")->required();
  cmd->add_option("--seed", flags.seed, "master seed; overrides the config");
  cmd->add_option("--workers", flags.workers, "worker threads, 0 = all cores; overrides the config");
  cmd->add_option("--out", flags.out, "output directory; overrides the config");
  cmd->add_option("--override", flags.overrides, "config override key=value (repeatable)");
}

brpf::experiments::ExperimentConfig resolve(const CommonFlags& flags) {
  auto config = brpf::experiments::load_config(flags.config, flags.overrides);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.out) config.output = *flags.out;
  brpf::experiments::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = brpf::experiments;
  CLI::App app{"Bernoulli race particle filter experiments"};
  app.set_version_flag("--version", std::string(ex::version_string()));
  app.require_subcommand(1);

  CommonFlags run_flags, bench_flags, series_flags;
  auto* run = app.add_subcommand("run", "replicated filter runs; writes results.csv and metadata.json");
  add_common(run, run_flags);
  auto* bench = app.add_subcommand("bench", "resampling and filter timing over a particle-count grid");
  add_common(bench, bench_flags);
  auto* series = app.add_subcommand("series", "per-step filtering summaries and particle snapshots");
  add_common(series, series_flags);
  std::uint64_t selftest_seed = 20240601;
  auto* selftest = app.add_subcommand("selftest", "fast invariant checks");
  selftest->add_option("--seed", selftest_seed, "seed for the randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*selftest) {
      return ex::run_selftest(std::cout, selftest_seed) == 0 ? 0 : kExitRuntime;
    }
    if (*run) {
      const auto config = resolve(run_flags);
      const auto result = ex::run_experiment(config);
      if (!result.complete()) {
        std::cerr << "brpf: runtime error: " << result.failure_message() << " (partial results in " << config.output
                  << ", marked incomplete)\n";
        return kExitRuntime;
      }
      std::cerr << "brpf: wrote " << config.output << "/results.csv\n";
      return 0;
    }
    if (*bench) {
      const auto config = resolve(bench_flags);
      const auto report = ex::run_benchmark(config);
      for (const auto& f : report.fits) {
        std::cerr << "brpf: " << f.strategy << " workers=" << f.workers << " log-log slope " << f.slope << '\n';
      }
      std::cerr << "brpf: wrote " << config.output << "/bench.csv\n";
      return 0;
    }
    if (*series) {
      const auto config = resolve(series_flags);
      ex::run_series(config);
      std::cerr << "brpf: wrote " << config.output << "/series.csv\n";
      return 0;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "brpf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const brpf::Error& e) {
    std::cerr << "brpf: runtime error [" << brpf::to_string(e.code()) << "]";
    if (e.step()) std::cerr << " at step " << *e.step();
    std::cerr << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "brpf: runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
