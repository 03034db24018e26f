#include "brpf/experiments/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "brpf/experiments/csv.hpp"
#include "brpf/experiments/experiment.hpp"
#include "brpf/stats.hpp"

namespace brpf::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

template <class Run>
BenchmarkRecord median_of(std::size_t repetitions, std::size_t warmup, Run&& run) {
  for (std::size_t w = 0; w < warmup; ++w) run(w);
  std::vector<BenchmarkRecord> timed;
  timed.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) timed.push_back(run(warmup + r));
  std::sort(timed.begin(), timed.end(),
            [](const BenchmarkRecord& a, const BenchmarkRecord& b) { return a.total_seconds() < b.total_seconds(); });
  BenchmarkRecord out = timed[timed.size() / 2];
  out.repetitions = repetitions;
  return out;
}

double mean_or_nan(const std::vector<double>& v) {
  std::vector<double> finite;
  for (const double x : v) {
    if (std::isfinite(x)) finite.push_back(x);
  }
  if (finite.empty()) return nan();
  double s = 0.0;
  for (const double x : finite) s += x;
  return s / static_cast<double>(finite.size());
}

}  // namespace

void spin_for(double seconds) noexcept {
  if (seconds <= 0.0) return;
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  while (Clock::now() < deadline) {
  }
}

Coin costly_coin(double b, double cost_seconds) {
  if (cost_seconds <= 0.0) return Coin::with_probability(b);
  return Coin(
      [b, cost_seconds](RandomStream& s) {
        spin_for(cost_seconds);
        return s.uniform() < b;
      },
      "costly");
}

WeightFactorization synthetic_factorization(std::size_t n, double rho, double coin_cost_seconds,
                                            RandomStream& stream) {
  WeightFactorization f;
  f.constants.resize(n);
  f.coins.resize(n);
  const Coin coin = costly_coin(rho, coin_cost_seconds);
  for (std::size_t i = 0; i < n; ++i) {
    f.constants[i] = 0.5 + stream.uniform();
    f.coins[i] = coin;
  }
  return f;
}

BenchmarkRecord time_synthetic_step(Strategy strategy, std::size_t n, unsigned workers, double rho,
                                    double coin_cost_seconds, std::size_t repetitions, std::size_t warmup,
                                    const RandomStream& stream, std::uint64_t flip_budget) {
  RandomStream setup = stream.substream(0);
  const WeightFactorization f = synthetic_factorization(n, rho, coin_cost_seconds, setup);
  std::vector<double> exact(n);
  for (std::size_t i = 0; i < n; ++i) exact[i] = f.constants[i] * rho;
  std::vector<double> weights(n);

  BenchmarkRecord rec = median_of(repetitions, warmup, [&](std::size_t rep) {
    BenchmarkRecord r;
    const RandomStream rep_stream = stream.substream(1, rep);
    switch (strategy) {
      case Strategy::brpf: {
        const auto start = Clock::now();
        const RaceOutcome race = race_resample(f, n, rep_stream, {workers, flip_budget});
        r.seconds.resample = since(start);
        r.total_flips = race.total_flips;
        r.flips_per_step = {race.total_flips};
        r.rho_per_step = {n >= 2 ? estimate_rho(race).mvue : nan()};
        break;
      }
      case Strategy::rwpf: {
        auto start = Clock::now();
        parallel_for(n, workers, [&](std::size_t i) {
          spin_for(coin_cost_seconds);
          weights[i] = exact[i];
        });
        r.seconds.weight = since(start);
        start = Clock::now();
        RandomStream s = rep_stream;
        multinomial_resample(weights, n, s);
        r.seconds.resample = since(start);
        break;
      }
      case Strategy::ewpf: {
        const auto start = Clock::now();
        RandomStream s = rep_stream;
        multinomial_resample(exact, n, s);
        r.seconds.resample = since(start);
        break;
      }
    }
    return r;
  });
  rec.mode = "synthetic";
  rec.strategy = std::string(to_string(strategy));
  rec.particles = n;
  rec.workers = workers;
  rec.rho_mvue = mean_or_nan(rec.rho_per_step);
  return rec;
}

std::vector<ScalingFit> fit_scaling(const std::vector<BenchmarkRecord>& records) {
  std::map<std::pair<std::string, unsigned>, std::map<std::size_t, double>> groups;
  for (const auto& r : records) {
    const double t = r.seconds.weight + r.seconds.resample;
    if (t > 0.0) groups[{r.strategy, r.workers}][r.particles] = t;
  }
  std::vector<ScalingFit> fits;
  for (const auto& [key, points] : groups) {
    if (points.size() < 2) continue;
    std::vector<double> x, y;
    for (const auto& [n, t] : points) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(t));
    }
    const stats::LinearFit fit = stats::least_squares(x, y);
    fits.push_back({key.first, key.second, fit.slope, fit.intercept, points.size()});
  }
  return fits;
}

BenchmarkReport run_benchmark(const ExperimentConfig& config) {
  const auto start = Clock::now();
  BenchmarkReport report;
  const RandomStream root(config.master_seed());
  PreparedData data;
  if (config.bench_mode == BenchMode::filter) data = prepare_data(config);

  // 0 and the core count name the same setting; time it once.
  std::vector<unsigned> worker_counts;
  for (const unsigned w : config.worker_grid) {
    const unsigned resolved = resolve_workers(w);
    if (std::find(worker_counts.begin(), worker_counts.end(), resolved) == worker_counts.end()) {
      worker_counts.push_back(resolved);
    }
  }

  for (const StrategySpec& strategy : config.strategies) {
    for (const std::size_t n : config.particle_grid) {
      for (const unsigned workers : worker_counts) {
        const RandomStream stream = root.substream(stable_hash(strategy.label), n);
        if (config.bench_mode == BenchMode::synthetic) {
          BenchmarkRecord rec = time_synthetic_step(strategy.kind, n, workers, config.bench_rho,
                                                    config.coin_cost_us * 1e-6, config.bench_repetitions,
                                                    config.bench_warmup, stream, config.flip_budget);
          rec.strategy = strategy.label;
          report.records.push_back(std::move(rec));
        } else {
          if (n < 2) throw ConfigError(config.source, "filter benchmarks need particle_grid entries >= 2");
          FilterOptions options;
          options.particles = n;
          options.strategy = strategy.kind;
          options.workers = workers;
          options.flip_budget = config.flip_budget;
          BenchmarkRecord rec = median_of(config.bench_repetitions, config.bench_warmup, [&](std::size_t rep) {
            const FilterOutput out = run_configured_filter(config, data, strategy, options, stream.substream(rep));
            BenchmarkRecord r;
            r.seconds = out.total_seconds();
            r.total_flips = out.total_flips();
            for (const auto& d : out.diagnostics) {
              r.flips_per_step.push_back(d.flips);
              r.rho_per_step.push_back(d.rho ? d.rho->mvue : nan());
            }
            return r;
          });
          rec.mode = "filter";
          rec.strategy = strategy.label;
          rec.particles = n;
          rec.workers = workers;
          rec.rho_mvue = mean_or_nan(rec.rho_per_step);
          report.records.push_back(std::move(rec));
        }
      }
    }
  }
  report.fits = fit_scaling(report.records);

  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  {
    CsvWriter csv((dir / "bench.csv").string(),
                  {"mode", "strategy", "particles", "workers", "repetitions", "propose_seconds", "weight_seconds",
                   "resample_seconds", "total_flips", "rho_mvue"});
    for (const auto& r : report.records) {
      csv.cell(r.mode)
          .cell(r.strategy)
          .cell(std::uint64_t{r.particles})
          .cell(std::uint64_t{r.workers})
          .cell(std::uint64_t{r.repetitions})
          .cell(r.seconds.propose)
          .cell(r.seconds.weight)
          .cell(r.seconds.resample)
          .cell(r.total_flips)
          .cell(r.rho_mvue)
          .end_row();
    }
    files.push_back("bench.csv");
  }
  {
    CsvWriter csv((dir / "bench_steps.csv").string(),
                  {"strategy", "particles", "workers", "step", "flips", "rho_mvue"});
    for (const auto& r : report.records) {
      for (std::size_t t = 0; t < r.rho_per_step.size(); ++t) {
        csv.cell(r.strategy)
            .cell(std::uint64_t{r.particles})
            .cell(std::uint64_t{r.workers})
            .cell(std::uint64_t{t})
            .cell(r.flips_per_step[t])
            .cell(r.rho_per_step[t])
            .end_row();
      }
    }
    files.push_back("bench_steps.csv");
  }
  {
    CsvWriter csv((dir / "fit.csv").string(), {"strategy", "workers", "slope", "intercept", "points"});
    for (const auto& f : report.fits) {
      csv.cell(f.strategy).cell(std::uint64_t{f.workers}).cell(f.slope).cell(f.intercept).cell(std::uint64_t{f.points}).end_row();
    }
    files.push_back("fit.csv");
  }
  std::map<std::string, std::uint64_t> flips;
  for (const auto& r : report.records) flips[r.strategy] += r.total_flips;
  write_metadata(config, dir, "bench", true, {}, since(start), flips, files);
  return report;
}

}  // namespace brpf::experiments
