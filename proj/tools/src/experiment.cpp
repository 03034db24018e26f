#include "brpf/experiments/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "brpf/experiments/csv.hpp"
#include "brpf/experiments/series.hpp"
#include "brpf/kalman.hpp"
#include "brpf/models/cox_process.hpp"
#include "brpf/models/gaussian_ssm.hpp"
#include "brpf/models/sine_diffusion.hpp"
#include "brpf/stats.hpp"

#ifndef BRPF_VERSION_STRING
#define BRPF_VERSION_STRING "unknown"
#endif

namespace brpf::experiments {

namespace {

constexpr std::uint64_t kDatasetKey = 0xda7a;
constexpr std::uint64_t kReplicateKey = 1;
constexpr std::uint64_t kSeriesKey = 2;

const char* const kFunctionals[] = {"h1", "h2", "h3", "h4"};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ReplicateResult summarize_run(const FilterOutput& out, const PreparedData& data) {
  ReplicateResult r;
  r.functionals = out.functionals;
  r.log_likelihood = out.likelihood.log_value;
  r.tracking_error = tracking_error(out.genealogy, data.truth);
  r.total_flips = out.total_flips();
  double rho = 0.0;
  std::size_t steps = 0;
  for (const auto& d : out.diagnostics) {
    if (d.rho) {
      rho += d.rho->mvue;
      ++steps;
    }
  }
  r.rho_mvue = steps ? rho / static_cast<double>(steps) : nan();
  return r;
}

std::string failure_text(const StrategyRun& run) {
  const ReplicateFailure& f = *run.failure;
  std::string s = "strategy " + run.strategy.label + " replicate " + std::to_string(f.replicate);
  if (f.step) s += " step " + std::to_string(*f.step);
  return s + " [" + f.code + "]: " + f.message;
}

void write_dataset(const std::filesystem::path& dir, const PreparedData& data, std::vector<std::string>& files) {
  CsvWriter csv((dir / "dataset.csv").string(), {"step", "time", "truth", "observation"});
  for (std::size_t t = 0; t < data.times.size(); ++t) {
    csv.cell(std::uint64_t{t}).cell(data.times[t]).cell(data.truth[t]).cell(data.observations[t]).end_row();
  }
  files.push_back("dataset.csv");
  if (!data.arrivals.empty()) {
    CsvWriter arrivals((dir / "arrivals.csv").string(), {"index", "time"});
    for (std::size_t i = 0; i < data.arrivals.size(); ++i) {
      arrivals.cell(std::uint64_t{i}).cell(data.arrivals[i]).end_row();
    }
    files.push_back("arrivals.csv");
  }
}

}  // namespace

std::string_view version_string() noexcept { return BRPF_VERSION_STRING; }

PreparedData prepare_data(const ExperimentConfig& config) {
  PreparedData data;
  RandomStream stream(config.data_seed(), kDatasetKey);
  switch (config.model) {
    case ModelKind::gaussian: {
      const Dataset d = simulate_gaussian_dataset(config.gaussian, config.steps, stream);
      for (std::size_t t = 0; t < config.steps; ++t) data.times.push_back(static_cast<double>(t + 1));
      data.truth = d.latent;
      data.observations = d.observations;
      data.exact_log_likelihood = kalman_reference(config.gaussian, data.observations).log_likelihood;
      break;
    }
    case ModelKind::sine: {
      SineDiffusionParams params = config.sine;
      params.observation_times = SineDiffusionParams::unit_grid(params.horizon, config.steps);
      const Dataset d = simulate_sine_dataset(params, stream);
      data.times = params.observation_times;
      data.truth = d.latent;
      data.observations = d.observations;
      break;
    }
    case ModelKind::cox: {
      OUCoxParams params = config.cox;
      params.intervals = config.steps;
      data.arrivals = simulate_poisson_process(reference_intensity, params.lambda_max, 0.0, params.horizon, stream);
      const CoxProcessModel model(params, data.arrivals);
      for (std::size_t t = 0; t < params.intervals; ++t) {
        data.times.push_back(model.interval_end(t));
        data.truth.push_back(reference_intensity(model.interval_end(t)));
        data.observations.push_back(static_cast<double>(model.arrivals(t).size()));
      }
      break;
    }
  }
  return data;
}

FilterOutput run_configured_filter(const ExperimentConfig& config, const PreparedData& data,
                                   const StrategySpec& strategy, const FilterOptions& options,
                                   const RandomStream& stream) {
  switch (config.model) {
    case ModelKind::gaussian: {
      const GaussianSSM model(config.gaussian, data.observations, strategy.rwpf_replicates);
      return run_filter(model, options, stream);
    }
    case ModelKind::sine: {
      SineDiffusionParams params = config.sine;
      params.observation_times = SineDiffusionParams::unit_grid(params.horizon, config.steps);
      params.rwpf_replicates = strategy.rwpf_replicates;
      const SineDiffusionModel model(params, data.observations);
      return run_filter(model, options, stream);
    }
    case ModelKind::cox: {
      OUCoxParams params = config.cox;
      params.intervals = config.steps;
      params.rwpf_replicates = strategy.rwpf_replicates;
      const CoxProcessModel model(params, data.arrivals);
      return run_filter(model, options, stream);
    }
  }
  throw Error(Errc::invalid_parameter, "unknown model");
}

RandomStream replicate_stream(const ExperimentConfig& config, const StrategySpec& strategy, std::size_t r) {
  return RandomStream(config.master_seed()).substream(kReplicateKey, stable_hash(strategy.label), r);
}

bool ExperimentResult::complete() const {
  for (const auto& run : runs) {
    if (run.failure) return false;
  }
  return true;
}

std::string ExperimentResult::failure_message() const {
  for (const auto& run : runs) {
    if (run.failure) return failure_text(run);
  }
  return {};
}

ExperimentResult run_replications(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.data = prepare_data(config);
  const unsigned workers = resolve_workers(config.workers);
  for (const StrategySpec& strategy : config.strategies) {
    FilterOptions options;
    options.particles = config.particles;
    options.strategy = strategy.kind;
    options.workers = 1;
    options.flip_budget = config.flip_budget;

    std::vector<std::optional<ReplicateResult>> slots(config.replications);
    std::vector<std::optional<ReplicateFailure>> failures(config.replications);
    parallel_for(config.replications, workers, [&](std::size_t r) {
      try {
        const FilterOutput out =
            run_configured_filter(config, result.data, strategy, options, replicate_stream(config, strategy, r));
        slots[r] = summarize_run(out, result.data);
      } catch (const Error& e) {
        failures[r] = ReplicateFailure{r, std::string(to_string(e.code())), e.step(), e.what()};
      }
    });
    StrategyRun run{strategy, {}, std::nullopt};
    for (std::size_t r = 0; r < config.replications; ++r) {
      if (failures[r] && !run.failure) run.failure = failures[r];
      if (slots[r]) run.replicates.push_back(std::move(*slots[r]));
    }
    result.runs.push_back(std::move(run));
  }
  result.wall_clock_seconds = elapsed(start);
  return result;
}

std::vector<ResultRow> summarize_results(const ExperimentResult& result) {
  std::vector<ResultRow> rows;
  std::map<std::string, std::map<std::string, double>> sds;
  for (const StrategyRun& run : result.runs) {
    const std::size_t n = run.replicates.size();
    if (n == 0) continue;
    auto add = [&](const std::string& metric, const std::vector<double>& values) {
      const stats::Summary s = stats::summarize(values);
      rows.push_back({run.strategy.label, metric, s.mean, s.sd, n, s.std_error});
      sds[run.strategy.label][metric] = s.sd;
    };
    std::vector<double> values(n);
    for (const char* h : kFunctionals) {
      for (std::size_t i = 0; i < n; ++i) values[i] = run.replicates[i].functionals.at(h);
      add(h, values);
    }
    for (std::size_t i = 0; i < n; ++i) values[i] = run.replicates[i].log_likelihood;
    add("log_likelihood", values);
    for (std::size_t i = 0; i < n; ++i) values[i] = std::exp(run.replicates[i].log_likelihood);
    add("likelihood", values);
    for (std::size_t i = 0; i < n; ++i) values[i] = run.replicates[i].tracking_error;
    add("tracking_error", values);
    if (run.strategy.kind == Strategy::brpf) {
      for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(run.replicates[i].total_flips);
      add("total_flips", values);
      for (std::size_t i = 0; i < n; ++i) values[i] = run.replicates[i].rho_mvue;
      add("rho_mvue", values);
    }
  }
  if (result.data.exact_log_likelihood) {
    const double ll = *result.data.exact_log_likelihood;
    rows.push_back({"KALMAN", "log_likelihood", ll, nan(), std::nullopt, nan()});
    rows.push_back({"KALMAN", "likelihood", std::exp(ll), nan(), std::nullopt, nan()});
  }
  if (const auto brpf = sds.find("BRPF"); brpf != sds.end()) {
    for (const auto& [label, metrics] : sds) {
      if (label == "BRPF") continue;
      for (const char* h : kFunctionals) {
        const double ratio = brpf->second.at(h) / metrics.at(h);
        rows.push_back({"BRPF/" + label, std::string("sd_ratio_") + h, ratio, nan(), std::nullopt, nan()});
      }
    }
  }
  return rows;
}

void write_metadata(const ExperimentConfig& config, const std::filesystem::path& dir, std::string_view command,
                    bool complete, const std::string& error, double wall_clock_seconds,
                    const std::map<std::string, std::uint64_t>& total_flips,
                    const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["status"] = complete ? "complete" : "incomplete";
  j["error"] = error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(error);
  j["version"] = version_string();
  j["config_hash"] = config_hash(config);
  j["config_source"] = config.source;
  j["config"] = nlohmann::ordered_json::parse(canonical_json(config));
  j["seed"] = config.master_seed();
  j["workers"] = resolve_workers(config.workers);
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["total_flips"] = total_flips;
  j["files"] = files;
  std::ofstream out(dir / "metadata.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + (dir / "metadata.json").string());
}

void write_experiment(const ExperimentConfig& config, const ExperimentResult& result) {
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;

  {
    CsvWriter csv((dir / "results.csv").string(),
                  {"strategy", "metric", "estimate", "sd", "replications", "std_error"});
    for (const ResultRow& row : summarize_results(result)) {
      csv.cell(row.strategy).cell(row.metric).cell(row.estimate).cell(row.sd);
      if (row.replications) csv.cell(std::uint64_t{*row.replications});
      else csv.cell(std::string_view{});
      csv.cell(row.std_error).end_row();
    }
    files.push_back("results.csv");
  }
  {
    CsvWriter csv((dir / "replicates.csv").string(),
                  {"strategy", "replicate", "h1", "h2", "h3", "h4", "log_likelihood", "tracking_error",
                   "total_flips", "rho_mvue"});
    for (const StrategyRun& run : result.runs) {
      for (std::size_t i = 0; i < run.replicates.size(); ++i) {
        const ReplicateResult& r = run.replicates[i];
        csv.cell(run.strategy.label).cell(std::uint64_t{i});
        for (const char* h : kFunctionals) csv.cell(r.functionals.at(h));
        csv.cell(r.log_likelihood).cell(r.tracking_error).cell(r.total_flips).cell(r.rho_mvue).end_row();
      }
    }
    files.push_back("replicates.csv");
  }
  write_dataset(dir, result.data, files);

  std::map<std::string, std::uint64_t> flips;
  for (const StrategyRun& run : result.runs) {
    std::uint64_t total = 0;
    for (const auto& r : run.replicates) total += r.total_flips;
    flips[run.strategy.label] = total;
  }
  write_metadata(config, dir, "run", result.complete(), result.failure_message(), result.wall_clock_seconds, flips,
                 files);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = run_replications(config);
  write_experiment(config, result);
  return result;
}

SeriesResult run_series(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SeriesResult result;
  result.data = prepare_data(config);
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);

  for (const StrategySpec& strategy : config.strategies) {
    FilterOptions options;
    options.particles = config.particles;
    options.strategy = strategy.kind;
    options.workers = resolve_workers(config.workers);
    options.flip_budget = config.flip_budget;
    const RandomStream stream = RandomStream(config.master_seed()).substream(kSeriesKey, stable_hash(strategy.label));
    result.runs.emplace_back(strategy, run_configured_filter(config, result.data, strategy, options, stream));
  }

  std::vector<std::string> files;
  {
    CsvWriter csv((dir / "series.csv").string(),
                  {"strategy", "step", "time", "mean", "quantile_low", "quantile_high", "truth", "observation"});
    for (const auto& [strategy, out] : result.runs) {
      for (const SeriesRow& row : filtering_series(out.genealogy, config.quantile_low, config.quantile_high)) {
        csv.cell(strategy.label)
            .cell(std::uint64_t{row.step})
            .cell(result.data.times[row.step])
            .cell(row.mean)
            .cell(row.lower)
            .cell(row.upper)
            .cell(result.data.truth[row.step])
            .cell(result.data.observations[row.step])
            .end_row();
      }
    }
    files.push_back("series.csv");
  }
  if (config.density_step) {
    CsvWriter csv((dir / "density.csv").string(), {"strategy", "step", "particle", "value"});
    for (const auto& [strategy, out] : result.runs) {
      const auto values = particles_at(out.genealogy, *config.density_step);
      for (std::size_t i = 0; i < values.size(); ++i) {
        csv.cell(strategy.label).cell(std::uint64_t{*config.density_step}).cell(std::uint64_t{i}).cell(values[i]).end_row();
      }
    }
    files.push_back("density.csv");
  }
  write_dataset(dir, result.data, files);
  std::map<std::string, std::uint64_t> flips;
  for (const auto& [strategy, out] : result.runs) flips[strategy.label] = out.total_flips();
  write_metadata(config, dir, "series", true, {}, elapsed(start), flips, files);
  return result;
}

}  // namespace brpf::experiments
