#include "brpf/experiments/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "brpf/error.hpp"

namespace brpf::experiments {

namespace {

std::string at_line(std::string_view source, const YAML::Mark& mark) {
  if (mark.is_null()) return std::string(source);
  return std::string(source) + ":" + std::to_string(mark.line + 1);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(where, std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
  }
}

std::uint64_t count(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) throw ConfigError(where, "expected a non-negative integer");
  const std::string& text = node.Scalar();
  if (!text.empty() && text.front() != '-') {
    try {
      return node.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
    }
  }
  // Accept integral floating forms such as 1e6.
  double value = 0.0;
  try {
    value = node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where, "expected a non-negative integer, got '" + text + "'");
  }
  if (!(value >= 0.0) || value != std::floor(value) || value > 1.8e19) {
    throw ConfigError(where, "expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(value);
}

double real(const YAML::Node& node, const std::string& where) {
  const double v = scalar<double>(node, where, "a number");
  if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
  return v;
}

template <class F>
void each(const YAML::Node& node, const std::string& where, F&& f) {
  if (node.IsSequence()) {
    if (node.size() == 0) throw ConfigError(where, "list must not be empty");
    for (const auto& item : node) f(item);
  } else {
    f(node);
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const YAML::Node&, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         const std::string m = scalar<std::string>(n, w, "a model name");
         if (m == "gaussian") c.model = ModelKind::gaussian;
         else if (m == "sine") c.model = ModelKind::sine;
         else if (m == "cox") c.model = ModelKind::cox;
         else throw ConfigError(w, "unknown model '" + m + "' (expected gaussian, sine or cox)");
       }},
      {"strategies",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.strategies.clear();
         each(n, w, [&](const YAML::Node& item) {
           // Resolved against rwpf_replicates during validate().
           c.strategies.push_back(parse_strategy_spec(scalar<std::string>(item, w, "a strategy name"), 0));
           if (c.strategies.back().label.empty()) throw ConfigError(w, "empty strategy name");
         });
       }},
      {"particles", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.particles = count(n, w); }},
      {"steps", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.steps = count(n, w); }},
      {"replications",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.replications = count(n, w); }},
      {"seed", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.seed = count(n, w); }},
      {"dataset_seed",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.dataset_seed = count(n, w); }},
      {"workers",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.workers = static_cast<unsigned>(count(n, w));
       }},
      {"output",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.output = scalar<std::string>(n, w, "a directory");
       }},
      {"rwpf_replicates",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.rwpf_replicates = count(n, w); }},
      {"flip_budget",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.flip_budget = count(n, w); }},
      // Gaussian model
      {"a", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.gaussian.a = real(n, w); }},
      {"state_var",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.gaussian.state_var = real(n, w); }},
      {"obs_var",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.gaussian.obs_var = real(n, w); }},
      {"init_var",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.gaussian.init_var = real(n, w); }},
      {"init_mean",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.gaussian.init_mean = real(n, w); }},
      // Sine diffusion
      {"obs_sd", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.sine.obs_sd = real(n, w); }},
      {"horizon",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.sine.horizon = real(n, w);
         c.cox.horizon = c.sine.horizon;
       }},
      {"initial_state",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.sine.initial_state = real(n, w); }},
      {"truth_euler_step",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.sine.truth_euler_step = real(n, w); }},
      {"coin_shift",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.sine.coin_shift = real(n, w); }},
      {"coin_rate",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.sine.coin_rate = real(n, w); }},
      // Cox process
      {"theta", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.cox.ou.theta = real(n, w); }},
      {"sigma", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.cox.ou.sigma = real(n, w); }},
      {"lambda_max",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.cox.lambda_max = real(n, w); }},
      {"x1_init_var",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.cox.x1_init_var = real(n, w); }},
      // series
      {"density_step",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.density_step = count(n, w); }},
      {"quantiles",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         if (!n.IsSequence() || n.size() != 2) throw ConfigError(w, "expected [low, high]");
         c.quantile_low = real(n[0], w);
         c.quantile_high = real(n[1], w);
       }},
      // bench
      {"bench_mode",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         const std::string m = scalar<std::string>(n, w, "synthetic or filter");
         if (m == "synthetic") c.bench_mode = BenchMode::synthetic;
         else if (m == "filter") c.bench_mode = BenchMode::filter;
         else throw ConfigError(w, "unknown bench_mode '" + m + "' (expected synthetic or filter)");
       }},
      {"particle_grid",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.particle_grid.clear();
         each(n, w, [&](const YAML::Node& item) { c.particle_grid.push_back(count(item, w)); });
       }},
      {"worker_grid",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) {
         c.worker_grid.clear();
         each(n, w, [&](const YAML::Node& item) { c.worker_grid.push_back(static_cast<unsigned>(count(item, w))); });
       }},
      {"coin_cost_us",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.coin_cost_us = real(n, w); }},
      {"bench_rho", [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.bench_rho = real(n, w); }},
      {"bench_repetitions",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.bench_repetitions = count(n, w); }},
      {"bench_warmup",
       [](ExperimentConfig& c, const YAML::Node& n, const std::string& w) { c.bench_warmup = count(n, w); }},
  };
  return table;
}

void apply(ExperimentConfig& config, const std::string& key, const YAML::Node& value, const std::string& where) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(where, "unknown key '" + key + "'");
  if (value.IsNull()) throw ConfigError(where, "key '" + key + "' has no value");
  try {
    it->second(config, value, where);
  } catch (const ConfigError& e) {
    if (!e.where().empty()) throw;
    throw ConfigError(where, e.what());
  }
}

void apply_override(ExperimentConfig& config, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--override " + text, "expected key=value");
  }
  std::string key = text.substr(0, eq);
  key.erase(key.find_last_not_of(" \t") + 1);
  const std::string where = "--override " + key;
  YAML::Node value;
  try {
    value = YAML::Load(text.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError(where, "cannot parse value: " + e.msg);
  }
  apply(config, key, value, where);
}

}  // namespace

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view to_string(ModelKind m) noexcept {
  switch (m) {
    case ModelKind::gaussian: return "gaussian";
    case ModelKind::sine: return "sine";
    case ModelKind::cox: return "cox";
  }
  return "?";
}

std::string_view to_string(BenchMode m) noexcept {
  return m == BenchMode::synthetic ? "synthetic" : "filter";
}

StrategySpec parse_strategy_spec(std::string_view text, std::size_t default_rwpf_replicates) {
  StrategySpec spec;
  const auto at = text.find('@');
  const std::string name = upper(text.substr(0, at));
  try {
    spec.kind = parse_strategy(name);
  } catch (const Error&) {
    throw ConfigError("", "unknown strategy '" + std::string(text) + "' (expected EWPF, RWPF, BRPF or RWPF@<draws>)");
  }
  spec.rwpf_replicates = default_rwpf_replicates;
  spec.label = name;
  if (at != std::string_view::npos) {
    if (spec.kind != Strategy::rwpf) throw ConfigError("", "only RWPF takes an @<draws> suffix");
    const std::string digits(text.substr(at + 1));
    std::size_t used = 0;
    unsigned long long draws = 0;
    try {
      draws = std::stoull(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != digits.size() || draws == 0) throw ConfigError("", "bad RWPF draw count in '" + std::string(text) + "'");
    spec.rwpf_replicates = draws;
    spec.label = name + "@" + digits;
  }
  return spec;
}

ExperimentConfig parse_config(std::string_view text, std::string_view source_name,
                              const std::vector<std::string>& overrides) {
  ExperimentConfig config;
  config.source = std::string(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(at_line(source_name, e.mark), e.msg);
  }
  if (root.IsDefined() && !root.IsNull()) {
    if (!root.IsMap()) throw ConfigError(at_line(source_name, root.Mark()), "expected a key: value document");
    for (const auto& entry : root) {
      const std::string where = at_line(source_name, entry.first.Mark());
      const std::string key = scalar<std::string>(entry.first, where, "a key");
      try {
        apply(config, key, entry.second, where);
      } catch (const ConfigError& e) {
        if (!e.where().empty()) throw;
        throw ConfigError(where, e.what());
      }
    }
  }
  for (const auto& o : overrides) {
    try {
      apply_override(config, o);
    } catch (const ConfigError& e) {
      if (!e.where().empty()) throw;
      throw ConfigError("--override " + o, e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw ConfigError(path, "cannot open config file");
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
  std::fclose(f);
  return parse_config(text, path, overrides);
}

void validate(ExperimentConfig& c) {
  const std::string& where = c.source;
  if (!c.seed) throw ConfigError(where, "seed is required (set 'seed' or pass --seed)");
  if (c.strategies.empty()) throw ConfigError(where, "strategies must not be empty");
  for (auto& s : c.strategies) {
    if (s.rwpf_replicates == 0) s.rwpf_replicates = std::max<std::size_t>(c.rwpf_replicates, 1);
  }
  if (c.rwpf_replicates == 0) throw ConfigError(where, "rwpf_replicates must be at least 1");
  if (c.replications == 0) throw ConfigError(where, "replications must be at least 1");
  if (c.particles < 2) throw ConfigError(where, "particles must be at least 2");
  if (c.steps == 0) throw ConfigError(where, "steps must be at least 1");
  if (c.flip_budget == 0) throw ConfigError(where, "flip_budget must be positive");
  if (!(0.0 <= c.quantile_low && c.quantile_low <= c.quantile_high && c.quantile_high <= 1.0)) {
    throw ConfigError(where, "quantiles must satisfy 0 <= low <= high <= 1");
  }
  if (c.density_step && *c.density_step >= c.steps) {
    throw ConfigError(where, "density_step " + std::to_string(*c.density_step) + " is beyond the last step " +
                                 std::to_string(c.steps - 1));
  }
  if (c.particle_grid.empty() || std::find(c.particle_grid.begin(), c.particle_grid.end(), 0u) != c.particle_grid.end()) {
    throw ConfigError(where, "particle_grid entries must be positive");
  }
  if (c.worker_grid.empty()) throw ConfigError(where, "worker_grid must not be empty");
  if (!(c.bench_rho > 0.0 && c.bench_rho <= 1.0)) throw ConfigError(where, "bench_rho must lie in (0, 1]");
  if (!(c.coin_cost_us >= 0.0)) throw ConfigError(where, "coin_cost_us must be non-negative");
  if (c.bench_repetitions == 0) throw ConfigError(where, "bench_repetitions must be at least 1");

  try {
    switch (c.model) {
      case ModelKind::gaussian:
        c.gaussian.validate();
        break;
      case ModelKind::sine:
        c.sine.observation_times = SineDiffusionParams::unit_grid(c.sine.horizon, c.steps);
        c.sine.validate();
        break;
      case ModelKind::cox:
        c.cox.intervals = c.steps;
        c.cox.particles = c.particles;
        c.cox.validate();
        break;
    }
  } catch (const Error& e) {
    throw ConfigError(where, e.what());
  }
  for (const auto& s : c.strategies) {
    const bool supported = c.model == ModelKind::gaussian || s.kind != Strategy::ewpf;
    if (!supported) {
      throw ConfigError(where, "model " + std::string(to_string(c.model)) + " has no exact weights for EWPF");
    }
  }
}

std::string canonical_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["model"] = to_string(c.model);
  auto& strategies = j["strategies"] = nlohmann::json::array();
  for (const auto& s : c.strategies) {
    strategies.push_back({{"label", s.label}, {"rwpf_replicates", s.rwpf_replicates}});
  }
  j["particles"] = c.particles;
  j["steps"] = c.steps;
  j["replications"] = c.replications;
  j["seed"] = c.seed.value_or(0);
  j["dataset_seed"] = c.data_seed();
  j["flip_budget"] = c.flip_budget;
  switch (c.model) {
    case ModelKind::gaussian:
      j["params"] = {{"a", c.gaussian.a},
                     {"state_var", c.gaussian.state_var},
                     {"obs_var", c.gaussian.obs_var},
                     {"init_var", c.gaussian.init_var},
                     {"init_mean", c.gaussian.init_mean}};
      break;
    case ModelKind::sine:
      j["params"] = {{"obs_sd", c.sine.obs_sd},
                     {"horizon", c.sine.horizon},
                     {"initial_state", c.sine.initial_state},
                     {"truth_euler_step", c.sine.truth_euler_step},
                     {"coin_shift", c.sine.coin_shift},
                     {"coin_rate", c.sine.coin_rate}};
      break;
    case ModelKind::cox:
      j["params"] = {{"theta", c.cox.ou.theta},       {"sigma", c.cox.ou.sigma},
                     {"lambda_max", c.cox.lambda_max}, {"horizon", c.cox.horizon},
                     {"x1_init_var", c.cox.x1_init_var}};
      break;
  }
  if (c.density_step) j["density_step"] = *c.density_step;
  j["quantiles"] = {c.quantile_low, c.quantile_high};
  j["bench"] = {{"mode", to_string(c.bench_mode)},
                {"particle_grid", c.particle_grid},
                {"worker_grid", c.worker_grid},
                {"coin_cost_us", c.coin_cost_us},
                {"rho", c.bench_rho},
                {"repetitions", c.bench_repetitions},
                {"warmup", c.bench_warmup}};
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stable_hash(canonical_json(config))));
  return buf;
}

}  // namespace brpf::experiments
