#include <gtest/gtest.h>

#include <string>

#include "brpf/experiments/config.hpp"

namespace brpf::experiments {
namespace {

const char* const kMinimal =
    "model: gaussian\n"
    "strategies: [RWPF, BRPF]\n"
    "particles: 20\n"
    "steps: 5\n"
    "replications: 3\n"
    "seed: 7\n";

ExperimentConfig parsed(const std::string& text, const std::vector<std::string>& overrides = {}) {
  return parse_config(text, "test.yaml", overrides);
}

std::string where_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    ExperimentConfig c = parsed(text, overrides);
    validate(c);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<no error>";
}

TEST(Config, ParsesFlatDocument) {
  ExperimentConfig c = parsed(kMinimal);
  validate(c);
  EXPECT_EQ(c.model, ModelKind::gaussian);
  ASSERT_EQ(c.strategies.size(), 2u);
  EXPECT_EQ(c.strategies[0].kind, Strategy::rwpf);
  EXPECT_EQ(c.strategies[1].label, "BRPF");
  EXPECT_EQ(c.particles, 20u);
  EXPECT_EQ(c.steps, 5u);
  EXPECT_EQ(c.replications, 3u);
  EXPECT_EQ(c.master_seed(), 7u);
  EXPECT_EQ(c.data_seed(), 7u);
  EXPECT_EQ(c.source, "test.yaml");
}

TEST(Config, OverridesApplyInOrder) {
  ExperimentConfig c = parsed(kMinimal, {"particles=40", "particles=50", "dataset_seed=9", "a=0.5"});
  validate(c);
  EXPECT_EQ(c.particles, 50u);
  EXPECT_EQ(c.data_seed(), 9u);
  EXPECT_EQ(c.master_seed(), 7u);
  EXPECT_DOUBLE_EQ(c.gaussian.a, 0.5);
}

TEST(Config, OverrideListValue) {
  ExperimentConfig c = parsed(kMinimal, {"strategies=[EWPF, RWPF@25]", "particle_grid=[1, 10]"});
  validate(c);
  ASSERT_EQ(c.strategies.size(), 2u);
  EXPECT_EQ(c.strategies[1].label, "RWPF@25");
  EXPECT_EQ(c.strategies[1].rwpf_replicates, 25u);
  EXPECT_EQ(c.particle_grid, (std::vector<std::size_t>{1, 10}));
}

TEST(Config, IntegralFloatCounts) {
  ExperimentConfig c = parsed(kMinimal, {"flip_budget=1e6"});
  EXPECT_EQ(c.flip_budget, 1000000u);
  EXPECT_EQ(where_of(kMinimal, {"particles=2.5"}), "--override particles");
  EXPECT_EQ(where_of(kMinimal, {"particles=-3"}), "--override particles");
}

TEST(Config, ErrorsAreLineAnchored) {
  EXPECT_EQ(where_of(std::string(kMinimal) + "no_such_key: 1\n"), "test.yaml:7");
  EXPECT_EQ(where_of("model: gaussian\nparticles: many\nseed: 1\n"), "test.yaml:2");
  EXPECT_EQ(where_of("model: plane\n"), "test.yaml:1");
  EXPECT_EQ(where_of("model: gaussian\nseed:\n"), "test.yaml:2");
  EXPECT_NE(where_of("model: [unclosed\n").find("test.yaml"), std::string::npos);
  try {
    parsed(std::string(kMinimal) + "no_such_key: 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown key 'no_such_key'"), std::string::npos);
  }
}

TEST(Config, OverrideErrorsNameTheKey) {
  EXPECT_EQ(where_of(kMinimal, {"no_such_key=1"}), "--override no_such_key");
  EXPECT_EQ(where_of(kMinimal, {"particles=many"}), "--override particles");
  EXPECT_EQ(where_of(kMinimal, {"novalue"}), "--override novalue");
  EXPECT_EQ(where_of(kMinimal, {"strategies=[XPF]"}), "--override strategies");
}

TEST(Config, SeedIsRequired) {
  const std::string text = "model: gaussian\nstrategies: [BRPF]\n";
  EXPECT_EQ(where_of(text), "test.yaml");
  ExperimentConfig c = parsed(text);
  c.seed = 3;
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ValidateRejectsBadCounts) {
  EXPECT_EQ(where_of(kMinimal, {"replications=0"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"particles=1"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"steps=0"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"flip_budget=0"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"density_step=5"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"density_step=4"}), "<no error>");
  EXPECT_EQ(where_of(kMinimal, {"quantiles=[0.9, 0.1]"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"obs_var=-1"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"bench_rho=0"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"particle_grid=[10, 0]"}), "test.yaml");
}

TEST(Config, EwpfNeedsExactWeights) {
  EXPECT_EQ(where_of(kMinimal, {"model=sine", "strategies=[EWPF]"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"model=cox", "strategies=[EWPF]"}), "test.yaml");
  EXPECT_EQ(where_of(kMinimal, {"model=sine", "strategies=[BRPF, RWPF]"}), "<no error>");
}

TEST(Config, StepsDriveModelGrids) {
  ExperimentConfig c = parsed(kMinimal, {"model=sine", "horizon=10", "steps=4"});
  validate(c);
  EXPECT_EQ(c.sine.observation_times, (std::vector<double>{2.5, 5.0, 7.5, 10.0}));
  ExperimentConfig cox = parsed(kMinimal, {"model=cox", "steps=10", "strategies=[BRPF]"});
  validate(cox);
  EXPECT_EQ(cox.cox.intervals, 10u);
  EXPECT_EQ(cox.cox.particles, 20u);
}

TEST(Config, RwpfReplicatesDefault) {
  ExperimentConfig c = parsed(kMinimal, {"rwpf_replicates=8", "strategies=[RWPF, RWPF@3]"});
  validate(c);
  EXPECT_EQ(c.strategies[0].rwpf_replicates, 8u);
  EXPECT_EQ(c.strategies[1].rwpf_replicates, 3u);
}

TEST(Config, StrategySpecParsing) {
  EXPECT_EQ(parse_strategy_spec("brpf").kind, Strategy::brpf);
  EXPECT_EQ(parse_strategy_spec("brpf").label, "BRPF");
  const StrategySpec r = parse_strategy_spec("RWPF@1000");
  EXPECT_EQ(r.kind, Strategy::rwpf);
  EXPECT_EQ(r.rwpf_replicates, 1000u);
  EXPECT_EQ(r.label, "RWPF@1000");
  EXPECT_THROW(parse_strategy_spec("RWPF@0"), ConfigError);
  EXPECT_THROW(parse_strategy_spec("RWPF@12x"), ConfigError);
  EXPECT_THROW(parse_strategy_spec("BRPF@5"), ConfigError);
  EXPECT_THROW(parse_strategy_spec("SMC"), ConfigError);
}

TEST(Config, HashIgnoresOutputAndWorkers) {
  ExperimentConfig a = parsed(kMinimal);
  validate(a);
  ExperimentConfig b = parsed(kMinimal, {"output=elsewhere", "workers=3"});
  validate(b);
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  ExperimentConfig c = parsed(kMinimal, {"seed=8"});
  validate(c);
  EXPECT_NE(config_hash(a), config_hash(c));
  ExperimentConfig d = parsed(kMinimal, {"obs_var=4"});
  validate(d);
  EXPECT_NE(config_hash(a), config_hash(d));
}

TEST(Config, StableHashIsFnv1a) {
  EXPECT_EQ(stable_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(stable_hash("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(stable_hash("foobar"), 0x85944171f73967e8ULL);
}

TEST(Config, ShippedConfigsValidate) {
  for (const char* name : {"gaussian_table", "sine_table", "sine_tracking", "gaussian_density", "cox_intensity",
                           "bench_scaling", "bench_filter"}) {
    SCOPED_TRACE(name);
    ExperimentConfig c = load_config(std::string(BRPF_SOURCE_DIR) + "/configs/" + name + ".yaml");
    EXPECT_NO_THROW(validate(c));
  }
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/dir/x.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "/nonexistent/dir/x.yaml");
  }
}

}  // namespace
}  // namespace brpf::experiments
