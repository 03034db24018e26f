#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "brpf/kalman.hpp"
#include "brpf/models/gaussian_ssm.hpp"
#include "brpf/particle_filter.hpp"
#include "test_support.hpp"

namespace brpf {
namespace {

using testing::frequency_within_sigma;
using testing::throws_code;

/// Deterministic state with an observation density that ignores the state.
class FlatModel final : public StateSpaceModel<double> {
 public:
  explicit FlatModel(std::size_t steps, std::size_t zero_at = 1000) : steps_(steps), zero_at_(zero_at) {}
  std::size_t num_steps() const override { return steps_; }
  Capabilities capabilities() const override { return {true, true, true}; }
  double propose(std::size_t, const double* prev, RandomStream&) const override { return prev ? *prev : 1.0; }
  double exact_weight(std::size_t t, const double*, const double&) const override { return t == zero_at_ ? 0.0 : 0.5; }
  double weight_estimate(std::size_t t, const double* p, const double& x, RandomStream&) const override {
    return exact_weight(t, p, x);
  }
  FactorPair factorization(std::size_t t, const double*, const double&) const override {
    return {t == zero_at_ ? 0.0 : 1.0, Coin::with_probability(0.5)};
  }

 private:
  std::size_t steps_;
  std::size_t zero_at_;
};

class ExactOnly final : public StateSpaceModel<double> {
 public:
  std::size_t num_steps() const override { return 3; }
  Capabilities capabilities() const override { return {true, false, false}; }
  double propose(std::size_t, const double*, RandomStream& s) const override { return s.normal(); }
  double exact_weight(std::size_t, const double*, const double&) const override { return 1.0; }
};

TEST(MultinomialResample, ZeroWeightNeverDrawn) {
  RandomStream s(1);
  const std::vector<double> w{1.0, 0.0};
  EXPECT_EQ(multinomial_resample(w, 2, s), (std::vector<std::size_t>{0, 0}));
  EXPECT_TRUE(throws_code([&] { multinomial_resample(std::vector<double>{0.0, 0.0}, 2, s); },
                          Errc::degenerate_step));
}

TEST(MultinomialResample, OneTwoThreeFrequencies) {
  const std::vector<double> w{1, 2, 3};
  RandomStream s(2);
  std::vector<std::uint64_t> counts(3);
  const std::uint64_t rounds = 1000000;
  for (std::uint64_t i = 0; i < rounds; ++i) ++counts[multinomial_resample(w, 1, s)[0]];
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(frequency_within_sigma(counts[i], rounds, w[i] / 6.0)) << i;
}

TEST(MultinomialResample, RaceWithMatchingProductsHasSameLaw) {
  WeightFactorization f;
  f.constants = {1, 1, 1};
  for (const double b : {1.0 / 3, 2.0 / 3, 1.0}) f.coins.push_back(Coin::with_probability(b));
  const auto out = race_resample(f, 1000000, RandomStream(3));
  std::vector<std::uint64_t> counts(3);
  for (const auto i : out.indices) ++counts[i];
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(frequency_within_sigma(counts[i], 1000000, (i + 1) / 6.0)) << i;
}

class FlatModelRun : public ::testing::TestWithParam<Strategy> {};

TEST_P(FlatModelRun, EqualWeightsGiveUniformAncestry) {
  const FlatModel model(20);
  const auto out = run_filter(model, {50, GetParam(), 1, 10'000'000}, RandomStream(4));
  EXPECT_DOUBLE_EQ(out.functionals.at("h1"), 1.0);
  EXPECT_DOUBLE_EQ(out.functionals.at("h3"), 1.0);
  EXPECT_DOUBLE_EQ(out.functionals.at("h4"), 0.0);
  EXPECT_NEAR(out.functionals.at("h2"), std::sqrt(20.0), 1e-12);
  std::vector<std::uint64_t> counts(50);
  for (std::size_t t = 0; t < 20; ++t)
    for (const auto a : out.genealogy.ancestors(t)) ++counts[a];
  EXPECT_GT(stats::chi_square_gof(counts, std::vector<double>(50, 1.0)).p_value, 0.001);
  EXPECT_NO_THROW(out.genealogy.validate());
  if (GetParam() != Strategy::brpf) EXPECT_NEAR(out.likelihood.log_value, 20 * std::log(0.5), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(All, FlatModelRun, ::testing::Values(Strategy::ewpf, Strategy::rwpf, Strategy::brpf));

TEST(RunFilter, DegenerateStepCarriesIndex) {
  const FlatModel model(6, 3);
  for (const auto strategy : {Strategy::ewpf, Strategy::brpf}) {
    try {
      run_filter(model, {10, strategy, 1, 1000}, RandomStream(5));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::degenerate_step);
      EXPECT_EQ(e.step(), 3u);
    }
  }
}

TEST(RunFilter, BudgetErrorCarriesStep) {
  const GaussianSSMParams p;
  const GaussianSSM model(p, {0.0, 400.0, 0.0}, 1, 1000);
  try {
    run_filter(model, {20, Strategy::brpf, 1, 100}, RandomStream(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::stopping_budget_exceeded);
    EXPECT_EQ(e.step(), 1u);
  }
}

TEST(RunFilter, Preconditions) {
  const ExactOnly model;
  EXPECT_TRUE(throws_code([&] { run_filter(model, {10, Strategy::brpf, 1, 100}, RandomStream(7)); },
                          Errc::capability_missing));
  EXPECT_TRUE(throws_code([&] { run_filter(model, {10, Strategy::rwpf, 1, 100}, RandomStream(7)); },
                          Errc::capability_missing));
  EXPECT_TRUE(throws_code([&] { run_filter(model, {1, Strategy::ewpf, 1, 100}, RandomStream(7)); },
                          Errc::invalid_parameter));
  const GaussianSSM empty(GaussianSSMParams{}, {});
  EXPECT_TRUE(throws_code([&] { run_filter(empty, {10, Strategy::ewpf, 1, 100}, RandomStream(7)); },
                          Errc::invalid_parameter));
}

TEST(RunFilter, IndependentOfWorkerCount) {
  RandomStream data(8);
  const GaussianSSMParams p;
  const auto d = simulate_gaussian_dataset(p, 20, data);
  const GaussianSSM model(p, d.observations);
  for (const auto strategy : {Strategy::ewpf, Strategy::rwpf, Strategy::brpf}) {
    const auto a = run_filter(model, {64, strategy, 1, 10'000'000}, RandomStream(9));
    const auto b = run_filter(model, {64, strategy, 4, 10'000'000}, RandomStream(9));
    EXPECT_EQ(a.functionals, b.functionals);
    EXPECT_EQ(a.likelihood.log_value, b.likelihood.log_value);
    EXPECT_EQ(a.total_flips(), b.total_flips());
    for (std::size_t t = 0; t < 20; ++t) {
      ASSERT_EQ(a.genealogy.ancestors(t), b.genealogy.ancestors(t));
      ASSERT_EQ(a.genealogy.proposed_values(t), b.genealogy.proposed_values(t));
    }
  }
}

TEST(RunFilter, BrpfRecordsAndDiagnostics) {
  RandomStream data(10);
  const GaussianSSMParams p;
  const auto d = simulate_gaussian_dataset(p, 15, data);
  const GaussianSSM model(p, d.observations);
  const auto out = run_filter(model, {40, Strategy::brpf, 1, 10'000'000}, RandomStream(11));
  ASSERT_EQ(out.records.size(), 15u);
  std::uint64_t flips = 0;
  for (std::size_t t = 0; t < 15; ++t) {
    const auto& r = out.records[t];
    ASSERT_EQ(r.trials.size(), 40u);
    ASSERT_EQ(r.total_flips, r.trials.total());
    ASSERT_GE(r.total_flips, 40u);
    ASSERT_TRUE(out.diagnostics[t].rho.has_value());
    EXPECT_DOUBLE_EQ(out.diagnostics[t].rho->mvue, estimate_rho(r.trials).mvue);
    EXPECT_NEAR(r.constant_sum, 40.0 / std::sqrt(2 * M_PI * p.obs_var), 1e-12);
    flips += r.total_flips;
  }
  EXPECT_EQ(out.total_flips(), flips);
  double log_sum = 0.0;
  for (const double f : out.likelihood.per_step_factors) log_sum += std::log(f);
  EXPECT_NEAR(out.likelihood.log_value, log_sum, 1e-12 * std::abs(log_sum));
}

TEST(RunFilter, BrpfTracksKalmanMeans) {
  RandomStream data(12);
  const GaussianSSMParams p;
  const auto d = simulate_gaussian_dataset(p, 50, data);
  const GaussianSSM model(p, d.observations);
  const auto kf = kalman_reference(p, d.observations);
  const auto out = run_filter(model, {100, Strategy::brpf, 1, 10'000'000}, RandomStream(13));
  for (std::size_t t = 0; t < 50; ++t) {
    const auto v = out.genealogy.filtering_values(t);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    EXPECT_LE(std::abs(mean - kf.filter_means[t]), 4.0 * std::sqrt(kf.filter_variances[t])) << "t=" << t;
  }
  EXPECT_NEAR(out.functionals.at("h3"),
              [&] {
                const auto v = out.genealogy.filtering_values(49);
                return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
              }(),
              1e-12);
}

TEST(RunFilter, GenealogyValidAcrossRuns) {
  RandomStream data(14);
  const GaussianSSMParams p;
  const auto d = simulate_gaussian_dataset(p, 10, data);
  const GaussianSSM model(p, d.observations);
  for (std::uint64_t r = 0; r < 10; ++r) {
    for (const auto strategy : {Strategy::ewpf, Strategy::rwpf, Strategy::brpf}) {
      const auto out = run_filter(model, {30, strategy, 1, 10'000'000}, RandomStream(15, r));
      EXPECT_NO_THROW(out.genealogy.validate());
      EXPECT_EQ(out.genealogy.steps(), 10u);
      for (const auto& [label, value] : out.functionals) EXPECT_TRUE(std::isfinite(value)) << label;
    }
  }
}

TEST(RunFilter, FrozenEnsembleOffspringLawMatches) {
  // Same proposed particles, weights from the model: EWPF multinomial vs race.
  const GaussianSSMParams p;
  const double y = 1.7;
  RandomStream s(16);
  std::vector<double> prev(8);
  for (auto& x : prev) x = s.normal(0, 2);
  std::vector<double> w(8);
  WeightFactorization f;
  for (std::size_t i = 0; i < 8; ++i) {
    w[i] = gaussian_predictive_density(p, prev[i], y);
    auto pair = gaussian_weight_coin(p, prev[i], y);
    f.constants.push_back(pair.constant);
    f.coins.push_back(pair.coin);
  }
  std::vector<std::uint64_t> a(8), b(8);
  RandomStream ms(17);
  for (const auto i : multinomial_resample(w, 100000, ms)) ++a[i];
  for (const auto i : race_resample(f, 100000, RandomStream(18)).indices) ++b[i];
  EXPECT_GT(stats::chi_square_two_sample(a, b).p_value, 0.01);
  EXPECT_GT(stats::chi_square_gof(b, w).p_value, 0.01);
}

}  // namespace
}  // namespace brpf
