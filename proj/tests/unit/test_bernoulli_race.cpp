#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "brpf/bernoulli_race.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace brpf {
namespace {

using testing::frequency_within_sigma;
using testing::mean_within_sigma;
using testing::throws_code;

WeightFactorization fixed(std::vector<double> c, const std::vector<double>& b) {
  WeightFactorization f;
  f.constants = std::move(c);
  for (const double p : b) f.coins.push_back(Coin::with_probability(p));
  return f;
}

std::vector<std::uint64_t> index_counts(const RaceOutcome& out, std::size_t n) {
  std::vector<std::uint64_t> counts(n);
  for (const auto i : out.indices) ++counts[i];
  return counts;
}

TEST(BernoulliRace, AllCoinsAcceptImmediately) {
  const auto f = fixed({1, 1}, {1, 1});
  const auto out = race_resample(f, 100000, RandomStream(1));
  for (const auto c : out.trials.counts) ASSERT_EQ(c, 1u);
  EXPECT_TRUE(frequency_within_sigma(index_counts(out, 2)[0], 100000, 0.5));
  EXPECT_EQ(out.total_flips, 100000u);
}

TEST(BernoulliRace, TwoParticleFrequency) {
  const auto f = fixed({2, 1}, {0.5, 1.0});
  const AliasTable table(f.constants);
  RandomStream s(2);
  std::uint64_t first = 0;
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) first += race_once(f, table, s).index == 0;
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 0.0015);
}

TEST(BernoulliRace, MeanTrialCountIsInverseRho) {
  const auto f = fixed({1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5});
  const auto out = race_resample(f, 100000, RandomStream(3));
  const auto m = geometric_sample_mean_variance(out.trials);
  EXPECT_NEAR(m.mean, 2.0, 0.03);
}

TEST(BernoulliRace, SingleParticle) {
  const auto out = race_resample(fixed({1}, {1}), 5, RandomStream(4));
  EXPECT_EQ(out.indices, std::vector<std::size_t>(5, 0));
  EXPECT_EQ(out.trials.counts, std::vector<std::uint64_t>(5, 1));
}

TEST(BernoulliRace, ThreeParticleChiSquare) {
  const auto f = fixed({1, 2, 3}, {0.9, 0.6, 0.3});
  const auto out = race_resample(f, 1000000, RandomStream(5));
  const std::vector<double> p{0.3, 0.4, 0.3};
  EXPECT_GT(stats::chi_square_gof(index_counts(out, 3), p).p_value, 0.01);
}

TEST(BernoulliRace, WorkerCountDoesNotChangeOutcome) {
  const auto f = fixed({1, 2, 3}, {0.9, 0.6, 0.3});
  const auto a = race_resample(f, 20000, RandomStream(6), {1, 10'000'000});
  const auto b = race_resample(f, 20000, RandomStream(6), {4, 10'000'000});
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_EQ(a.trials.counts, b.trials.counts);
  EXPECT_EQ(a.total_flips, b.total_flips);
}

TEST(BernoulliRace, OutcomeInvariants) {
  const auto f = fixed({0.5, 0.0, 4.0, 1.0}, {0.2, 0.7, 0.05, 0.9});
  const auto out = race_resample(f, 777, RandomStream(7), {3, 10'000'000});
  ASSERT_EQ(out.indices.size(), 777u);
  ASSERT_EQ(out.trials.size(), 777u);
  EXPECT_EQ(out.total_flips, out.trials.total());
  for (const auto i : out.indices) {
    ASSERT_LT(i, 4u);
    ASSERT_NE(i, 1u);  // zero constant is never proposed
  }
  for (const auto c : out.trials.counts) ASSERT_GE(c, 1u);
}

TEST(BernoulliRace, BudgetErrorCarriesDrawIndex) {
  // A single zero coin: the very first draw exhausts the budget.
  const auto f = fixed({1.0}, {0.0});
  try {
    race_resample(f, 3, RandomStream(8), {1, 1000});
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::stopping_budget_exceeded);
    ASSERT_TRUE(e.draw().has_value());
    EXPECT_EQ(*e.draw(), 0u);
  }
  WeightFactorization g;
  g.constants = {1.0};
  g.coins = {Coin([](RandomStream& s) { return s.uniform() < 0.0; })};
  EXPECT_TRUE(throws_code([&] { race_resample(g, 2, RandomStream(8), {2, 50}); },
                          Errc::stopping_budget_exceeded));
}

TEST(BernoulliRace, BudgetErrorReportsLaterDraw) {
  // With a budget of one round about half the draws fail; the reported
  // index must be the first of them.
  const auto f = fixed({1.0}, {0.5});
  try {
    race_resample(f, 64, RandomStream(9), {1, 1});
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    ASSERT_TRUE(e.draw().has_value());
    // Recompute which draw was first to fail.
    const AliasTable table(f.constants);
    std::size_t first_fail = 64;
    for (std::size_t j = 0; j < 64 && first_fail == 64; ++j) {
      RandomStream s = RandomStream(9).substream(j);
      try {
        race_once(f, table, s, 1);
      } catch (const Error&) {
        first_fail = j;
      }
    }
    EXPECT_EQ(*e.draw(), first_fail);
  }
}

TEST(BernoulliRace, RejectsMalformedFactorization) {
  WeightFactorization f = fixed({1, 2}, {0.5});
  EXPECT_TRUE(throws_code([&] { f.validate(); }, Errc::invalid_weights));
  WeightFactorization g = fixed({0, 0}, {0.5, 0.5});
  EXPECT_TRUE(throws_code([&] { race_resample(g, 1, RandomStream(1)); }, Errc::invalid_weights));
  WeightFactorization h = fixed({1, -1}, {0.5, 0.5});
  EXPECT_TRUE(throws_code([&] { race_resample(h, 1, RandomStream(1)); }, Errc::invalid_weights));
  WeightFactorization k;
  k.constants = {1.0};
  k.coins.resize(1);
  EXPECT_TRUE(throws_code([&] { race_resample(k, 1, RandomStream(1)); }, Errc::invalid_weights));
}

class RaceExactness : public ::testing::TestWithParam<std::size_t> {};

TEST_P(RaceExactness, RandomFactorizationMatchesTargetLaw) {
  const std::size_t n = GetParam();
  RandomStream s(10, n);
  std::vector<double> c(n), b(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = 0.1 + 2.0 * s.uniform();
    b[i] = 0.05 + 0.95 * s.uniform();
    p[i] = c[i] * b[i];
  }
  const auto out = race_resample(fixed(c, b), 1000000, s.substream(1));
  EXPECT_GT(stats::chi_square_gof(index_counts(out, n), p).p_value, 0.01);
}

INSTANTIATE_TEST_SUITE_P(Sizes, RaceExactness, ::testing::Values(2u, 5u, 50u));

TEST(BernoulliRace, TrialCountsAreGeometric) {
  const std::vector<double> c{1.0, 3.0, 0.5};
  const std::vector<double> b{0.2, 0.4, 0.9};
  const double rho = (0.2 + 1.2 + 0.45) / 4.5;
  const auto out = race_resample(fixed(c, b), 200000, RandomStream(11));
  const auto ks = stats::ks_discrete(out.trials.counts,
                                     [rho](std::uint64_t k) { return oracles::geometric_cdf(k, rho); });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(BernoulliRace, MeanTrialsWithinCoinBounds) {
  RandomStream s(12);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> c(8), b(8);
    for (std::size_t i = 0; i < 8; ++i) {
      c[i] = s.exponential();
      b[i] = 0.1 + 0.8 * s.uniform();
    }
    const double bmin = *std::min_element(b.begin(), b.end());
    const double bmax = *std::max_element(b.begin(), b.end());
    const auto out = race_resample(fixed(c, b), 50000, s.substream(rep));
    std::vector<double> trials(out.trials.counts.begin(), out.trials.counts.end());
    const auto sum = stats::summarize(trials);
    EXPECT_GE(sum.mean, 1.0 / bmax - 3.0 * sum.std_error);
    EXPECT_LE(sum.mean, 1.0 / bmin + 3.0 * sum.std_error);
  }
}

TEST(BernoulliRace, ScaleInvariance) {
  const std::vector<double> c{1.0, 2.0, 5.0, 0.25};
  const std::vector<double> b{0.3, 0.8, 0.1, 0.6};
  std::vector<double> scaled(c);
  for (auto& x : scaled) x *= 1e6;
  const auto a = race_resample(fixed(c, b), 200000, RandomStream(13));
  const auto z = race_resample(fixed(scaled, b), 200000, RandomStream(14));
  EXPECT_GT(stats::chi_square_two_sample(index_counts(a, 4), index_counts(z, 4)).p_value, 0.01);
  std::vector<double> ta(a.trials.counts.begin(), a.trials.counts.end());
  std::vector<double> tz(z.trials.counts.begin(), z.trials.counts.end());
  EXPECT_GT(stats::ks_two_sample(ta, tz).p_value, 0.01);
}

TEST(EstimateRho, Examples) {
  const auto a = estimate_rho(TrialCounter{{1, 1}});
  EXPECT_EQ(a.mvue, 1.0);
  EXPECT_EQ(a.naive, 1.0);
  const auto b = estimate_rho(TrialCounter{{2, 1, 3}});
  EXPECT_DOUBLE_EQ(b.mvue, 0.4);
  EXPECT_DOUBLE_EQ(b.naive, 0.5);
  EXPECT_EQ(b.draw_count, 3u);
  EXPECT_TRUE(throws_code([] { estimate_rho(TrialCounter{{3}}); }, Errc::insufficient_draws));
  EXPECT_DOUBLE_EQ(naive_rho(TrialCounter{{4}}), 0.25);
  EXPECT_TRUE(throws_code([] { naive_rho(TrialCounter{}); }, Errc::empty_input));
}

TEST(EstimateRho, MvueOracleIsExact) {
  for (const double rho : {0.1, 0.5, 0.9}) {
    for (const std::size_t n : {2u, 10u, 100u}) {
      EXPECT_NEAR(oracles::mvue_expectation(rho, n), rho, 1e-9) << rho << " " << n;
    }
  }
}

TEST(EstimateRho, MonteCarloUnbiasedAtTwoDraws) {
  RandomStream s(15);
  std::vector<double> v(1000000);
  for (auto& x : v) {
    TrialCounter c{{s.geometric(0.5), s.geometric(0.5)}};
    x = estimate_rho(c).mvue;
  }
  EXPECT_TRUE(mean_within_sigma(v, 0.5));
}

TEST(CltDiagnostics, VariancesNearLimits) {
  const auto r = clt_diagnostics(10000, 1000, 0.5, RandomStream(16));
  EXPECT_EQ(r.mean_target, 2.0);
  EXPECT_EQ(r.mvue_target, 0.125);
  EXPECT_NEAR(r.mean_scaled_variance / 2.0, 1.0, 0.1);
  EXPECT_NEAR(r.mvue_scaled_variance / 0.125, 1.0, 0.1);
}

TEST(CltDiagnostics, RejectsBadParameters) {
  EXPECT_TRUE(throws_code([] { clt_diagnostics(10, 10, 1.0, RandomStream(1)); }, Errc::invalid_parameter));
  EXPECT_TRUE(throws_code([] { clt_diagnostics(10, 10, 0.0, RandomStream(1)); }, Errc::invalid_parameter));
  EXPECT_TRUE(throws_code([] { clt_diagnostics(10, 1, 0.5, RandomStream(1)); }, Errc::invalid_parameter));
  EXPECT_TRUE(throws_code([] { clt_diagnostics(1, 10, 0.5, RandomStream(1)); }, Errc::invalid_parameter));
}

}  // namespace
}  // namespace brpf
