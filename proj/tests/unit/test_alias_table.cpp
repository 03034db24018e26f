#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "brpf/alias_table.hpp"
#include "brpf/trial_counter.hpp"
#include "test_support.hpp"

namespace brpf {
namespace {

using testing::frequency_within_sigma;
using testing::throws_code;

std::vector<std::uint64_t> draw_counts(const AliasTable& table, std::size_t draws, RandomStream stream) {
  std::vector<std::uint64_t> counts(table.size());
  for (std::size_t i = 0; i < draws; ++i) ++counts[table.draw(stream)];
  return counts;
}

TEST(AliasTable, SingleCategory) {
  const std::vector<double> w{1.0};
  const AliasTable table(w);
  RandomStream s(1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(table.draw(s), 0u);
  EXPECT_EQ(table.size(), 1u);
  EXPECT_EQ(table.total_weight(), 1.0);
}

TEST(AliasTable, EqualWeightsGiveQuarterMass) {
  const std::vector<double> w{1, 1, 1, 1};
  const AliasTable table(w);
  for (const double m : table.reconstructed_masses()) EXPECT_NEAR(m, 0.25, 1e-15);
}

TEST(AliasTable, ZeroMassCategoryNeverDrawn) {
  const std::vector<double> w{0.0, 1.0};
  const AliasTable table(w);
  RandomStream s(2);
  for (int i = 0; i < 100000; ++i) ASSERT_EQ(table.draw(s), 1u);
}

TEST(AliasTable, TwoToOneFrequency) {
  const std::vector<double> w{2.0, 1.0};
  const auto counts = draw_counts(AliasTable(w), 1000000, RandomStream(3));
  EXPECT_TRUE(frequency_within_sigma(counts[0], 1000000, 2.0 / 3.0));
  EXPECT_NEAR(static_cast<double>(counts[0]) / 1e6, 0.6667, 0.0015);
}

TEST(AliasTable, ThreeCategoryChiSquare) {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto counts = draw_counts(AliasTable(w), 1000000, RandomStream(4));
  EXPECT_GT(stats::chi_square_gof(counts, w).p_value, 0.01);
}

TEST(AliasTable, RejectsInvalidWeights) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(throws_code([] { AliasTable(std::vector<double>{}); }, Errc::invalid_weights));
  EXPECT_TRUE(throws_code([] { AliasTable(std::vector<double>{1.0, -0.1}); }, Errc::invalid_weights));
  EXPECT_TRUE(throws_code([&] { AliasTable(std::vector<double>{1.0, nan}); }, Errc::invalid_weights));
  EXPECT_TRUE(throws_code([&] { AliasTable(std::vector<double>{inf, 1.0}); }, Errc::invalid_weights));
  EXPECT_TRUE(throws_code([] { AliasTable(std::vector<double>{0.0, 0.0}); }, Errc::invalid_weights));
}

TEST(AliasTable, MassReconstructionOnRandomTables) {
  RandomStream s(5);
  for (const std::size_t n : {2u, 3u, 10u, 257u, 1000u, 5000u}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& x : w) {
        // Mix of scales and exact zeros.
        const double u = s.uniform();
        x = u < 0.1 ? 0.0 : std::exp(6.0 * (s.uniform() - 0.5));
        total += x;
      }
      if (total == 0.0) w[0] = total = 1.0;
      const AliasTable table(w);
      const auto masses = table.reconstructed_masses();
      for (std::size_t i = 0; i < n; ++i) {
        const double expected = w[i] / total;
        ASSERT_LE(std::abs(masses[i] - expected), 1e-12 * std::max(expected, 1e-300) + 1e-18)
            << "n=" << n << " i=" << i;
      }
      for (const double p : table.probabilities()) {
        ASSERT_GE(p, 0.0);
        ASSERT_LE(p, 1.0);
      }
      for (const auto a : table.aliases()) ASSERT_LT(a, n);
    }
  }
}

// 20 random weight vectors; each test at 0.01 / 20 so the family's false
// rejection rate stays at 0.01.
TEST(AliasTable, EmpiricalLawMatchesWeights) {
  RandomStream s(6);
  const std::size_t sizes[] = {2, 10, 1000};
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = sizes[k % 3];
    std::vector<double> w(n);
    for (auto& x : w) x = s.uniform() < 0.05 ? 0.0 : s.exponential();
    w[0] += 0.1;
    const auto counts = draw_counts(AliasTable(w), 1000000, s.substream(k));
    EXPECT_GT(stats::chi_square_gof(counts, w).p_value, 0.01 / 20) << "vector " << k << " size " << n;
  }
}

TEST(TrialCounter, MomentsExamples) {
  const auto a = geometric_sample_mean_variance(TrialCounter{{1, 1, 1, 1}});
  EXPECT_EQ(a.mean, 1.0);
  EXPECT_EQ(a.variance, 0.0);
  const auto b = geometric_sample_mean_variance(TrialCounter{{1, 3}});
  EXPECT_EQ(b.mean, 2.0);
  EXPECT_EQ(b.variance, 2.0);
  EXPECT_TRUE(std::isnan(geometric_sample_mean_variance(TrialCounter{{4}}).variance));
  EXPECT_EQ((TrialCounter{{2, 1, 3}}).total(), 6u);
}

TEST(TrialCounter, EmptyCounterRejected) {
  EXPECT_TRUE(throws_code([] { geometric_sample_mean_variance(TrialCounter{}); }, Errc::empty_input));
}

TEST(TrialCounter, SimulatedGeometricMoments) {
  RandomStream s(7);
  TrialCounter c;
  for (int i = 0; i < 100000; ++i) c.counts.push_back(s.geometric(0.5));
  const auto m = geometric_sample_mean_variance(c);
  EXPECT_NEAR(m.mean, 2.0, 0.02);
  EXPECT_NEAR(m.variance, 2.0, 0.1);
}

}  // namespace
}  // namespace brpf
