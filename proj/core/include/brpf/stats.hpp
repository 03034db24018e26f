#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "brpf/random_stream.hpp"

namespace brpf::stats {

struct Summary {
  double mean = 0.0;
  double sd = 0.0;         // unbiased; NaN when n < 2
  double std_error = 0.0;  // sd / sqrt(n)
  std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

/// Linear-interpolation quantile (h = (n - 1) p) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::vector<double> values, double p);

double normal_log_pdf(double x, double mean, double variance) noexcept;
double normal_pdf(double x, double mean, double variance) noexcept;

struct TestResult {
  double statistic;
  double p_value;
  std::size_t dof = 0;
};

/// Pearson goodness of fit of category counts against probabilities.
/// Categories with expected count below `min_expected` are pooled.
TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                          double min_expected = 5.0);

/// Pearson test of homogeneity for a 2 x K table of counts (K categories).
/// Columns whose pooled count is below `min_expected` are merged.
TestResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_expected = 5.0);

/// Kolmogorov survival function Q(x) = 2 sum (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_survival(double x) noexcept;

/// Two-sample Kolmogorov-Smirnov test (asymptotic, Stephens' correction).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS against an integer-valued CDF; the asymptotic p-value is
/// conservative for discrete laws.
TestResult ks_discrete(std::span<const std::uint64_t> sample,
                       const std::function<double(std::uint64_t)>& cdf);

struct Interval {
  double lower;
  double estimate;
  double upper;
};

/// Percentile bootstrap interval for sd(numerator) / sd(denominator), the
/// two samples resampled independently.
Interval bootstrap_sd_ratio(std::span<const double> numerator, std::span<const double> denominator,
                            double level, std::size_t resamples, RandomStream stream);

struct LinearFit {
  double slope;
  double intercept;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace brpf::stats
