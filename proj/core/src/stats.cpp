#include "brpf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "brpf/error.hpp"

namespace brpf::stats {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) {
    s.mean = s.sd = s.std_error = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (const double x : values) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  s.mean = mean;
  if (s.n < 2) {
    s.sd = s.std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    s.sd = std::sqrt(m2 / static_cast<double>(s.n - 1));
    s.std_error = s.sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(Errc::empty_input, "quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_parameter, "quantile level outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

double normal_log_pdf(double x, double mean, double variance) noexcept {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

double normal_pdf(double x, double mean, double variance) noexcept {
  return std::exp(normal_log_pdf(x, mean, variance));
}

namespace {

double chi_square_survival(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                          double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw Error(Errc::invalid_parameter, "chi-square: observed and probabilities differ in length");
  }
  double n = 0.0;
  for (const auto o : observed) n += static_cast<double>(o);
  double psum = 0.0;
  for (const double p : probabilities) psum += p;

  // Pool small-expectation cells into one bin; an observation in a
  // zero-probability cell is an outright rejection.
  double statistic = 0.0;
  std::size_t cells = 0;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = n * probabilities[i] / psum;
    const double obs = static_cast<double>(observed[i]);
    if (expected <= 0.0) {
      if (obs > 0.0) return {std::numeric_limits<double>::infinity(), 0.0, 0};
      continue;
    }
    if (expected < min_expected) {
      pooled_obs += obs;
      pooled_exp += expected;
      continue;
    }
    statistic += (obs - expected) * (obs - expected) / expected;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  const std::size_t dof = cells > 0 ? cells - 1 : 0;
  return {statistic, chi_square_survival(statistic, dof), dof};
}

TestResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_expected) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(Errc::invalid_parameter, "chi-square two-sample: tables differ in width");
  }
  double na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    na += static_cast<double>(a[k]);
    nb += static_cast<double>(b[k]);
  }
  const double n = na + nb;
  // Merge sparse columns left to right.
  std::vector<std::pair<double, double>> columns;
  double ca = 0.0, cb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ca += static_cast<double>(a[k]);
    cb += static_cast<double>(b[k]);
    const double total = ca + cb;
    if (std::min(total * na / n, total * nb / n) >= min_expected) {
      columns.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (columns.empty()) {
      columns.emplace_back(ca, cb);
    } else {
      columns.back().first += ca;
      columns.back().second += cb;
    }
  }
  double statistic = 0.0;
  for (const auto& [oa, ob] : columns) {
    const double total = oa + ob;
    const double ea = total * na / n;
    const double eb = total * nb / n;
    statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  const std::size_t dof = columns.size() > 0 ? columns.size() - 1 : 0;
  return {statistic, chi_square_survival(statistic, dof), dof};
}

double kolmogorov_survival(double x) noexcept {
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * x * x);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_input, "KS two-sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double p = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return {d, p, 0};
}

TestResult ks_discrete(std::span<const std::uint64_t> sample,
                       const std::function<double(std::uint64_t)>& cdf) {
  if (sample.empty()) throw Error(Errc::empty_input, "KS: empty sample");
  std::vector<std::uint64_t> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const std::uint64_t v = sorted[i];
    const double below = static_cast<double>(i) / n;
    while (i < sorted.size() && sorted[i] == v) ++i;
    const double upto = static_cast<double>(i) / n;
    const double f = cdf(v);
    const double f_prev = v > 0 ? cdf(v - 1) : 0.0;
    d = std::max({d, std::fabs(upto - f), std::fabs(below - f_prev)});
  }
  const double root_n = std::sqrt(n);
  return {d, kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * d), 0};
}

Interval bootstrap_sd_ratio(std::span<const double> numerator, std::span<const double> denominator,
                            double level, std::size_t resamples, RandomStream stream) {
  if (numerator.size() < 2 || denominator.size() < 2) {
    throw Error(Errc::insufficient_draws, "bootstrap: each sample needs at least two values");
  }
  auto sd_of = [](std::span<const double> v) { return summarize(v).sd; };
  std::vector<double> ratios;
  ratios.reserve(resamples);
  std::vector<double> ra(numerator.size()), rb(denominator.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    for (double& x : ra) x = numerator[stream.uniform_index(numerator.size())];
    for (double& x : rb) x = denominator[stream.uniform_index(denominator.size())];
    ratios.push_back(sd_of(ra) / sd_of(rb));
  }
  std::sort(ratios.begin(), ratios.end());
  const double alpha = (1.0 - level) / 2.0;
  return {quantile_sorted(ratios, alpha), sd_of(numerator) / sd_of(denominator),
          quantile_sorted(ratios, 1.0 - alpha)};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::invalid_parameter, "least squares needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace brpf::stats
