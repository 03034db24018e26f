#include "brpf/random_stream.hpp"

#include <cmath>

#include "brpf/error.hpp"

namespace brpf {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_weights: return "InvalidWeights";
    case Errc::empty_input: return "EmptyInput";
    case Errc::stopping_budget_exceeded: return "StoppingBudgetExceeded";
    case Errc::insufficient_draws: return "InsufficientDraws";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::estimator_range_violation: return "EstimatorRangeViolation";
    case Errc::invalid_time: return "InvalidTime";
    case Errc::config_bound_violation: return "ConfigBoundViolation";
    case Errc::capability_missing: return "CapabilityMissing";
    case Errc::degenerate_step: return "DegenerateStep";
    case Errc::invalid_step: return "InvalidStep";
  }
  return "Unknown";
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = hash_combine(mix64(seed), stream_id);
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    word = mix64(x);
  }
  // xoshiro must not start from the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) noexcept {
  std::uint64_t x = (*this)();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Marsaglia polar method; the second variate of each pair is kept.
double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double RandomStream::exponential() noexcept { return -std::log(uniform_open()); }

std::uint64_t RandomStream::poisson(double mean) noexcept {
  if (!(mean > 0.0)) return 0;
  if (mean < 10.0) {
    // Sequential inversion.
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;  // tail exhausted in floating point
      cdf = next;
    }
    return k;
  }
  // Hörmann's transformed rejection with squeeze (PTRS).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::uint64_t RandomStream::geometric(double p) noexcept {
  if (p >= 1.0) return 1;
  const double trials = std::floor(std::log(uniform_open()) / std::log1p(-p));
  return 1 + static_cast<std::uint64_t>(trials);
}

}  // namespace brpf
