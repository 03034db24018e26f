#include "brpf/coin_factories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <utility>
#include <vector>

#include "brpf/error.hpp"

namespace brpf {

namespace {

constexpr double kRangeTolerance = 1e-12;
constexpr double kCostWarningMean = 50.0;

void warn_expensive(double mean) {
  static std::atomic<bool> warned{false};
  if (mean > kCostWarningMean && !warned.exchange(true)) {
    std::clog << "brpf: warning: Poisson mean rate*dt = " << mean
              << " exceeds 50; coin flips will be expensive\n";
  }
}

std::vector<double> sorted_uniform_times(std::uint64_t count, double t0, double t1,
                                         RandomStream& stream) {
  std::vector<double> times(count);
  const double width = t1 - t0;
  for (double& t : times) t = t0 + width * stream.uniform_open();
  std::sort(times.begin(), times.end());
  return times;
}

double checked_threshold(double shift, double phi_value, double rate) {
  const double threshold = (shift - phi_value) / rate;
  if (!(threshold >= -kRangeTolerance && threshold <= 1.0 + kRangeTolerance)) {
    throw Error(Errc::config_bound_violation,
                "Poisson coin: (shift - phi) / rate = " + std::to_string(threshold) +
                    " outside [0, 1]; the analytic phi bounds are wrong");
  }
  return threshold;
}

}  // namespace

Coin coin_from_unit_estimate(UnitEstimator estimator) {
  return Coin(
      [estimator = std::move(estimator)](RandomStream& stream) {
        const double b_hat = estimator(stream);
        if (!(b_hat >= -kRangeTolerance && b_hat <= 1.0 + kRangeTolerance)) {
          throw Error(Errc::estimator_range_violation,
                      "unit estimate " + std::to_string(b_hat) + " outside [0, 1]");
        }
        return stream.uniform() < b_hat;
      },
      "unit-estimate");
}

void PoissonCoinConfig::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(Errc::invalid_parameter, "Poisson coin: rate must be positive");
  }
  if (!phi) throw Error(Errc::invalid_parameter, "Poisson coin: phi is not set");
  if (phi_min > phi_max) throw Error(Errc::invalid_parameter, "Poisson coin: phi_min > phi_max");
  if (shift < phi_max) {
    throw Error(Errc::config_bound_violation, "Poisson coin: shift below the upper bound of phi");
  }
  if (rate < shift - phi_min) {
    throw Error(Errc::config_bound_violation, "Poisson coin: rate below shift - inf phi");
  }
}

Coin pgf_coin(const BrownianBridge& bridge, std::shared_ptr<const PoissonCoinConfig> config) {
  warn_expensive(config->rate * bridge.length);
  return Coin(
      [bridge, config = std::move(config)](RandomStream& stream) {
        const std::uint64_t kappa = stream.poisson(config->rate * bridge.length);
        if (kappa == 0) return true;
        const auto times = sorted_uniform_times(kappa, 0.0, bridge.length, stream);
        BridgeWalker walker(bridge);
        for (const double t : times) {
          const double w = walker.advance(t, stream);
          const double threshold = checked_threshold(config->shift, config->phi(w), config->rate);
          // Once one indicator fails the product is zero whatever follows.
          if (!(stream.uniform() < threshold)) return false;
        }
        return true;
      },
      "pgf");
}

WeightEstimate poisson_weight_estimate(const BrownianBridge& bridge, const PoissonCoinConfig& config,
                                       RandomStream& stream, std::size_t replicates) {
  warn_expensive(config.rate * bridge.length);
  replicates = std::max<std::size_t>(replicates, 1);
  const double scale = std::exp((config.rate - config.shift) * bridge.length);
  double total = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::uint64_t kappa = stream.poisson(config.rate * bridge.length);
    const auto times = sorted_uniform_times(kappa, 0.0, bridge.length, stream);
    BridgeWalker walker(bridge);
    double product = 1.0;
    for (const double t : times) {
      const double w = walker.advance(t, stream);
      product *= checked_threshold(config.shift, config.phi(w), config.rate);
    }
    total += scale * std::max(product, 0.0);
  }
  return {total / static_cast<double>(replicates)};
}

double sigmoid_intensity(double x, double lambda_max) noexcept {
  if (x >= 0.0) return lambda_max / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return lambda_max * e / (1.0 + e);
}

namespace {

// Draws the thinning skeleton and returns the factors 1 - lambda(U_i)/lambda_max.
std::vector<double> thinning_factors(const LatentPath& path, double lambda_max, RandomStream& stream) {
  const double t0 = path.start_time();
  const double t1 = path.end_time();
  const std::uint64_t k = stream.poisson(lambda_max * (t1 - t0));
  std::vector<double> factors;
  if (k == 0) return factors;
  const auto times = sorted_uniform_times(k, t0, t1, stream);
  std::vector<double> latent(times.size());
  path.sample_at(times, latent, stream);
  factors.reserve(times.size());
  for (const double x : latent) {
    const double lambda = sigmoid_intensity(x, lambda_max);
    if (!(lambda <= lambda_max * (1.0 + kRangeTolerance))) {
      throw Error(Errc::config_bound_violation, "thinning coin: intensity exceeds lambda_max");
    }
    factors.push_back(std::clamp((lambda_max - lambda) / lambda_max, 0.0, 1.0));
  }
  return factors;
}

}  // namespace

Coin cox_thinning_coin(std::shared_ptr<const LatentPath> path, double lambda_max) {
  if (!(lambda_max > 0.0)) throw Error(Errc::invalid_parameter, "thinning coin: lambda_max must be positive");
  warn_expensive(lambda_max * (path->end_time() - path->start_time()));
  return Coin(
      [path = std::move(path), lambda_max](RandomStream& stream) {
        const auto factors = thinning_factors(*path, lambda_max, stream);
        for (const double f : factors) {
          if (!(stream.uniform() < f)) return false;
        }
        return true;
      },
      "thinning");
}

WeightEstimate thinning_weight_estimate(const LatentPath& path, double lambda_max,
                                        RandomStream& stream, std::size_t replicates) {
  if (!(lambda_max > 0.0)) throw Error(Errc::invalid_parameter, "thinning estimate: lambda_max must be positive");
  replicates = std::max<std::size_t>(replicates, 1);
  double total = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    double product = 1.0;
    for (const double f : thinning_factors(path, lambda_max, stream)) product *= f;
    total += product;
  }
  return {total / static_cast<double>(replicates)};
}

}  // namespace brpf
