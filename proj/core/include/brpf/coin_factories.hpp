#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "brpf/brownian_bridge.hpp"
#include "brpf/coin.hpp"
#include "brpf/random_stream.hpp"

namespace brpf {

/// Sampler of unbiased estimates that lie in [0, 1].
using UnitEstimator = std::function<double(RandomStream&)>;

/// Coin with success probability E[b_hat]: one fresh estimate and one
/// uniform V per flip, returning V < b_hat. An estimate outside [0, 1]
/// (tolerance 1e-12) throws Error(estimator_range_violation) on the flip.
Coin coin_from_unit_estimate(UnitEstimator estimator);

/**
 * Parameters of the Poisson estimator and of the matching PGF coin for
 * E[exp(-int_0^dt phi(W_s) ds)] over a Brownian bridge W.
 *
 * `phi_min` / `phi_max` are analytic bounds of phi over the state space;
 * validate() requires shift >= phi_max and rate >= shift - phi_min so every
 * thinning threshold (shift - phi) / rate lies in [0, 1].
 */
struct PoissonCoinConfig {
  double rate = 1.0;
  double shift = 0.0;
  std::function<double(double)> phi;
  double phi_min = 0.0;
  double phi_max = 0.0;

  /// Throws Error(config_bound_violation) or Error(invalid_parameter).
  void validate() const;
};

struct WeightEstimate {
  double value;
};

/// One flip draws kappa ~ Poisson(rate * dt) bridge times and returns the
/// product of 1{V_i < (shift - phi(W_{U_i})) / rate}. Success probability is
/// exp((shift - rate) dt) * E[exp(-int phi(W_s) ds)].
/// A threshold outside [0, 1] at an evaluated point throws
/// Error(config_bound_violation).
Coin pgf_coin(const BrownianBridge& bridge, std::shared_ptr<const PoissonCoinConfig> config);

/// Poisson estimator exp((rate - shift) dt) * prod (shift - phi(W_{U_i})) / rate,
/// averaged over `replicates` independent draws.
WeightEstimate poisson_weight_estimate(const BrownianBridge& bridge, const PoissonCoinConfig& config,
                                       RandomStream& stream, std::size_t replicates = 1);

/// Latent log-intensity coordinate of a path on [start_time, end_time].
/// Stochastic paths draw fresh values on every call, conditioned on
/// whatever the path holds fixed.
class LatentPath {
 public:
  virtual ~LatentPath() = default;
  virtual double start_time() const = 0;
  virtual double end_time() const = 0;
  /// `sorted_times` is non-decreasing and inside [start_time, end_time].
  virtual void sample_at(std::span<const double> sorted_times, std::span<double> out,
                         RandomStream& stream) const = 0;
  /// Value the path holds fixed at time t, if any.
  virtual std::optional<double> pinned_value(double /*t*/) const { return std::nullopt; }
};

/// Deterministic path given by a function of time.
class FunctionPath final : public LatentPath {
 public:
  FunctionPath(double start, double end, std::function<double(double)> value)
      : start_(start), end_(end), value_(std::move(value)) {}
  double start_time() const override { return start_; }
  double end_time() const override { return end_; }
  void sample_at(std::span<const double> sorted_times, std::span<double> out,
                 RandomStream&) const override {
    for (std::size_t i = 0; i < sorted_times.size(); ++i) out[i] = value_(sorted_times[i]);
  }
  std::optional<double> pinned_value(double t) const override { return value_(t); }

 private:
  double start_;
  double end_;
  std::function<double(double)> value_;
};

/// lambda_max / (1 + exp(-x)), evaluated without overflow.
double sigmoid_intensity(double x, double lambda_max) noexcept;

/// Thinning coin with success probability exp(-int lambda(s) ds) over the
/// path's interval, lambda = lambda_max * sigmoid(X_1). Throws
/// Error(invalid_parameter) for lambda_max <= 0; a flip that evaluates
/// lambda > lambda_max throws Error(config_bound_violation).
Coin cox_thinning_coin(std::shared_ptr<const LatentPath> path, double lambda_max);

/// Unbiased non-negative estimate of exp(-int lambda(s) ds):
/// prod_{i <= K} (1 - lambda(U_i) / lambda_max), K ~ Poisson(lambda_max * length).
WeightEstimate thinning_weight_estimate(const LatentPath& path, double lambda_max,
                                        RandomStream& stream, std::size_t replicates = 1);

}  // namespace brpf
