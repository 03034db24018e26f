#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "brpf/coin_factories.hpp"
#include "brpf/models/dataset.hpp"
#include "brpf/random_stream.hpp"
#include "brpf/state_space_model.hpp"

namespace brpf {

/// phi(x) = (sin^2 x + cos x) / 2 for dX = sin(X) dt + dB.
double sine_phi(double x) noexcept;
inline constexpr double kSinePhiMin = -0.5;
inline constexpr double kSinePhiMax = 0.625;

/// dX_s = sin(X_s) ds + dB_s observed as Y_t = X_{s_t} + N(0, obs_sd^2).
struct SineDiffusionParams {
  double obs_sd = 5.0;
  double horizon = 15.0;
  std::vector<double> observation_times = unit_grid(15.0, 15);
  double initial_state = 0.0;
  double truth_euler_step = 1e-3;  // dataset simulation only
  double coin_shift = 0.625;
  double coin_rate = 1.125;
  std::size_t rwpf_replicates = 1;

  /// `count` equally spaced times ending at `horizon`.
  static std::vector<double> unit_grid(double horizon, std::size_t count);

  /// Throws Error(invalid_parameter) or, for bad coin bounds,
  /// Error(config_bound_violation).
  void validate() const;
  /// Gap before observation `t` (from time 0 when t = 0).
  double step_length(std::size_t t) const;
};

/// Coin configuration for phi with the given shift c and rate lambda.
std::shared_ptr<const PoissonCoinConfig> sine_coin_config(double shift = 0.625, double rate = 1.125);

/// log c_{t,k}: observation density, Euler-proposal correction, the
/// exp(A(x_t) - A(x_prev)) Girsanov term with A = -cos, and exp(-(c - lambda) dt).
double sine_log_constant(double x_prev, double x_prop, double y, double dt, double obs_sd,
                         const PoissonCoinConfig& config);

/// (c_{t,k}, pgf coin over the bridge x_prev -> x_prop of length dt).
FactorPair sine_factorization(double x_prev, double x_prop, double y, double dt, double obs_sd,
                              std::shared_ptr<const PoissonCoinConfig> config);

/// One Euler-Maruyama step of length dt.
double sine_euler_proposal(double x_prev, double dt, RandomStream& stream);

/// Truth from a fine Euler scheme plus Gaussian observation noise.
Dataset simulate_sine_dataset(const SineDiffusionParams& params, RandomStream& stream);

/// Sine diffusion with Euler proposals. BRPF uses the pgf coin, RWPF the
/// Poisson estimator; exact weights are unavailable.
class SineDiffusionModel final : public StateSpaceModel<double> {
 public:
  SineDiffusionModel(SineDiffusionParams params, std::vector<double> observations);

  const SineDiffusionParams& params() const noexcept { return params_; }
  std::span<const double> observations() const noexcept { return observations_; }

  std::size_t num_steps() const override { return observations_.size(); }
  Capabilities capabilities() const override { return {false, true, true}; }
  double propose(std::size_t t, const double* previous, RandomStream& stream) const override;
  double weight_estimate(std::size_t t, const double* previous, const double& proposed,
                         RandomStream& stream) const override;
  FactorPair factorization(std::size_t t, const double* previous, const double& proposed) const override;

 private:
  double previous_state(const double* previous) const { return previous ? *previous : params_.initial_state; }

  SineDiffusionParams params_;
  std::vector<double> observations_;
  std::shared_ptr<const PoissonCoinConfig> config_;
};

}  // namespace brpf
