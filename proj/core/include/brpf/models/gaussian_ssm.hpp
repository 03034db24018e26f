#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "brpf/models/dataset.hpp"
#include "brpf/random_stream.hpp"
#include "brpf/state_space_model.hpp"

namespace brpf {

/// X_1 ~ N(init_mean, init_var), X_t = a X_{t-1} + V_t, Y_t = X_t + W_t,
/// V_t ~ N(0, state_var), W_t ~ N(0, obs_var).
struct GaussianSSMParams {
  double a = 0.8;
  double state_var = 5.0;
  double obs_var = 5.0;
  double init_var = 5.0;
  double init_mean = 0.0;

  /// Throws Error(invalid_parameter) unless all variances are positive.
  void validate() const;
};

/// Draws X_{1:T}, Y_{1:T}. Zero variances are allowed here (deterministic
/// smoke datasets).
Dataset simulate_gaussian_dataset(const GaussianSSMParams& params, std::size_t steps, RandomStream& stream);

/// p(y | x_prev) = N(y; a x_prev, state_var + obs_var), or the initial-law
/// analogue when `previous` is empty.
double gaussian_predictive_density(const GaussianSSMParams& params, std::optional<double> previous, double y);

/// Exact draw from q*(x | x_prev, y) proportional to g(y | x) f(x | x_prev) by
/// rejection: propose from the state equation, accept with probability
/// exp(-(y - xi)^2 / (2 obs_var)). Throws Error(stopping_budget_exceeded)
/// after `budget` rejections.
double gaussian_locally_optimal_proposal(const GaussianSSMParams& params, std::optional<double> previous,
                                         double y, RandomStream& stream,
                                         std::uint64_t budget = 1'000'000);

/// c = 1 / sqrt(2 pi obs_var) and the coin 1{U < exp(-(y - xi)^2 / (2 obs_var))},
/// xi ~ f(. | x_prev), so that c * P(coin) = p(y | x_prev).
FactorPair gaussian_weight_coin(const GaussianSSMParams& params, std::optional<double> previous, double y);

/// Linear Gaussian model with the locally optimal proposal. Supports all
/// three strategies; the RWPF weight averages `rwpf_replicates` draws of
/// g(y | xi), xi ~ f(. | x_prev).
class GaussianSSM final : public StateSpaceModel<double> {
 public:
  GaussianSSM(GaussianSSMParams params, std::vector<double> observations, std::size_t rwpf_replicates = 1,
              std::uint64_t rejection_budget = 1'000'000);

  const GaussianSSMParams& params() const noexcept { return params_; }
  std::span<const double> observations() const noexcept { return observations_; }

  std::size_t num_steps() const override { return observations_.size(); }
  Capabilities capabilities() const override { return {true, true, true}; }
  double propose(std::size_t t, const double* previous, RandomStream& stream) const override;
  double exact_weight(std::size_t t, const double* previous, const double& proposed) const override;
  double weight_estimate(std::size_t t, const double* previous, const double& proposed,
                         RandomStream& stream) const override;
  FactorPair factorization(std::size_t t, const double* previous, const double& proposed) const override;

 private:
  GaussianSSMParams params_;
  std::vector<double> observations_;
  std::size_t rwpf_replicates_;
  std::uint64_t rejection_budget_;
};

}  // namespace brpf
