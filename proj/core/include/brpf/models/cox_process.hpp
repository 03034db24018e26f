#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "brpf/models/ou_process.hpp"
#include "brpf/random_stream.hpp"
#include "brpf/state_space_model.hpp"

namespace brpf {

/// Cox process on [0, horizon] with intensity lambda_max * sigmoid(X_1) and
/// an integrated OU prior on X, filtered over `intervals` equal pieces.
struct OUCoxParams {
  OUParams ou;
  double lambda_max = 2.1;
  double horizon = 50.0;
  std::size_t intervals = 10;
  std::size_t particles = 30;
  double x1_init_var = 4.0;  // X_1 at time 0; X_2 starts stationary
  std::size_t rwpf_replicates = 1;

  /// Throws Error(invalid_parameter).
  void validate() const;
  double interval_length() const { return horizon / static_cast<double>(intervals); }
};

/// 2 exp(-s/15) + exp(-((s - 25)/10)^2).
double reference_intensity(double s) noexcept;

/// Inhomogeneous Poisson process on [t0, t1] by thinning a rate-`bound`
/// homogeneous process. Throws Error(config_bound_violation) if the
/// intensity exceeds `bound` at a candidate point.
std::vector<double> simulate_poisson_process(const std::function<double(double)>& intensity, double bound,
                                             double t0, double t1, RandomStream& stream);

/// Particle state: X at the interval end plus the pinned path over the
/// interval (arrival times and both endpoints).
struct CoxState {
  Vec2 x;
  std::shared_ptr<const OuSkeletonPath> path;
};

/// c = prod lambda(s_i) over the arrivals (values the path pins there)
/// and the thinning coin over the path. Throws Error(invalid_time) for an
/// arrival outside the path interval or not pinned by the path.
FactorPair cox_step_factorization(std::shared_ptr<const LatentPath> path, std::span<const double> arrivals,
                                  double lambda_max);

/// Cox process model with prior (bootstrap) proposals. Arrivals are
/// assigned to [t0, t1), the last interval being closed.
class CoxProcessModel final : public StateSpaceModel<CoxState> {
 public:
  CoxProcessModel(OUCoxParams params, std::vector<double> arrivals);

  const OUCoxParams& params() const noexcept { return params_; }
  std::span<const double> arrivals(std::size_t t) const { return interval_arrivals_.at(t); }
  double interval_start(std::size_t t) const { return static_cast<double>(t) * params_.interval_length(); }
  double interval_end(std::size_t t) const {
    return t + 1 == params_.intervals ? params_.horizon : static_cast<double>(t + 1) * params_.interval_length();
  }

  std::size_t num_steps() const override { return params_.intervals; }
  Capabilities capabilities() const override { return {false, true, true}; }
  CoxState propose(std::size_t t, const CoxState* previous, RandomStream& stream) const override;
  double weight_estimate(std::size_t t, const CoxState* previous, const CoxState& proposed,
                         RandomStream& stream) const override;
  FactorPair factorization(std::size_t t, const CoxState* previous, const CoxState& proposed) const override;
  /// Intensity at the interval end.
  double project(const CoxState& state) const override;

 private:
  OUCoxParams params_;
  std::vector<std::vector<double>> interval_arrivals_;
};

}  // namespace brpf
