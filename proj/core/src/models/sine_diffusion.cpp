#include "brpf/models/sine_diffusion.hpp"

#include <cmath>
#include <numbers>

#include "brpf/error.hpp"
#include "brpf/stats.hpp"

namespace brpf {

double sine_phi(double x) noexcept {
  const double s = std::sin(x);
  return 0.5 * (s * s + std::cos(x));
}

std::vector<double> SineDiffusionParams::unit_grid(double horizon, std::size_t count) {
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i) {
    times[i] = horizon * static_cast<double>(i + 1) / static_cast<double>(count);
  }
  return times;
}

void SineDiffusionParams::validate() const {
  if (!(obs_sd > 0.0)) throw Error(Errc::invalid_parameter, "sine diffusion: obs_sd must be positive");
  if (!(truth_euler_step > 0.0)) {
    throw Error(Errc::invalid_parameter, "sine diffusion: truth_euler_step must be positive");
  }
  if (observation_times.empty()) {
    throw Error(Errc::invalid_parameter, "sine diffusion: no observation times");
  }
  double last = 0.0;
  for (const double t : observation_times) {
    if (!(t > last) || t > horizon) {
      throw Error(Errc::invalid_parameter,
                  "sine diffusion: observation times must increase within (0, horizon]");
    }
    last = t;
  }
  sine_coin_config(coin_shift, coin_rate);
}

double SineDiffusionParams::step_length(std::size_t t) const {
  return t == 0 ? observation_times[0] : observation_times[t] - observation_times[t - 1];
}

std::shared_ptr<const PoissonCoinConfig> sine_coin_config(double shift, double rate) {
  auto config = std::make_shared<PoissonCoinConfig>();
  config->rate = rate;
  config->shift = shift;
  config->phi = sine_phi;
  config->phi_min = kSinePhiMin;
  config->phi_max = kSinePhiMax;
  config->validate();
  return config;
}

double sine_log_constant(double x_prev, double x_prop, double y, double dt, double obs_sd,
                         const PoissonCoinConfig& config) {
  const double d = x_prop - x_prev;
  const double s = std::sin(x_prev);
  // log phi(x; x_prev, dt) - log phi(x; x_prev + dt sin x_prev, dt), simplified
  // so that it stays finite as dt -> 0.
  const double proposal_correction = -d * s + 0.5 * dt * s * s;
  return stats::normal_log_pdf(y, x_prop, obs_sd * obs_sd) + proposal_correction - std::cos(x_prop) +
         std::cos(x_prev) - (config.shift - config.rate) * dt;
}

FactorPair sine_factorization(double x_prev, double x_prop, double y, double dt, double obs_sd,
                              std::shared_ptr<const PoissonCoinConfig> config) {
  const double c = std::exp(sine_log_constant(x_prev, x_prop, y, dt, obs_sd, *config));
  return {c, pgf_coin(BrownianBridge{x_prev, x_prop, dt}, std::move(config))};
}

double sine_euler_proposal(double x_prev, double dt, RandomStream& stream) {
  return x_prev + dt * std::sin(x_prev) + std::sqrt(dt) * stream.normal();
}

Dataset simulate_sine_dataset(const SineDiffusionParams& params, RandomStream& stream) {
  params.validate();
  Dataset d;
  double x = params.initial_state;
  double now = 0.0;
  const double h = params.truth_euler_step;
  for (const double target : params.observation_times) {
    const auto substeps = static_cast<std::size_t>(std::ceil((target - now) / h - 1e-9));
    const double step = (target - now) / static_cast<double>(substeps);
    const double root_step = std::sqrt(step);
    for (std::size_t k = 0; k < substeps; ++k) x += step * std::sin(x) + root_step * stream.normal();
    now = target;
    d.latent.push_back(x);
    d.observations.push_back(stream.normal(x, params.obs_sd));
  }
  return d;
}

SineDiffusionModel::SineDiffusionModel(SineDiffusionParams params, std::vector<double> observations)
    : params_(std::move(params)), observations_(std::move(observations)) {
  params_.validate();
  if (observations_.size() > params_.observation_times.size()) {
    throw Error(Errc::invalid_parameter, "sine diffusion: more observations than observation times");
  }
  config_ = sine_coin_config(params_.coin_shift, params_.coin_rate);
}

double SineDiffusionModel::propose(std::size_t t, const double* previous, RandomStream& stream) const {
  return sine_euler_proposal(previous_state(previous), params_.step_length(t), stream);
}

double SineDiffusionModel::weight_estimate(std::size_t t, const double* previous, const double& proposed,
                                           RandomStream& stream) const {
  const double x_prev = previous_state(previous);
  const double dt = params_.step_length(t);
  const double log_c = sine_log_constant(x_prev, proposed, observations_[t], dt, params_.obs_sd, *config_);
  // The Poisson estimator already carries exp((rate - shift) dt); undo the
  // matching factor folded into c.
  const WeightEstimate e = poisson_weight_estimate(BrownianBridge{x_prev, proposed, dt}, *config_, stream,
                                                   params_.rwpf_replicates);
  return std::exp(log_c + (config_->shift - config_->rate) * dt) * e.value;
}

FactorPair SineDiffusionModel::factorization(std::size_t t, const double* previous,
                                             const double& proposed) const {
  return sine_factorization(previous_state(previous), proposed, observations_[t], params_.step_length(t),
                            params_.obs_sd, config_);
}

}  // namespace brpf
