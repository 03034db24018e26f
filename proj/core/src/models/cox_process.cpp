#include "brpf/models/cox_process.hpp"

#include <algorithm>
#include <cmath>

#include "brpf/coin_factories.hpp"
#include "brpf/error.hpp"

namespace brpf {

void OUCoxParams::validate() const {
  ou.validate();
  if (!(lambda_max > 0.0)) throw Error(Errc::invalid_parameter, "Cox: lambda_max must be positive");
  if (!(horizon > 0.0)) throw Error(Errc::invalid_parameter, "Cox: horizon must be positive");
  if (intervals == 0) throw Error(Errc::invalid_parameter, "Cox: need at least one interval");
  if (!(x1_init_var >= 0.0)) throw Error(Errc::invalid_parameter, "Cox: x1_init_var must be non-negative");
}

double reference_intensity(double s) noexcept {
  const double u = (s - 25.0) / 10.0;
  return 2.0 * std::exp(-s / 15.0) + std::exp(-u * u);
}

std::vector<double> simulate_poisson_process(const std::function<double(double)>& intensity, double bound,
                                             double t0, double t1, RandomStream& stream) {
  if (!(bound > 0.0) || !(t1 > t0)) throw Error(Errc::invalid_parameter, "Poisson process: bad bound or interval");
  const std::uint64_t k = stream.poisson(bound * (t1 - t0));
  std::vector<double> candidates(k);
  for (double& s : candidates) s = t0 + (t1 - t0) * stream.uniform();
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> accepted;
  for (const double s : candidates) {
    const double lambda = intensity(s);
    if (lambda > bound) throw Error(Errc::config_bound_violation, "Poisson process: intensity exceeds the bound");
    if (stream.uniform() * bound < lambda) accepted.push_back(s);
  }
  return accepted;
}

FactorPair cox_step_factorization(std::shared_ptr<const LatentPath> path, std::span<const double> arrivals,
                                  double lambda_max) {
  double c = 1.0;
  for (const double s : arrivals) {
    if (s < path->start_time() || s > path->end_time()) {
      throw Error(Errc::invalid_time, "Cox: arrival outside the interval");
    }
    const auto x = path->pinned_value(s);
    if (!x) throw Error(Errc::invalid_time, "Cox: path is not pinned at an arrival time");
    c *= sigmoid_intensity(*x, lambda_max);
  }
  return {c, cox_thinning_coin(std::move(path), lambda_max)};
}

CoxProcessModel::CoxProcessModel(OUCoxParams params, std::vector<double> arrivals)
    : params_(params), interval_arrivals_(params.intervals) {
  params_.validate();
  std::sort(arrivals.begin(), arrivals.end());
  const double width = params_.interval_length();
  for (const double s : arrivals) {
    if (s < 0.0 || s > params_.horizon) throw Error(Errc::invalid_time, "Cox: arrival outside [0, horizon]");
    const auto t = std::min(static_cast<std::size_t>(s / width), params_.intervals - 1);
    interval_arrivals_[t].push_back(s);
  }
}

CoxState CoxProcessModel::propose(std::size_t t, const CoxState* previous, RandomStream& stream) const {
  const double t0 = interval_start(t);
  const double t1 = interval_end(t);
  Vec2 x;
  if (previous) {
    x = previous->x;
  } else {
    Mat2 init = Mat2::Zero();
    init(0, 0) = params_.x1_init_var;
    init(1, 1) = params_.ou.sigma * params_.ou.sigma / (2.0 * -params_.ou.theta);
    x = sample_gaussian(Vec2::Zero(), init, stream);
  }
  std::vector<OuSkeletonPath::Knot> knots{{t0, x}};
  double now = t0;
  auto advance_to = [&](double s) {
    if (s > now) {
      const GaussianTransition law = ou_transition(x, now, s, params_.ou);
      x = sample_gaussian(law.mean, law.covariance, stream);
      now = s;
    }
    knots.push_back({s, x});
  };
  for (const double s : interval_arrivals_[t]) advance_to(s);
  advance_to(t1);
  return {x, std::make_shared<const OuSkeletonPath>(params_.ou, std::move(knots))};
}

double CoxProcessModel::weight_estimate(std::size_t t, const CoxState* previous, const CoxState& proposed,
                                        RandomStream& stream) const {
  const FactorPair f = factorization(t, previous, proposed);
  return f.constant *
         thinning_weight_estimate(*proposed.path, params_.lambda_max, stream, params_.rwpf_replicates).value;
}

FactorPair CoxProcessModel::factorization(std::size_t t, const CoxState*, const CoxState& proposed) const {
  return cox_step_factorization(proposed.path, interval_arrivals_[t], params_.lambda_max);
}

double CoxProcessModel::project(const CoxState& state) const {
  return sigmoid_intensity(state.x(0), params_.lambda_max);
}

}  // namespace brpf
