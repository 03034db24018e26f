#include "brpf/models/ou_process.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "brpf/error.hpp"

namespace brpf {

namespace {

constexpr double kSeriesThreshold = 1.0;
constexpr int kSeriesTerms = 40;

// sum_{k>=3} (2^{k-1} - 2) z^{k-3} / k!
double cov11_series(double z) {
  double sum = 0.0, z_power = 1.0, factorial = 6.0, two_power = 4.0;
  for (int k = 3; k < kSeriesTerms; ++k) {
    sum += (two_power - 2.0) * z_power / factorial;
    z_power *= z;
    factorial *= k + 1;
    two_power *= 2.0;
  }
  return sum;
}

// sum_{k>=2} (2^{k-1} - 1) z^{k-2} / k!
double cov12_series(double z) {
  double sum = 0.0, z_power = 1.0, factorial = 2.0, two_power = 2.0;
  for (int k = 2; k < kSeriesTerms; ++k) {
    sum += (two_power - 1.0) * z_power / factorial;
    z_power *= z;
    factorial *= k + 1;
    two_power *= 2.0;
  }
  return sum;
}

}  // namespace

void OUParams::validate() const {
  if (!(theta < 0.0)) throw Error(Errc::invalid_parameter, "OU: theta must be negative");
  if (!(sigma > 0.0)) throw Error(Errc::invalid_parameter, "OU: sigma must be positive");
}

Mat2 ou_drift_exponential(double theta, double dt) {
  const double z = theta * dt;
  Mat2 m;
  m << 1.0, z == 0.0 ? dt : std::expm1(z) / theta, 0.0, std::exp(z);
  return m;
}

Mat2 ou_q_matrix(const OUParams& p, double r, double s) {
  const double th = p.theta;
  const double s2 = p.sigma * p.sigma;
  const double e1r = std::exp(-th * r), e1s = std::exp(-th * s);
  const double e2r = std::exp(-2.0 * th * r), e2s = std::exp(-2.0 * th * s);
  const double q11 = s2 / (2.0 * th * th * th) * (-2.0 * th * r + e2r - 4.0 * e1r - e2s + 4.0 * e1s + 2.0 * th * s);
  const double q12 = s2 / (2.0 * th * th) * (e2r - e2s) - s2 / (th * th) * (e1r - e1s);
  const double q22 = s2 / (2.0 * th) * (e2r - e2s);
  Mat2 q;
  q << q11, q12, q12, q22;
  return q;
}

Mat2 ou_transition_covariance(const OUParams& p, double dt) {
  const double th = p.theta;
  const double s2 = p.sigma * p.sigma;
  const double z = th * dt;
  double c11, c12, c22;
  if (std::abs(z) < kSeriesThreshold) {
    c11 = s2 * dt * dt * dt * cov11_series(z);
    c12 = s2 * dt * dt * cov12_series(z);
  } else {
    const double a = std::expm1(2.0 * z) / (2.0 * th);
    const double b = std::expm1(z) / th;
    c11 = s2 / (th * th) * (a - 2.0 * b + dt);
    c12 = s2 / th * (a - b);
  }
  c22 = z == 0.0 ? s2 * dt : s2 * dt * std::expm1(2.0 * z) / (2.0 * z);
  Mat2 c;
  c << c11, c12, c12, c22;
  return c;
}

GaussianTransition ou_transition(const Vec2& x, double r, double s, const OUParams& params) {
  if (!(s > r)) throw Error(Errc::invalid_time, "OU transition requires s > r");
  const double dt = s - r;
  return {ou_drift_exponential(params.theta, dt) * x, ou_transition_covariance(params, dt)};
}

Vec2 sample_gaussian(const Vec2& mean, const Mat2& cov, RandomStream& stream) {
  const double l11 = std::sqrt(std::max(cov(0, 0), 0.0));
  const double l21 = l11 > 0.0 ? cov(1, 0) / l11 : 0.0;
  const double l22 = std::sqrt(std::max(cov(1, 1) - l21 * l21, 0.0));
  const double z1 = stream.normal();
  const double z2 = stream.normal();
  return {mean(0) + l11 * z1, mean(1) + l21 * z1 + l22 * z2};
}

GaussianTransition ou_bridge_conditional(const Vec2& left, double t_left, const Vec2& right, double t_right,
                                         double t, const OUParams& params) {
  if (!(t_left < t && t < t_right)) throw Error(Errc::invalid_time, "OU bridge time outside (t_left, t_right)");
  const GaussianTransition prior = ou_transition(left, t_left, t, params);
  const Mat2 forward = ou_drift_exponential(params.theta, t_right - t);
  const Mat2 innovation = forward * prior.covariance * forward.transpose() +
                          ou_transition_covariance(params, t_right - t);
  const Mat2 gain = prior.covariance * forward.transpose() * innovation.inverse();
  GaussianTransition out;
  out.mean = prior.mean + gain * (right - forward * prior.mean);
  const Mat2 cov = prior.covariance - gain * innovation * gain.transpose();
  out.covariance = 0.5 * (cov + cov.transpose());
  return out;
}

OuSkeletonPath::OuSkeletonPath(OUParams params, std::vector<Knot> knots) : params_(params) {
  params_.validate();
  for (Knot& k : knots) {
    if (!knots_.empty() && k.time < knots_.back().time) {
      throw Error(Errc::invalid_time, "OU skeleton knots must be sorted by time");
    }
    if (knots_.empty() || k.time > knots_.back().time) knots_.push_back(std::move(k));
  }
  if (knots_.size() < 2) throw Error(Errc::invalid_time, "OU skeleton needs two distinct knot times");
}

std::optional<Vec2> OuSkeletonPath::knot_state(double time) const {
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), time,
                                   [](const Knot& k, double t) { return k.time < t; });
  if (it == knots_.end() || it->time != time) return std::nullopt;
  return it->state;
}

std::optional<double> OuSkeletonPath::pinned_value(double t) const {
  const auto state = knot_state(t);
  if (!state) return std::nullopt;
  return (*state)(0);
}

void OuSkeletonPath::sample_at(std::span<const double> sorted_times, std::span<double> out,
                               RandomStream& stream) const {
  std::size_t next = 1;
  double left_time = knots_[0].time;
  Vec2 left = knots_[0].state;
  for (std::size_t i = 0; i < sorted_times.size(); ++i) {
    const double t = sorted_times[i];
    if (t < start_time() || t > end_time() || t < left_time) {
      throw Error(Errc::invalid_time, "OU skeleton sample times must be sorted inside the path interval");
    }
    while (next < knots_.size() && knots_[next].time <= t) {
      left_time = knots_[next].time;
      left = knots_[next].state;
      ++next;
    }
    if (t > left_time) {
      const GaussianTransition law =
          ou_bridge_conditional(left, left_time, knots_[next].state, knots_[next].time, t, params_);
      left = sample_gaussian(law.mean, law.covariance, stream);
      left_time = t;
    }
    out[i] = left(0);
  }
}

}  // namespace brpf
