#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "brpf/coin_factories.hpp"
#include "brpf/random_stream.hpp"

namespace brpf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// dX = A X dt + h dB with A = [[0, 1], [0, theta]], h = [0, sigma]^T.
struct OUParams {
  double theta = -1.0;
  double sigma = 1.0;

  /// Throws Error(invalid_parameter) unless theta < 0 and sigma > 0.
  void validate() const;
};

/// exp(A dt) = [[1, (e^{theta dt} - 1) / theta], [0, e^{theta dt}]].
Mat2 ou_drift_exponential(double theta, double dt);

/// Q(r, s) = int_r^s exp(-A t) h h^T exp(-A t)^T dt in closed form.
Mat2 ou_q_matrix(const OUParams& params, double r, double s);

/// Covariance of X_{r + dt} given X_r, evaluated without cancellation for
/// small theta * dt. Equals exp(A s) Q(r, s) exp(A s)^T.
Mat2 ou_transition_covariance(const OUParams& params, double dt);

struct GaussianTransition {
  Vec2 mean;
  Mat2 covariance;
};

/// Exact law of X_s given X_r = x. Throws Error(invalid_time) when s <= r.
GaussianTransition ou_transition(const Vec2& x, double r, double s, const OUParams& params);

/// Draw from N(mean, covariance); a covariance that is only PSD up to
/// rounding is clamped.
Vec2 sample_gaussian(const Vec2& mean, const Mat2& covariance, RandomStream& stream);

/// Law of X_t given X_left at t_left and X_right at t_right, t_left < t < t_right.
GaussianTransition ou_bridge_conditional(const Vec2& left, double t_left, const Vec2& right, double t_right,
                                         double t, const OUParams& params);

/// OU path pinned at a set of knots. Values between knots are drawn from
/// the exact bridge, sequentially over the requested times.
class OuSkeletonPath final : public LatentPath {
 public:
  struct Knot {
    double time;
    Vec2 state;
  };

  /// Knots must be sorted by time with at least two distinct times; repeated
  /// times keep the first knot.
  OuSkeletonPath(OUParams params, std::vector<Knot> knots);

  double start_time() const override { return knots_.front().time; }
  double end_time() const override { return knots_.back().time; }
  void sample_at(std::span<const double> sorted_times, std::span<double> out,
                 RandomStream& stream) const override;

  /// X_1 at an exact knot time.
  std::optional<double> pinned_value(double t) const override;

  std::span<const Knot> knots() const noexcept { return knots_; }
  /// State at an exact knot time, if any.
  std::optional<Vec2> knot_state(double time) const;

 private:
  OUParams params_;
  std::vector<Knot> knots_;
};

}  // namespace brpf
