#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's samplers; randomness comes from std::mt19937_64.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace brpf::oracles {

struct McValue {
  double mean;
  double std_error;
};

/// E[exp(-int_0^length phi(W_s) ds)] for a Brownian bridge from `start` to
/// `end`: `paths` bridges on a grid of `steps` cells (random walk pinned by
/// the linear correction), trapezoid rule along each path.
McValue bridge_exp_integral(const std::function<double(double)>& phi, double start, double end, double length,
                            std::size_t paths, std::size_t steps, std::uint64_t seed);

/// Composite trapezoid rule.
double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t panels);

/// Composite Simpson rule (panels rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels);

/// Generic matrix exponential (Eigen's Pade scaling and squaring).
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

/// Van Loan: exp(A dt) and int_0^dt exp(A u) G exp(A u)^T du from one
/// block-matrix exponential.
struct VanLoan {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd covariance;
};
VanLoan van_loan(const Eigen::MatrixXd& a, const Eigen::MatrixXd& g, double dt);

/// int_r^s exp(-A t) h h^T exp(-A t)^T dt by Simpson's rule on expm.
Eigen::Matrix2d q_integral(const Eigen::Matrix2d& a, const Eigen::Vector2d& h, double r, double s,
                           std::size_t panels = 4000);

/// E[(n - 1) / (S - 1)] for S a sum of n geometric(rho) trial counts,
/// summed over the negative-binomial support until the tail is negligible.
double mvue_expectation(double rho, std::size_t n);

/// Log density of y_{1:T} for the linear Gaussian model built from the full
/// joint covariance (no recursion).
double gaussian_ssm_joint_log_likelihood(double a, double state_var, double obs_var, double init_var,
                                         double init_mean, std::span<const double> y);

double normal_cdf(double x);
double poisson_cdf(std::uint64_t k, double mean);
double geometric_cdf(std::uint64_t k, double p);

/// Chi-square survival function from the regularized incomplete gamma
/// (series / continued fraction), independent of Boost.
double chi_square_survival(double statistic, double dof);

}  // namespace brpf::oracles
