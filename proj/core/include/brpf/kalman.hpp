#pragma once

#include <span>
#include <vector>

#include "brpf/models/gaussian_ssm.hpp"

namespace brpf {

struct KalmanResult {
  std::vector<double> filter_means;
  std::vector<double> filter_variances;
  std::vector<double> log_predictive;  // log p(y_t | y_{1:t-1})
  double log_likelihood = 0.0;         // log p(y_{1:T})
};

/// Scalar Kalman filter with the prediction-error decomposition of the
/// marginal likelihood. Throws Error(invalid_parameter) for non-positive
/// variances.
KalmanResult kalman_reference(const GaussianSSMParams& params, std::span<const double> observations);

}  // namespace brpf
