#include "brpf/kalman.hpp"

#include "brpf/stats.hpp"

namespace brpf {

KalmanResult kalman_reference(const GaussianSSMParams& params, std::span<const double> observations) {
  params.validate();
  KalmanResult out;
  const std::size_t T = observations.size();
  out.filter_means.reserve(T);
  out.filter_variances.reserve(T);
  out.log_predictive.reserve(T);

  double mean = 0.0, var = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double pred_mean, pred_var;
    if (t == 0) {
      pred_mean = params.init_mean;
      pred_var = params.init_var;
    } else {
      pred_mean = params.a * mean;
      pred_var = params.a * params.a * var + params.state_var;
    }
    const double innovation_var = pred_var + params.obs_var;
    const double lp = stats::normal_log_pdf(observations[t], pred_mean, innovation_var);
    out.log_predictive.push_back(lp);
    out.log_likelihood += lp;

    const double gain = pred_var / innovation_var;
    mean = pred_mean + gain * (observations[t] - pred_mean);
    var = (1.0 - gain) * pred_var;
    out.filter_means.push_back(mean);
    out.filter_variances.push_back(var);
  }
  return out;
}

}  // namespace brpf
