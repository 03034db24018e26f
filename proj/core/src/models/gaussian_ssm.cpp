#include "brpf/models/gaussian_ssm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "brpf/error.hpp"
#include "brpf/stats.hpp"

namespace brpf {

namespace {

struct Prior {
  double mean;
  double sd;
};

Prior transition_prior(const GaussianSSMParams& p, std::optional<double> previous) {
  if (previous) return {p.a * *previous, std::sqrt(p.state_var)};
  return {p.init_mean, std::sqrt(p.init_var)};
}

std::optional<double> as_optional(const double* previous) {
  return previous ? std::optional<double>(*previous) : std::nullopt;
}

}  // namespace

void GaussianSSMParams::validate() const {
  if (!(state_var > 0.0 && obs_var > 0.0 && init_var > 0.0)) {
    throw Error(Errc::invalid_parameter, "Gaussian SSM variances must be positive");
  }
  if (!std::isfinite(a) || !std::isfinite(init_mean)) {
    throw Error(Errc::invalid_parameter, "Gaussian SSM coefficients must be finite");
  }
}

Dataset simulate_gaussian_dataset(const GaussianSSMParams& params, std::size_t steps, RandomStream& stream) {
  Dataset d;
  d.latent.reserve(steps);
  d.observations.reserve(steps);
  double x = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    x = t == 0 ? stream.normal(params.init_mean, std::sqrt(params.init_var))
               : stream.normal(params.a * x, std::sqrt(params.state_var));
    d.latent.push_back(x);
    d.observations.push_back(stream.normal(x, std::sqrt(params.obs_var)));
  }
  return d;
}

double gaussian_predictive_density(const GaussianSSMParams& params, std::optional<double> previous, double y) {
  const Prior prior = transition_prior(params, previous);
  return stats::normal_pdf(y, prior.mean, prior.sd * prior.sd + params.obs_var);
}

double gaussian_locally_optimal_proposal(const GaussianSSMParams& params, std::optional<double> previous,
                                         double y, RandomStream& stream, std::uint64_t budget) {
  const Prior prior = transition_prior(params, previous);
  const double inv_two_obs_var = 0.5 / params.obs_var;
  for (std::uint64_t k = 0; k < budget; ++k) {
    const double xi = stream.normal(prior.mean, prior.sd);
    const double d = y - xi;
    if (stream.uniform() < std::exp(-d * d * inv_two_obs_var)) return xi;
  }
  throw Error(Errc::stopping_budget_exceeded,
              "locally optimal proposal: no acceptance within " + std::to_string(budget) + " proposals");
}

FactorPair gaussian_weight_coin(const GaussianSSMParams& params, std::optional<double> previous, double y) {
  const Prior prior = transition_prior(params, previous);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi * params.obs_var);
  const double inv_two_obs_var = 0.5 / params.obs_var;
  Coin coin(
      [prior, y, inv_two_obs_var](RandomStream& s) {
        const double xi = s.normal(prior.mean, prior.sd);
        const double d = y - xi;
        return s.uniform() < std::exp(-d * d * inv_two_obs_var);
      },
      "gaussian-predictive");
  return {c, std::move(coin)};
}

GaussianSSM::GaussianSSM(GaussianSSMParams params, std::vector<double> observations,
                         std::size_t rwpf_replicates, std::uint64_t rejection_budget)
    : params_(params),
      observations_(std::move(observations)),
      rwpf_replicates_(std::max<std::size_t>(rwpf_replicates, 1)),
      rejection_budget_(rejection_budget) {
  params_.validate();
}

double GaussianSSM::propose(std::size_t t, const double* previous, RandomStream& stream) const {
  return gaussian_locally_optimal_proposal(params_, as_optional(previous), observations_[t], stream,
                                           rejection_budget_);
}

double GaussianSSM::exact_weight(std::size_t t, const double* previous, const double&) const {
  return gaussian_predictive_density(params_, as_optional(previous), observations_[t]);
}

double GaussianSSM::weight_estimate(std::size_t t, const double* previous, const double&,
                                    RandomStream& stream) const {
  const Prior prior = transition_prior(params_, as_optional(previous));
  double total = 0.0;
  for (std::size_t r = 0; r < rwpf_replicates_; ++r) {
    const double xi = stream.normal(prior.mean, prior.sd);
    total += stats::normal_pdf(observations_[t], xi, params_.obs_var);
  }
  return total / static_cast<double>(rwpf_replicates_);
}

FactorPair GaussianSSM::factorization(std::size_t t, const double* previous, const double&) const {
  return gaussian_weight_coin(params_, as_optional(previous), observations_[t]);
}

}  // namespace brpf
