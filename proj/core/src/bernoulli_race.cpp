#include "brpf/bernoulli_race.hpp"

#include <cmath>
#include <string>

#include "brpf/error.hpp"
#include "brpf/parallel.hpp"

namespace brpf {

void WeightFactorization::validate() const {
  if (constants.size() != coins.size()) {
    throw Error(Errc::invalid_weights, "factorization: constants and coins differ in length");
  }
  if (constants.empty()) throw Error(Errc::invalid_weights, "factorization: empty");
  bool any_positive = false;
  for (std::size_t i = 0; i < constants.size(); ++i) {
    if (!std::isfinite(constants[i]) || constants[i] < 0.0) {
      throw Error(Errc::invalid_weights,
                  "factorization: constant " + std::to_string(i) + " is negative or not finite");
    }
    if (!coins[i]) throw Error(Errc::invalid_weights, "factorization: coin " + std::to_string(i) + " is empty");
    any_positive = any_positive || constants[i] > 0.0;
  }
  if (!any_positive) throw Error(Errc::invalid_weights, "factorization: all constants are zero");
}

RaceDraw race_once(const WeightFactorization& factorization, const AliasTable& table,
                   RandomStream& stream, std::uint64_t flip_budget) {
  for (std::uint64_t trial = 1; trial <= flip_budget; ++trial) {
    const std::size_t i = table.draw(stream);
    if (factorization.coins[i].flip(stream)) return {i, trial};
  }
  throw Error(Errc::stopping_budget_exceeded,
              "Bernoulli race: no success within " + std::to_string(flip_budget) + " flips");
}

RaceOutcome race_resample(const WeightFactorization& factorization, std::size_t draw_count,
                          const RandomStream& stream, const RaceOptions& options) {
  factorization.validate();
  if (draw_count == 0) throw Error(Errc::invalid_parameter, "race_resample: draw_count must be >= 1");
  const AliasTable table(factorization.constants);

  RaceOutcome outcome;
  outcome.indices.resize(draw_count);
  outcome.trials.counts.resize(draw_count);
  parallel_for(draw_count, options.workers, [&](std::size_t j) {
    RandomStream draw_stream = stream.substream(j);
    try {
      const RaceDraw d = race_once(factorization, table, draw_stream, options.flip_budget);
      outcome.indices[j] = d.index;
      outcome.trials.counts[j] = d.trials;
    } catch (Error& e) {
      if (e.code() == Errc::stopping_budget_exceeded) e.with_draw(j);
      throw;
    }
  });
  outcome.total_flips = outcome.trials.total();
  return outcome;
}

double naive_rho(const TrialCounter& trials) {
  if (trials.size() == 0) throw Error(Errc::empty_input, "naive_rho: no trials");
  return static_cast<double>(trials.size()) / static_cast<double>(trials.total());
}

RhoEstimate estimate_rho(const TrialCounter& trials) {
  const std::size_t n = trials.size();
  if (n < 2) {
    throw Error(Errc::insufficient_draws, "estimate_rho: the unbiased estimator needs at least two draws");
  }
  const std::uint64_t sum = trials.total();
  return {static_cast<double>(n) / static_cast<double>(sum),
          static_cast<double>(n - 1) / static_cast<double>(sum - 1), n};
}

CltReport clt_diagnostics(std::size_t replicates, std::size_t draws, double rho,
                          const RandomStream& stream) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(Errc::invalid_parameter, "clt_diagnostics: rho must lie in (0, 1)");
  if (draws < 2) throw Error(Errc::invalid_parameter, "clt_diagnostics: N must be >= 2");
  if (replicates < 2) throw Error(Errc::invalid_parameter, "clt_diagnostics: need >= 2 replicates");

  const double root_n = std::sqrt(static_cast<double>(draws));
  double mean_a = 0.0, m2_a = 0.0, mean_b = 0.0, m2_b = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    RandomStream s = stream.substream(r);
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < draws; ++j) sum += s.geometric(rho);
    const double a = root_n * (static_cast<double>(sum) / static_cast<double>(draws) - 1.0 / rho);
    const double b =
        root_n * (static_cast<double>(draws - 1) / static_cast<double>(sum - 1) - rho);
    const double k = static_cast<double>(r + 1);
    const double da = a - mean_a;
    mean_a += da / k;
    m2_a += da * (a - mean_a);
    const double db = b - mean_b;
    mean_b += db / k;
    m2_b += db * (b - mean_b);
  }
  const double denom = static_cast<double>(replicates - 1);
  return {m2_a / denom, (1.0 - rho) / (rho * rho), m2_b / denom, (1.0 - rho) * rho * rho,
          replicates, draws};
}

}  // namespace brpf
