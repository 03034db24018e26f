#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brpf/alias_table.hpp"
#include "brpf/bernoulli_race.hpp"
#include "brpf/error.hpp"
#include "brpf/functionals.hpp"
#include "brpf/likelihood.hpp"
#include "brpf/parallel.hpp"
#include "brpf/random_stream.hpp"
#include "brpf/state_space_model.hpp"

namespace brpf {

struct FilterOptions {
  std::size_t particles = 100;
  Strategy strategy = Strategy::brpf;
  unsigned workers = 1;
  std::uint64_t flip_budget = 10'000'000;
};

struct PhaseSeconds {
  double propose = 0.0;
  double weight = 0.0;
  double resample = 0.0;
};

struct StepDiagnostics {
  std::optional<RhoEstimate> rho;  // BRPF only
  std::uint64_t flips = 0;
  PhaseSeconds seconds;
};

struct FilterOutput {
  std::map<std::string, double> functionals;
  LikelihoodEstimate likelihood;
  std::vector<StepRecord> records;
  std::vector<StepDiagnostics> diagnostics;
  Genealogy genealogy;

  std::uint64_t total_flips() const noexcept {
    std::uint64_t total = 0;
    for (const auto& d : diagnostics) total += d.flips;
    return total;
  }
  PhaseSeconds total_seconds() const noexcept {
    PhaseSeconds s;
    for (const auto& d : diagnostics) {
      s.propose += d.seconds.propose;
      s.weight += d.seconds.weight;
      s.resample += d.seconds.resample;
    }
    return s;
  }
};

/// Substream keys inside one filter step.
enum class StepPhase : std::uint64_t { propose = 1, weight = 2, resample = 3 };

/// Multinomial resampling of `draw_count` indices on explicit weights via an
/// alias table. Throws Error(degenerate_step) if all weights are zero.
std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t draw_count,
                                              RandomStream& stream);

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/**
 * Particle filter with resampling at every step.
 *
 * Each step proposes N particles, weights them according to the strategy,
 * and draws N ancestors: EWPF and RWPF by multinomial sampling on the
 * (exact or estimated) weights, BRPF by Bernoulli races on the model's
 * factorizations. Every random quantity is drawn from a substream keyed by
 * (step, phase, particle or draw), so the output does not depend on
 * `options.workers`.
 *
 * Errors: capability_missing if the model lacks what the strategy needs,
 * degenerate_step when all weights (or constants) vanish, and
 * stopping_budget_exceeded from the race; all carry the step index.
 */
template <class State>
FilterOutput run_filter(const StateSpaceModel<State>& model, const FilterOptions& options,
                        const RandomStream& stream,
                        std::span<const TestFunction> functions = standard_test_functions()) {
  const std::size_t n = options.particles;
  const std::size_t steps = model.num_steps();
  if (n < 2) throw Error(Errc::invalid_parameter, "particle filter needs at least two particles");
  if (steps == 0) throw Error(Errc::invalid_parameter, "particle filter needs at least one observation");
  if (!model.capabilities().supports(options.strategy)) {
    throw Error(Errc::capability_missing,
                "model does not support strategy " + std::string(to_string(options.strategy)));
  }

  FilterOutput out;
  out.records.reserve(steps);
  out.diagnostics.reserve(steps);

  std::vector<State> current(n);
  std::vector<State> proposed(n);
  std::vector<double> weights(n);
  WeightFactorization factorization;
  if (options.strategy == Strategy::brpf) {
    factorization.constants.resize(n);
    factorization.coins.resize(n);
  }

  for (std::size_t t = 0; t < steps; ++t) {
    const RandomStream step_stream = stream.substream(t);
    StepDiagnostics diag;
    StepRecord record;
    record.particles = n;
    try {
      auto clock = std::chrono::steady_clock::now();
      parallel_for(n, options.workers, [&](std::size_t i) {
        RandomStream s = step_stream.substream(static_cast<std::uint64_t>(StepPhase::propose), i);
        proposed[i] = model.propose(t, t == 0 ? nullptr : &current[i], s);
      });
      diag.seconds.propose = detail::seconds_since(clock);

      clock = std::chrono::steady_clock::now();
      parallel_for(n, options.workers, [&](std::size_t i) {
        const State* prev = t == 0 ? nullptr : &current[i];
        switch (options.strategy) {
          case Strategy::ewpf:
            weights[i] = model.exact_weight(t, prev, proposed[i]);
            break;
          case Strategy::rwpf: {
            RandomStream s = step_stream.substream(static_cast<std::uint64_t>(StepPhase::weight), i);
            weights[i] = model.weight_estimate(t, prev, proposed[i], s);
            break;
          }
          case Strategy::brpf: {
            FactorPair f = model.factorization(t, prev, proposed[i]);
            factorization.constants[i] = f.constant;
            factorization.coins[i] = std::move(f.coin);
            break;
          }
        }
      });
      diag.seconds.weight = detail::seconds_since(clock);

      clock = std::chrono::steady_clock::now();
      std::vector<std::size_t> ancestors;
      const RandomStream resample_stream =
          step_stream.substream(static_cast<std::uint64_t>(StepPhase::resample));
      if (options.strategy == Strategy::brpf) {
        double sum = 0.0;
        for (const double c : factorization.constants) {
          if (!std::isfinite(c) || c < 0.0) throw Error(Errc::invalid_weights, "invalid factorization constant");
          sum += c;
        }
        if (!(sum > 0.0)) throw Error(Errc::degenerate_step, "all factorization constants are zero");
        RaceOutcome race = race_resample(factorization, n, resample_stream, {options.workers, options.flip_budget});
        ancestors = std::move(race.indices);
        record.constant_sum = sum;
        record.total_flips = race.total_flips;
        record.trials = std::move(race.trials);
        diag.rho = estimate_rho(record.trials);
        diag.flips = record.total_flips;
      } else {
        double sum = 0.0;
        for (const double w : weights) {
          if (!std::isfinite(w) || w < 0.0) throw Error(Errc::invalid_weights, "invalid particle weight");
          sum += w;
        }
        if (!(sum > 0.0)) throw Error(Errc::degenerate_step, "all particle weights are zero");
        RandomStream s = resample_stream;
        ancestors = multinomial_resample(weights, n, s);
        record.weight_sum = sum;
      }
      diag.seconds.resample = detail::seconds_since(clock);

      std::vector<double> projected(n);
      for (std::size_t i = 0; i < n; ++i) projected[i] = model.project(proposed[i]);
      for (std::size_t i = 0; i < n; ++i) current[i] = proposed[ancestors[i]];
      out.genealogy.push_step(std::move(projected), std::move(ancestors));
    } catch (Error& e) {
      if (!e.step()) e.with_step(t);
      throw;
    }
    out.records.push_back(std::move(record));
    out.diagnostics.push_back(diag);
  }

  out.functionals = estimate_functionals(out.genealogy, functions);
  out.likelihood = estimate_likelihood(options.strategy, out.records);
  return out;
}

}  // namespace brpf
