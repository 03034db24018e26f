#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>

#include "brpf/coin.hpp"
#include "brpf/error.hpp"
#include "brpf/random_stream.hpp"

namespace brpf {

/// Resampling strategy of the particle filter.
enum class Strategy {
  ewpf,  // multinomial on exact weights
  rwpf,  // multinomial on unbiased weight estimates
  brpf,  // Bernoulli race on (constant, coin) factorizations
};

std::string_view to_string(Strategy s) noexcept;
/// Accepts "EWPF", "RWPF", "BRPF" in any case. Throws Error(invalid_parameter).
Strategy parse_strategy(std::string_view name);

struct Capabilities {
  bool exact_weight = false;
  bool weight_estimate = false;
  bool factorization = false;

  bool supports(Strategy s) const noexcept {
    switch (s) {
      case Strategy::ewpf: return exact_weight;
      case Strategy::rwpf: return weight_estimate;
      case Strategy::brpf: return factorization;
    }
    return false;
  }
};

/// w = constant * P(coin = 1).
struct FactorPair {
  double constant;
  Coin coin;
};

/**
 * A state-space model together with its proposal and the weight
 * capabilities the three strategies need. Step indices are 0-based;
 * `previous` is null at the first step, where the proposal draws from the
 * initial law. Implementations are immutable and shared across threads.
 */
template <class State>
class StateSpaceModel {
 public:
  using state_type = State;

  virtual ~StateSpaceModel() = default;

  virtual std::size_t num_steps() const = 0;
  virtual Capabilities capabilities() const = 0;

  virtual State propose(std::size_t t, const State* previous, RandomStream& stream) const = 0;

  virtual double exact_weight(std::size_t /*t*/, const State* /*previous*/, const State& /*proposed*/) const {
    throw Error(Errc::capability_missing, "model has no exact weights");
  }
  virtual double weight_estimate(std::size_t /*t*/, const State* /*previous*/, const State& /*proposed*/,
                                 RandomStream& /*stream*/) const {
    throw Error(Errc::capability_missing, "model has no unbiased weight estimator");
  }
  virtual FactorPair factorization(std::size_t /*t*/, const State* /*previous*/,
                                   const State& /*proposed*/) const {
    throw Error(Errc::capability_missing, "model has no weight factorization");
  }

  /// Scalar summary of a state used by test functions and plot series.
  virtual double project(const State& state) const {
    if constexpr (std::is_arithmetic_v<State>) {
      return static_cast<double>(state);
    } else {
      throw Error(Errc::capability_missing, "model does not define a scalar projection");
    }
  }
};

}  // namespace brpf
