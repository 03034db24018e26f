#pragma once

#include <functional>
#include <string_view>
#include <utility>

#include "brpf/random_stream.hpp"

namespace brpf {

/**
 * A Bernoulli factory output: each flip returns 1 with a fixed (possibly
 * unknown) probability b. Flips drawn from independent streams are i.i.d.
 *
 * Coin implementations must not hold shared mutable state; the race flips
 * coins from several threads at once.
 */
class Coin {
 public:
  using FlipFn = std::function<bool(RandomStream&)>;

  Coin() = default;
  explicit Coin(FlipFn flip, std::string_view label = {})
      : flip_(std::move(flip)), label_(label) {}

  bool flip(RandomStream& stream) const { return flip_(stream); }
  explicit operator bool() const noexcept { return static_cast<bool>(flip_); }
  std::string_view label() const noexcept { return label_; }

  /// Coin with known success probability; test double and synthetic workload.
  static Coin with_probability(double b) {
    return Coin([b](RandomStream& s) { return s.uniform() < b; }, "fixed");
  }

 private:
  FlipFn flip_;
  std::string_view label_;
};

}  // namespace brpf
