#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brpf {

enum class Errc {
  invalid_weights,
  empty_input,
  stopping_budget_exceeded,
  insufficient_draws,
  invalid_parameter,
  estimator_range_violation,
  invalid_time,
  config_bound_violation,
  capability_missing,
  degenerate_step,
  invalid_step,
};

std::string_view to_string(Errc code) noexcept;

/// Library exception. `draw` and `step` locate the failure inside a race or a
/// filter run when known; they are filled in as the error propagates upward.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> draw() const noexcept { return draw_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

  Error& with_draw(std::size_t j) {
    draw_ = j;
    return *this;
  }
  Error& with_step(std::size_t t) {
    step_ = t;
    return *this;
  }

 private:
  Errc code_;
  std::optional<std::size_t> draw_;
  std::optional<std::size_t> step_;
};

}  // namespace brpf
