#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brpf/random_stream.hpp"

namespace brpf {

/**
 * Walker alias table for constant-time categorical draws.
 *
 * Built with Vose's two-worklist construction in O(N). Zero weights are
 * allowed and receive zero mass; the table is immutable once built and may
 * be shared across threads.
 */
class AliasTable {
 public:
  /// Throws Error(invalid_weights) on empty input, negative or non-finite
  /// entries, or an all-zero vector.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return probabilities_.size(); }
  double total_weight() const noexcept { return total_weight_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  std::span<const std::uint32_t> aliases() const noexcept { return aliases_; }

  /// One uniform cell index plus one uniform threshold.
  std::size_t draw(RandomStream& stream) const noexcept {
    const auto cell = static_cast<std::size_t>(stream.uniform_index(probabilities_.size()));
    return stream.uniform() < probabilities_[cell] ? cell : aliases_[cell];
  }

  /// Normalized mass the table assigns to each index.
  std::vector<double> reconstructed_masses() const;

 private:
  std::vector<double> probabilities_;
  std::vector<std::uint32_t> aliases_;
  double total_weight_ = 0.0;
};

}  // namespace brpf
