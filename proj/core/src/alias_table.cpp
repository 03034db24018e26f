#include "brpf/alias_table.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "brpf/error.hpp"

namespace brpf {

namespace {
constexpr double kTolerance = 1e-12;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw Error(Errc::invalid_weights, "alias table: empty weight vector");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::invalid_weights, "alias table: too many categories");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(Errc::invalid_weights,
                  "alias table: weight " + std::to_string(i) + " is negative or not finite");
    }
    total_weight_ += weights[i];
  }
  if (!(total_weight_ > 0.0) || !std::isfinite(total_weight_)) {
    throw Error(Errc::invalid_weights, "alias table: weights sum to zero or overflow");
  }

  probabilities_.resize(n);
  aliases_.resize(n);
  // Residuals are carried in extended precision: a heavy category can absorb
  // thousands of deficits, and double rounding there shows up as relative
  // mass error on the small categories it later becomes.
  std::vector<long double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(n);
  large.reserve(n);
  long double total = 0.0L;
  for (const double w : weights) total += w;
  const long double scale = static_cast<long double>(n) / total;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = static_cast<long double>(weights[i]) * scale;
    (scaled[i] < 1.0 - kTolerance ? small : large).push_back(static_cast<std::uint32_t>(i));
  }

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    probabilities_[s] = static_cast<double>(scaled[s]);
    aliases_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0L;
    if (scaled[l] < 1.0 - kTolerance) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Whatever remains carries mass 1 up to rounding.
  for (const std::uint32_t i : large) {
    probabilities_[i] = 1.0;
    aliases_[i] = i;
  }
  for (const std::uint32_t i : small) {
    probabilities_[i] = 1.0;
    aliases_[i] = i;
  }
}

std::vector<double> AliasTable::reconstructed_masses() const {
  const std::size_t n = size();
  std::vector<long double> mass(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] += probabilities_[i];
    if (aliases_[i] != i) mass[aliases_[i]] += 1.0L - probabilities_[i];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(mass[i] / static_cast<long double>(n));
  return out;
}

}  // namespace brpf
