#include "brpf/brownian_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brpf/error.hpp"

namespace brpf {

double BridgeWalker::advance(double t, RandomStream& stream) noexcept {
  const double remaining = length_ - time_;
  const double step = t - time_;
  if (step <= 0.0 || remaining <= 0.0) return value_;
  const double frac = step / remaining;
  const double mean = value_ + frac * (end_ - value_);
  const double var = step * (length_ - t) / remaining;
  value_ = var > 0.0 ? mean + std::sqrt(var) * stream.normal() : mean;
  time_ = t;
  return value_;
}

std::vector<double> bridge_sample_at(const BrownianBridge& bridge, std::span<const double> times,
                                     RandomStream& stream) {
  if (!(bridge.length > 0.0) || !std::isfinite(bridge.length)) {
    throw Error(Errc::invalid_parameter, "Brownian bridge length must be positive");
  }
  for (const double t : times) {
    if (!(t > 0.0 && t < bridge.length)) {
      throw Error(Errc::invalid_time, "Brownian bridge time outside the open interval (0, length)");
    }
  }
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  std::vector<double> values(times.size());
  BridgeWalker walker(bridge);
  for (const std::size_t i : order) values[i] = walker.advance(times[i], stream);
  return values;
}

}  // namespace brpf
