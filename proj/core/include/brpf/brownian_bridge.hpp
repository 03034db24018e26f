#pragma once

#include <span>
#include <vector>

#include "brpf/random_stream.hpp"

namespace brpf {

/// Brownian bridge pinned at `start` at time 0 and at `end` at time `length`.
struct BrownianBridge {
  double start;
  double end;
  double length;
};

/// Exact joint draw of the bridge at `times` (each in (0, length)). Values
/// are returned in the order of `times`; duplicates get identical values.
/// Throws Error(invalid_time) for a time outside (0, length) and
/// Error(invalid_parameter) for length <= 0.
std::vector<double> bridge_sample_at(const BrownianBridge& bridge, std::span<const double> times,
                                     RandomStream& stream);

/// Sequential sampler over increasing times: each call conditions on the
/// last sampled point and the pinned end point.
class BridgeWalker {
 public:
  explicit BridgeWalker(const BrownianBridge& bridge) noexcept
      : end_(bridge.end), length_(bridge.length), time_(0.0), value_(bridge.start) {}

  /// `t` must be >= the previous time and <= length.
  double advance(double t, RandomStream& stream) noexcept;

 private:
  double end_;
  double length_;
  double time_;
  double value_;
};

}  // namespace brpf
