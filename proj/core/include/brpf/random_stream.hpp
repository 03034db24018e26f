#pragma once

#include <cstdint>
#include <limits>

namespace brpf {

/// SplitMix64 output function. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of two 64-bit keys.
constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ (mix64(b + 0x9e3779b97f4a7c15ULL) + (a << 6) + (a >> 2)));
}

/**
 * Reproducible pseudo-random stream addressed by (seed, stream_id).
 *
 * The generator is xoshiro256** whose 256-bit state is filled by SplitMix64
 * from a hash of the address, so any substream can be created in O(1)
 * without touching a parent's state. Parallel workers that need to agree
 * with a sequential run derive their stream from the *work item* (draw
 * index, particle index) rather than from the worker.
 *
 * Satisfies UniformRandomBitGenerator. Not thread-safe: one owner at a time.
 */
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream keyed by `key`; independent of this stream's position.
  RandomStream substream(std::uint64_t key) const noexcept {
    return RandomStream(seed_, hash_combine(stream_id_, key));
  }
  template <class... Keys>
  RandomStream substream(std::uint64_t key, Keys... rest) const noexcept {
    return substream(key).substream(static_cast<std::uint64_t>(rest)...);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Uniform integer in [0, n), n >= 1 (Lemire's nearly-divisionless method).
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  double exponential() noexcept;
  std::uint64_t poisson(double mean) noexcept;
  /// Number of trials up to and including the first success; support {1, 2, ...}.
  std::uint64_t geometric(double p) noexcept;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace brpf
