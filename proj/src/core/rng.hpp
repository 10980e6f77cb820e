#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace bellsim {

// Counter-based pseudo-random stream: output i is mix64(key + i*gamma), the
// splitmix64 construction. Because each output depends only on (key, i),
// substreams derived per trial reproduce bit-identically no matter how work
// is partitioned across threads. Distribution code is hand-rolled on purpose:
// std::normal_distribution and friends are not specified bit-for-bit across
// standard libraries, and identical output bytes are part of this library's
// contract.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t key) : state_(key) {}

  // Independent stream for (seed, purpose, index). Purpose salts keep e.g.
  // the ensemble stream and the settings stream apart even when the user
  // passes the same numeric seed for both.
  static SeededStream derive(std::uint64_t seed, std::uint64_t purpose,
                             std::uint64_t index = 0) {
    return SeededStream(mix64(mix64(mix64(seed) ^ purpose) + index));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64_post(state_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_positive_unit() { return 1.0 - next_unit(); }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> next_normal_pair() {
    const double u1 = next_positive_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  // Exactly uniform integer in [0, bound); rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    return mix64_post(z);
  }
  static std::uint64_t mix64_post(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Purpose salts for substream derivation.
inline constexpr std::uint64_t kStreamEnsemble = 0xE5E3B1E5ull;
inline constexpr std::uint64_t kStreamSettings = 0x5E771265ull;
inline constexpr std::uint64_t kStreamChecks = 0xC4EC5ull;

}  // namespace bellsim
