#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace ptl {

// Every rollout owns one Stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, and the two draws below are defined here
// rather than through <random> distributions (those are implementation
// defined), so traces are bitwise reproducible across toolchains.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Stream::below: empty range");
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed of run `run_index` within a batch started from `base_seed`.
constexpr std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  return base_seed ^ run_index;
}

}  // namespace ptl
