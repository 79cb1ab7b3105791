#pragma once

#include <cstdint>
#include <random>

namespace p3dc {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream used for task `task_index` of a run.
constexpr std::uint64_t task_seed(std::uint64_t run_seed, std::uint64_t task_index) {
  return splitmix64(run_seed ^ splitmix64(task_index));
}

/// Portable random stream.
///
/// The engine is std::mt19937_64, whose output sequence the standard fixes.
/// The standard distributions are implementation-defined, so every derived
/// draw below is spelled out here:
///   below(n)   rejection sampling: discard raw draws under 2^64 mod n, return r mod n
///   uniform()  top 53 bits scaled into [0, 1)
///   normal()   Box-Muller, cosine branch only, one normal per two uniforms
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace p3dc
