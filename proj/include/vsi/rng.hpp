#pragma once

// Counter-based deterministic random numbers.
//
// Generator: SplitMix64 (Steele, Lea & Flood) in addressed form — the i-th
// output of the stream with start state s0 is
//   z = s0 + (i+1) * 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// Every draw is a pure function of (seed, stream, counter), so sampling is
// reproducible across thread counts and across language ports. Sub-streams
// are derived per purpose (setpoints, gains, profiles, ...), and counters
// index individual draws within a stream.

#include <cstdint>

namespace vsi {

inline std::uint64_t splitmix64_at(std::uint64_t state0, std::uint64_t counter) {
  std::uint64_t z = state0 + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Addressable uniform source for one (seed, stream) pair.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64_at(seed, stream)) {}

  std::uint64_t word(std::uint64_t counter) const { return splitmix64_at(key_, counter); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01(std::uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform01(counter);
  }

 private:
  std::uint64_t key_;
};

// Stream ids used by the library. Fixed constants are part of the
// reproducibility contract.
inline constexpr std::uint64_t kStreamSetpoints = 1;
inline constexpr std::uint64_t kStreamGains = 2;
inline constexpr std::uint64_t kStreamWalkProfile = 3;
inline constexpr std::uint64_t kStreamCounterexample = 4;

}  // namespace vsi
