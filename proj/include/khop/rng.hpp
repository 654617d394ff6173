#pragma once

#include <cstdint>

namespace khop::sim {

// SplitMix64. Small counter-based generator whose entire state is one
// 64-bit word, so any (seed, trial) pair maps to an independent stream and
// serial and parallel trial execution produce identical results. Hand-rolled
// because std::distribution engines are not bit-reproducible across standard
// libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// The documented stream derivation: trial t of run seed s draws from
// SplitMix64 seeded with mix64(s) xor mix64(golden * (t+1)). mix64 is a
// bijection, so distinct trials of one run never share a stream.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(mix64(seed) ^
                    mix64(0x9E3779B97F4A7C15ull * (trial + 1)));
}

}  // namespace khop::sim
