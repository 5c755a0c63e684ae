#pragma once

#include <cstdint>

namespace minklog {

// Counter-based generator: every draw is a pure function of (seed, stream, index),
// so sample i is the same no matter how work is scheduled.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t index) const { return mix(key_ + mix(index + 0x9e3779b97f4a7c15ULL)); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const { return static_cast<double>(bits(index) >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1), for inverse-CDF transforms.
  double open_uniform(std::uint64_t index) const {
    return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

}  // namespace minklog
