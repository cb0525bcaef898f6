#pragma once

// Counter-based uniform deviates for Monte Carlo integration. Sample i of a
// stream is a pure function of (seed, i), so a sequence can be evaluated in
// any order, from any thread, and still reproduce bit-identically.

#include <cstdint>

namespace smoothprime {

// splitmix64 output function applied to seed + (index + 1) * golden gamma.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix64_at(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace smoothprime
