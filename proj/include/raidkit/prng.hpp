#pragma once

// Counter-based SplitMix64.
//
// Draw i of seed s is the i-th output of the SplitMix64 sequence started at
// state s:
//   z = s + (i + 1) * 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z = z ^ (z >> 31)
// so any draw can be computed without the ones before it.
//
// Uniforms take the top 53 bits: u = ((z >> 11) + 1) * 2^-53, in (0, 1].
// Normal draw i is Box-Muller on uniforms 2i and 2i+1, cosine branch only:
//   g = sqrt(-2 ln u0) * cos(2 pi u1).

#include <cstdint>

namespace raidkit {

class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t bits(std::uint64_t counter) const noexcept;
  double uniform(std::uint64_t counter) const noexcept;
  double normal(std::uint64_t index) const noexcept;

 private:
  std::uint64_t seed_;
};

}  // namespace raidkit
