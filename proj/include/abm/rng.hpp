#pragma once

#include <cstdint>
#include <random>

namespace abm {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One independent stream per run: master seed xor run index, mixed so that
// adjacent indices do not produce correlated engine states.
inline std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return splitmix64(master_seed ^ run_index);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace abm
