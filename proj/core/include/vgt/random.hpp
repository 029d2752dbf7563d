#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vgt {

// Single engine type used everywhere so runs are reproducible from a seed.
using Rng = std::mt19937_64;

// Uniform index in [0, n). n must be positive.
inline int uniform_index(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<size_t>(uniform_index(rng, static_cast<int>(items.size())))];
}

// SplitMix64 finalizer; derives independent stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

}  // namespace vgt
