#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic randomness helpers. std::mt19937_64 has a fully specified
// output sequence; the distributions below are hand-rolled because the
// standard library distributions are implementation-defined.
namespace cognate::rng {

using Engine = std::mt19937_64;

inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t bounded(Engine& eng, std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % n;
}

// Box-Muller; draws two uniforms per call, returns one deviate.
inline double normal(Engine& eng, double mean = 0.0, double stddev = 1.0) {
  double u1 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586 * u2);
}

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(eng, i));
    std::swap(values[i - 1], values[j]);
  }
}

// splitmix64 step; derives independent sub-seeds from one root seed.
inline std::uint64_t derive(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace cognate::rng
