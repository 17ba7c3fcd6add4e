#pragma once

#include <cstdint>
#include <random>

namespace probsum {

/// splitmix64 finalizer; used as a stateless 64-bit mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Splittable per-trial seed: a pure function of (master seed, grid index,
/// trial index, stream), so trials are reproducible independently of
/// execution order. `stream` separates independent uses inside one trial
/// (0 = data generation, 1 = stochastic rounding).
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t n_index,
                                std::uint64_t trial_index, std::uint64_t stream = 0) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(n_index));
  h = mix64(h ^ mix64(trial_index));
  h = mix64(h ^ mix64(stream));
  return h;
}

/// One uniform binary64 variate in [0, 1) built from the top 53 bits of the
/// engine output. Identical across platforms for a given engine state.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace probsum
