#pragma once

#include <cstdint>
#include <random>

namespace leo {

// SplitMix64 finaliser; decorrelates (seed, stream) pairs before they seed
// a Mersenne twister.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

// Named streams so that e.g. adding satellites never perturbs user drops.
enum class Stream : std::uint64_t {
  kCells = 1,
  kUsers = 2,
  kSatellites = 3,
  kBackhaul = 4,
  kTerrestrialFading = 5,
  kKaFading = 6,
  kBaseline = 7,
};

inline Rng make_rng(std::uint64_t seed, Stream s) {
  return make_rng(seed, static_cast<std::uint64_t>(s));
}

}  // namespace leo
