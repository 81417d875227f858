#pragma once

#include <cstdint>
#include <random>

namespace hcd {

/// All sampling in the library draws from std::mt19937_64. Independent
/// streams are obtained by seeding a fresh engine with derive_seed(base,
/// stream), so a stream's draws never depend on how many other streams exist
/// or in which order they run.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer applied to base + golden-ratio * (stream + 1).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) { return Rng(derive_seed(base, stream)); }

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hcd
