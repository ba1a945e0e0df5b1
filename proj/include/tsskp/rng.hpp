#pragma once

#include <cstdint>
#include <random>

namespace tsskp {

// Deterministic stream derivation. mt19937_64 itself is fully specified by
// the standard; the value mappings below avoid the implementation-defined
// std::uniform_*_distribution so that draws are identical everywhere.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One independent engine per (seed, category, index) triple.
inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t category,
                                     std::uint64_t index = 0) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0x6a09e667f3bcc908ULL + category;
  splitmix64(state);
  state ^= 0xbb67ae8584caa73bULL + index;
  return std::mt19937_64(splitmix64(state));
}

/// Uniform integer in [lo, hi] via the fixed-point multiply reduction.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t draw = rng();
  const std::uint64_t offset =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(draw) * span) >> 64);
  return lo + static_cast<std::int64_t>(offset);
}

/// Uniform double in [lo, hi) from the top 53 bits of one draw.
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

}  // namespace tsskp
