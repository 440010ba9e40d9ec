#pragma once

#include <cstdint>
#include <random>

namespace hypervol {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent substreams from one seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

inline double normal(Rng& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(g);
}

inline double uniform(Rng& g) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  return d(g);
}

// FNV-1a over raw bytes; used to key Monte Carlo streams by geometric content.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hypervol
