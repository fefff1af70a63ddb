#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace xmas {

/// splitmix64 finalizer; used to spread seeds before feeding mt19937_64.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over a name, for per-oracle substreams.
constexpr uint64_t hash_name(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr uint64_t substream_seed(uint64_t base, std::string_view name) {
  return mix64(base ^ hash_name(name));
}

/// Uniform draw in [0, n). Plain modulo on the raw engine output so results
/// do not depend on the standard library's distribution implementations.
inline uint64_t rand_below(std::mt19937_64& rng, uint64_t n) {
  return n ? rng() % n : 0;
}

/// Uniform draw in [0, 1), 53 bits.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace xmas
