#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hinmhp {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Mixes a base seed with stream coordinates (node, walk, fold, ...) so that
/// every unit of parallel work draws from its own schedule-independent stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (auto c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return h;
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace hinmhp
