#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lqg {

// Stateless keyed generator: every draw is a pure function of its key, so
// results do not depend on evaluation order or thread count.
namespace rng {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0,
                                 std::uint64_t d = 0) {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x13198a2e03707344ULL));
  h = mix64(h ^ (c + 0xa4093822299f31d0ULL));
  h = mix64(h ^ (d + 0x082efa98ec4e6c89ULL));
  return h;
}

/// Uniform in (0, 1), never exactly 0 or 1.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0, std::uint64_t d = 0) {
  return to_open_unit(hash_key(seed, a, b, c, d));
}

/// Uniform integer in [0, bound). Uses rejection to avoid modulo bias.
inline std::uint64_t uniform_below(std::uint64_t bound, std::uint64_t seed,
                                   std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
  const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t bits = hash_key(seed, a, b, c, attempt);
    if (bits < limit)
      return bits % bound;
  }
}

/// Standard normal via Box-Muller on two keyed uniforms.
inline double normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                     std::uint64_t c) {
  const std::uint64_t h = hash_key(seed, a, b, c);
  const double u1 = to_open_unit(h);
  const double u2 = to_open_unit(mix64(h ^ 0x5851f42d4c957f2dULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace rng
} // namespace lqg
