#pragma once

#include <cstdint>

namespace s2r {

// Stateless counter-based generator: every value is a hash of (seed, indices),
// so results never depend on evaluation order, thread count or platform.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename... Counters>
constexpr std::uint64_t counter_hash(std::uint64_t seed, Counters... counters) noexcept {
  std::uint64_t h = splitmix64(seed);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(counters))), ...);
  return h;
}

/// Uniform in [0, 1) with 53 random bits; exact on every IEEE-754 platform.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

template <typename... Counters>
constexpr double counter_uniform(std::uint64_t seed, Counters... counters) noexcept {
  return to_unit(counter_hash(seed, counters...));
}

}  // namespace s2r
