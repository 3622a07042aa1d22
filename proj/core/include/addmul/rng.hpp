#ifndef ADDMUL_RNG_HPP
#define ADDMUL_RNG_HPP

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace addmul {

/// splitmix64 by Sebastiano Vigna; used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Uniform draw from [0, bound) by masked rejection. Platform-independent,
/// unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t mask =
      bound <= 1 ? 0 : ~std::uint64_t{0} >> std::countl_zero(bound - 1);
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < bound) {
      return v;
    }
  }
}

/// n uniform values from [1, 2^bits - 1].
inline std::vector<std::uint64_t> draw_values(std::mt19937_64& rng,
                                              std::size_t n,
                                              std::uint32_t bits) {
  const std::uint64_t span = (std::uint64_t{1} << bits) - 1;
  std::vector<std::uint64_t> out(n);
  for (auto& v : out) {
    v = 1 + uniform_below(rng, span);
  }
  return out;
}

/// Deterministic generator for trial `index` of a run seeded with `seed`.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ull * index));
}

}  // namespace addmul

#endif
