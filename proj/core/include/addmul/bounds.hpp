#ifndef ADDMUL_BOUNDS_HPP
#define ADDMUL_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace addmul {

/// Smallest vector length n for which j*n additions are guaranteed to
/// suffice for one vector-scalar product over values bounded by k:
/// ceil(((j+1)/2) * k^(1/j) * log2(k)). Exact integer arithmetic when k is a
/// power of two; conservatively rounded up otherwise, so the bound is never
/// understated.
std::uint64_t hypothesis_threshold(std::uint32_t j, std::uint64_t k);

struct BoundReport {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::optional<std::uint32_t> min_j;
  std::uint64_t guaranteed_additions = 0;  // min_j * n, when min_j exists
  std::uint64_t fallback = 0;              // n * ceil(log2 k), always valid
};

/// Scan j = 1 .. ceil(log2 k) for the smallest j whose hypothesis n >=
/// hypothesis_threshold(j, k) holds. Beyond log2 k the binary-expansion
/// fallback is at least as good.
BoundReport min_j(std::uint64_t n, std::uint64_t k);

/// Numeric diagnostics for the individual bounding rules at a given j.
struct RuleBounds {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint32_t j = 0;
  std::uint64_t threshold = 0;       // hypothesis_threshold(j, k)
  double first_term = 0.0;           // ((j+1)/2) * k^(1/j) * log2 k, unrounded
  bool hypothesis_holds = false;
  std::uint64_t theorem_bound = 0;   // j * n, meaningful when hypothesis holds
  std::uint64_t rule1_overhead = 0;  // the +n accumulate term of rule 1
  std::vector<double> split_points;  // rule 2 split values k^((j-p)/j), p = 0..j-2
  std::uint64_t rule3_cap_aligned = 0;    // sqrt(k) list-length cap
  std::uint64_t rule3_cap_unaligned = 0;  // triangular-number cap
  std::uint64_t rule4_bound = 0;          // n * ceil(log2 k)
};

RuleBounds rule_bounds(std::uint64_t n, std::uint64_t k, std::uint32_t j);

/// Adversarial inputs where sort/dedup/difference makes little progress:
/// length-n vectors cycling through the family members that are <= k.
std::vector<std::uint64_t> fibonacci_vector(std::size_t n, std::uint64_t k);
std::vector<std::uint64_t> power_of_two_vector(std::size_t n, std::uint64_t k);

}  // namespace addmul

#endif
