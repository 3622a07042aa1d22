#include "addmul/bounds.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "addmul/chain.hpp"

namespace addmul {

using boost::multiprecision::cpp_int;

namespace {

std::uint32_t ceil_log2(std::uint64_t k) {
  return static_cast<std::uint32_t>(std::bit_width(k - 1));
}

double threshold_estimate(std::uint32_t j, std::uint64_t k) {
  const double lg = std::log2(static_cast<double>(k));
  return ((j + 1) / 2.0) * std::exp2(lg / j) * lg;
}

}  // namespace

std::uint64_t hypothesis_threshold(std::uint32_t j, std::uint64_t k) {
  if (j < 1 || k < 2) {
    throw std::invalid_argument("hypothesis_threshold: need j >= 1, k >= 2");
  }
  const double estimate = threshold_estimate(j, k);

  if (std::has_single_bit(k)) {
    // m >= ((j+1)*b/2) * k^(1/j)  <=>  (2m)^j >= ((j+1)*b)^j * k
    const std::uint64_t b = static_cast<std::uint64_t>(std::countr_zero(k));
    const cpp_int rhs = pow(cpp_int((j + 1) * b), j) * k;
    const auto ok = [&](std::uint64_t m) {
      return m > 0 && pow(cpp_int(2) * m, j) >= rhs;
    };
    auto m = static_cast<std::uint64_t>(std::llround(estimate));
    if (m == 0) {
      m = 1;
    }
    while (!ok(m)) ++m;
    while (m > 1 && ok(m - 1)) --m;
    return m;
  }
  // log2(k) is irrational here; round up so the bound is never understated.
  return static_cast<std::uint64_t>(std::ceil(estimate * (1.0 + 1e-12)));
}

BoundReport min_j(std::uint64_t n, std::uint64_t k) {
  if (n < 1 || k < 2) {
    throw std::invalid_argument("min_j: need n >= 1, k >= 2");
  }
  BoundReport report;
  report.n = n;
  report.k = k;
  report.fallback = n * ceil_log2(k);
  for (std::uint32_t j = 1; j <= ceil_log2(k); ++j) {
    if (n >= hypothesis_threshold(j, k)) {
      report.min_j = j;
      report.guaranteed_additions = static_cast<std::uint64_t>(j) * n;
      break;
    }
  }
  return report;
}

RuleBounds rule_bounds(std::uint64_t n, std::uint64_t k, std::uint32_t j) {
  if (n < 1 || k < 2 || j < 1) {
    throw std::invalid_argument("rule_bounds: need n >= 1, k >= 2, j >= 1");
  }
  RuleBounds rb;
  rb.n = n;
  rb.k = k;
  rb.j = j;
  rb.threshold = hypothesis_threshold(j, k);
  rb.first_term = threshold_estimate(j, k);
  rb.hypothesis_holds = n >= rb.threshold;
  rb.theorem_bound = static_cast<std::uint64_t>(j) * n;
  rb.rule1_overhead = n;
  const double lg_k = std::log2(static_cast<double>(k));
  for (std::uint32_t p = 0; j >= 2 && p <= j - 2; ++p) {
    rb.split_points.push_back(
        std::exp2(lg_k * static_cast<double>(j - p) / static_cast<double>(j)));
  }
  rb.rule3_cap_aligned = max_diff_count(k, true);
  rb.rule3_cap_unaligned = max_diff_count(k, false);
  rb.rule4_bound = n * ceil_log2(k);
  return rb;
}

std::vector<std::uint64_t> fibonacci_vector(std::size_t n, std::uint64_t k) {
  std::vector<std::uint64_t> family;
  std::uint64_t a = 1;
  std::uint64_t b = 2;
  while (a <= k) {
    family.push_back(a);
    const std::uint64_t next = a + b;
    a = b;
    b = next;
  }
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = family[i % family.size()];
  }
  return out;
}

std::vector<std::uint64_t> power_of_two_vector(std::size_t n, std::uint64_t k) {
  std::vector<std::uint64_t> family;
  for (std::uint64_t v = 1; v <= k; v <<= 1) {
    family.push_back(v);
    if (v > k / 2) {
      break;
    }
  }
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = family[i % family.size()];
  }
  return out;
}

}  // namespace addmul
