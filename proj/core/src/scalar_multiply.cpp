#include "addmul/scalar_multiply.hpp"

#include <bit>
#include <cmath>

#include "addmul/errors.hpp"

namespace addmul {

std::uint64_t shift_add(std::uint64_t x, std::uint64_t y, unsigned i,
                        OpCounter& counter, AddKind kind, unsigned width_bits) {
  if (i >= 64 || (i > 0 && (y >> (64 - i)) != 0)) {
    throw width_error("shift_add: shifted operand exceeds 64 bits");
  }
  std::uint64_t sum;
  if (__builtin_add_overflow(x, y << i, &sum)) {
    throw width_error("shift_add: accumulator overflow");
  }
  if (width_bits < 64 && (sum >> width_bits) != 0) {
    throw width_error("shift_add: result exceeds accumulator width");
  }
  counter.bump(kind);
  return sum;
}

std::uint64_t russian_peasants(std::uint64_t c, std::uint64_t y,
                               OpCounter& counter, unsigned width_bits) {
  std::uint64_t x = 0;
  while (c != 0) {
    const unsigned i = static_cast<unsigned>(std::countr_zero(c));
    x = shift_add(x, y, i, counter, AddKind::BaseCase, width_bits);
    c &= c - 1;  // clear the lowest set bit
  }
  return x;
}

std::vector<std::uint64_t> accumulate_differences(std::span<const std::uint64_t> c_diffs,
                                      std::span<const std::uint8_t> diff_shifts,
                                      const ChainLevel& level,
                                      OpCounter& counter, unsigned width_bits) {
  const std::size_t m = level.differences.size();
  if (c_diffs.size() != m || (!diff_shifts.empty() && diff_shifts.size() != m)) {
    throw dimension_error("accumulate: length mismatch with level");
  }
  const auto shift_of = [&diff_shifts](std::size_t i) -> unsigned {
    return diff_shifts.empty() ? 0u : diff_shifts[i];
  };

  std::vector<std::uint64_t> sums(m);
  std::vector<std::size_t> whole{0, m};
  const auto& bounds = level.segment_bounds.empty() ? whole : level.segment_bounds;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const std::size_t lo = bounds[s];
    const std::size_t hi = bounds[s + 1];
    if (lo >= hi) {
      continue;
    }
    ++counter.copies;
    sums[lo] = c_diffs[lo] << shift_of(lo);
    if (shift_of(lo) > 0) {
      ++counter.shifts;
    }
    for (std::size_t i = lo + 1; i < hi; ++i) {
      sums[i] = shift_add(sums[i - 1], c_diffs[i], shift_of(i), counter,
                          AddKind::Accumulate, width_bits);
    }
  }
  return sums;
}

std::vector<std::uint64_t> follow_pointers(
    std::span<const std::uint64_t> c_sorted, const ChainLevel& level,
    OpCounter& counter) {
  std::vector<std::uint64_t> out(level.pointers.size());
  for (std::size_t i = 0; i < level.pointers.size(); ++i) {
    if (level.pointers[i] >= c_sorted.size()) {
      throw dimension_error("follow_pointers: pointer out of range");
    }
    ++counter.copies;
    const unsigned h = level.shifts.empty() ? 0u : level.shifts[i];
    out[i] = c_sorted[level.pointers[i]] << h;
    if (h > 0) {
      ++counter.shifts;
    }
  }
  return out;
}

namespace {

/// c times the sorted-unique values of `node`, recursing through lanes.
std::vector<std::uint64_t> eval_node_sorted(const ChainNode& node,
                                            std::uint64_t c,
                                            OpCounter& counter,
                                            unsigned width_bits) {
  const std::size_t m = node.level.size();
  std::vector<std::uint64_t> c_diffs(m);
  std::vector<std::uint8_t> pending(m, 0);

  if (node.is_leaf()) {
    for (std::size_t i = 0; i < m; ++i) {
      if (node.base[i] == 1) {
        // multiplying by 1 is a copy, not an addition
        ++counter.copies;
        c_diffs[i] = c;
      } else {
        c_diffs[i] = russian_peasants(node.base[i], c, counter, width_bits);
      }
    }
  } else {
    const auto& bounds = node.level.segment_bounds;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      const std::size_t lo = bounds[s];
      const auto& child = node.children[s];
      const auto child_sorted = eval_node_sorted(child, c, counter, width_bits);
      for (std::size_t i = 0; i < child.level.pointers.size(); ++i) {
        ++counter.copies;
        c_diffs[lo + i] = child_sorted[child.level.pointers[i]];
        pending[lo + i] = child.level.shifts[i];
      }
    }
  }
  return accumulate_differences(c_diffs, pending, node.level, counter, width_bits);
}

unsigned accumulator_width(const DiffChain& chain, std::uint64_t c) {
  return std::min<unsigned>(64, chain.input().bits + std::bit_width(c));
}

}  // namespace

std::vector<std::uint64_t> evaluate_top(const DiffChain& chain, std::uint64_t c,
                                        OpCounter& counter) {
  return eval_node_sorted(chain.root(), c, counter, accumulator_width(chain, c));
}

std::vector<std::uint64_t> multiply_chain(const DiffChain& chain,
                                          std::uint64_t c, OpCounter& counter) {
  const auto& in = chain.input();
  std::vector<std::uint64_t> out(in.original_size, 0);
  if (chain.degenerate() || c == 0) {
    return out;
  }
  const auto sorted = evaluate_top(chain, c, counter);
  const auto products = follow_pointers(sorted, chain.root().level, counter);

  std::size_t next_zero = 0;
  std::size_t src = 0;
  for (std::size_t i = 0; i < in.original_size; ++i) {
    if (next_zero < in.zero_positions.size() && in.zero_positions[next_zero] == i) {
      ++next_zero;
    } else {
      out[i] = products[src++];
    }
  }
  return out;
}

std::vector<std::uint64_t> segmented_accumulate(
    std::span<const std::uint64_t> c_diffs, OpCounter& counter) {
  const std::size_t n = c_diffs.size();
  std::vector<std::uint64_t> out(c_diffs.begin(), c_diffs.end());
  if (n <= 1) {
    return out;
  }
  const auto g = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n))));
  const std::size_t q = n / g;
  const std::size_t r = n % g;

  std::vector<std::size_t> bounds(g + 1, 0);
  for (std::size_t s = 0; s < g; ++s) {
    bounds[s + 1] = bounds[s] + q + (s < r ? 1 : 0);
  }

  // local prefix sums, independently per segment
  for (std::size_t s = 0; s < g; ++s) {
    for (std::size_t i = bounds[s] + 1; i < bounds[s + 1]; ++i) {
      out[i] = shift_add(out[i - 1], c_diffs[i], 0, counter, AddKind::Accumulate);
    }
  }
  // serial prefix over the segment totals
  std::vector<std::uint64_t> offsets(g, 0);
  for (std::size_t s = 1; s < g; ++s) {
    offsets[s] = s == 1 ? out[bounds[1] - 1]
                        : shift_add(offsets[s - 1], out[bounds[s] - 1], 0,
                                    counter, AddKind::Accumulate);
  }
  // add each segment's offset to all of its members
  for (std::size_t s = 1; s < g; ++s) {
    for (std::size_t i = bounds[s]; i < bounds[s + 1]; ++i) {
      out[i] = shift_add(out[i], offsets[s], 0, counter, AddKind::Accumulate);
    }
  }
  return out;
}

}  // namespace addmul
