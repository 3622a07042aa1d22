#include "addmul/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "addmul/errors.hpp"

namespace addmul {

InputVector InputVector::from_unsigned(std::span<const std::uint64_t> raw,
                                       std::uint32_t bits) {
  if (bits < 1 || bits > 32) {
    throw width_error("bit width must be in [1, 32]");
  }
  const std::uint64_t limit = (std::uint64_t{1} << bits) - 1;
  InputVector v;
  v.bits = bits;
  v.original_size = raw.size();
  v.values.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == 0) {
      v.zero_positions.push_back(i);
    } else if (raw[i] > limit) {
      throw width_error("value exceeds declared bit width");
    } else {
      v.values.push_back(raw[i]);
    }
  }
  return v;
}

InputVector InputVector::from_signed(std::span<const std::int64_t> raw,
                                     std::uint32_t bits) {
  if (bits < 1 || bits > 32) {
    throw width_error("bit width must be in [1, 32]");
  }
  const std::int64_t limit = (std::int64_t{1} << bits) - 1;
  InputVector v;
  v.bits = bits;
  v.original_size = raw.size();
  v.values.reserve(raw.size());
  v.signs.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == 0) {
      v.zero_positions.push_back(i);
    } else if (raw[i] > limit || raw[i] < -limit) {
      throw width_error("value exceeds declared bit width");
    } else {
      v.values.push_back(static_cast<std::uint64_t>(raw[i] < 0 ? -raw[i] : raw[i]));
      v.signs.push_back(raw[i] < 0 ? -1 : 1);
    }
  }
  return v;
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint8_t>> align(
    std::span<const std::uint64_t> values) {
  std::vector<std::uint64_t> odd(values.size());
  std::vector<std::uint8_t> shifts(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) {
      throw std::invalid_argument("align: zero value (strip zeros first)");
    }
    const int tz = std::countr_zero(values[i]);
    odd[i] = values[i] >> tz;
    shifts[i] = static_cast<std::uint8_t>(tz);
  }
  return {std::move(odd), std::move(shifts)};
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint32_t>> sort_dedup(
    std::span<const std::uint64_t> values, OpCounter& counter) {
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::uint64_t comparisons = 0;
  std::sort(sorted.begin(), sorted.end(),
            [&comparisons](std::uint64_t a, std::uint64_t b) {
              ++comparisons;
              return a < b;
            });
  // adjacent-equality scan for the dedup
  comparisons += sorted.empty() ? 0 : sorted.size() - 1;
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::uint32_t> pointers(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
    pointers[i] = static_cast<std::uint32_t>(it - sorted.begin());
    comparisons += std::bit_width(sorted.size());
  }
  counter.bookkeeping_ops += comparisons;
  return {std::move(sorted), std::move(pointers)};
}

std::vector<std::uint64_t> differences(std::span<const std::uint64_t> sorted,
                                       OpCounter& counter) {
  std::vector<std::uint64_t> diffs(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] == 0 || (i > 0 && sorted[i] <= sorted[i - 1])) {
      throw std::invalid_argument(
          "differences: input not strictly increasing and positive");
    }
    diffs[i] = i == 0 ? sorted[0] : sorted[i] - sorted[i - 1];
  }
  if (!sorted.empty()) {
    counter.bookkeeping_ops += sorted.size() - 1;  // one subtraction per gap
  }
  return diffs;
}

std::uint64_t max_diff_count(std::uint64_t k, bool aligned) {
  if (k == 0) {
    return 0;
  }
  const auto fits = [k, aligned](std::uint64_t r) {
    using u128 = unsigned __int128;
    const u128 sum = aligned ? u128{r} * r : u128{r} * (r + 1) / 2;
    return sum <= k;
  };
  auto r = static_cast<std::uint64_t>(
      std::sqrt((aligned ? 1.0 : 2.0) * static_cast<double>(k)));
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

namespace {

std::vector<std::size_t> even_partition(std::size_t m, std::size_t g) {
  g = std::max<std::size_t>(1, std::min(g, m));
  std::vector<std::size_t> bounds(g + 1, 0);
  const std::size_t q = m / g;
  const std::size_t r = m % g;
  for (std::size_t s = 0; s < g; ++s) {
    bounds[s + 1] = bounds[s] + q + (s < r ? 1 : 0);
  }
  return bounds;
}

ChainNode build_node(std::vector<std::uint64_t> input, const ChainConfig& config,
                     std::size_t depth, OpCounter& counter) {
  ChainNode node;
  node.input_length = input.size();

  std::vector<std::uint64_t> keys;
  if (config.align && (depth == 0 || config.realign_levels)) {
    auto [odd, shifts] = align(input);
    keys = std::move(odd);
    node.level.shifts = std::move(shifts);
  } else {
    keys = std::move(input);
    node.level.shifts.assign(node.input_length, 0);
  }

  auto [sorted, pointers] = sort_dedup(keys, counter);
  node.level.sorted_unique = std::move(sorted);
  node.level.pointers = std::move(pointers);
  node.level.differences = differences(node.level.sorted_unique, counter);

  const std::size_t m = node.level.size();

  // The no-shrink guard applies only to difference lists (depth >= 1): a
  // duplicate-free user vector must still recurse, since its differences are
  // sum-constrained even when the values are all distinct.
  const bool stop = m <= config.base_threshold ||
                    depth + 1 >= config.max_depth ||
                    (depth > 0 && m >= node.input_length);
  if (stop) {
    node.level.segment_bounds = even_partition(m, 1);
    node.base = node.level.differences;
    return node;
  }

  node.level.segment_bounds = even_partition(m, depth == 0 ? config.segments : 1);

  // Each segment recurses as an independent lane. The lane input is the
  // segment's run of the global difference vector, except that the
  // segment-initial entry carries the segment's first sorted value: lane
  // prefix sums then reproduce that segment of S without cross-segment
  // carries.
  const auto& bounds = node.level.segment_bounds;
  node.children.reserve(bounds.size() - 1);
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const std::size_t lo = bounds[s];
    const std::size_t hi = bounds[s + 1];
    std::vector<std::uint64_t> lane(node.level.differences.begin() + lo,
                                    node.level.differences.begin() + hi);
    if (s > 0) {
      lane[0] = node.level.sorted_unique[lo];
    }
    node.children.push_back(build_node(std::move(lane), config, depth + 1, counter));
  }
  return node;
}

std::size_t node_depth(const ChainNode& node) {
  std::size_t best = 0;
  for (const auto& child : node.children) {
    best = std::max(best, node_depth(child));
  }
  return best + 1;
}

}  // namespace

std::size_t DiffChain::depth() const {
  return degenerate_ ? 0 : node_depth(root_);
}

DiffChain build_chain(InputVector input, const ChainConfig& config,
                      OpCounter& counter) {
  DiffChain chain;
  chain.config_ = config;
  chain.input_ = std::move(input);
  if (chain.input_.values.empty()) {
    chain.degenerate_ = true;
    return chain;
  }
  chain.root_ = build_node(chain.input_.values, config, 0, counter);
  return chain;
}

}  // namespace addmul
