#ifndef ADDMUL_CHAIN_HPP
#define ADDMUL_CHAIN_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "addmul/op_counter.hpp"

namespace addmul {

/// Knobs for building a difference chain.
struct ChainConfig {
  bool align = true;            // right-shift values to odd before sorting
  bool realign_levels = true;   // re-apply alignment at every recursion level
  std::uint32_t segments = 1;   // split the top difference list g ways
  std::size_t base_threshold = 4;  // stop once the list is this short
  std::size_t max_depth = 8;       // hard recursion cap
};

/// A vector prepared for chain building: zeros stripped (their positions
/// remembered), optional signs carried alongside, all retained magnitudes in
/// [1, 2^bits - 1].
struct InputVector {
  std::uint32_t bits = 0;
  std::vector<std::uint64_t> values;       // retained nonzero magnitudes
  std::vector<std::size_t> zero_positions; // original indices that were 0
  std::vector<std::int8_t> signs;          // per retained value, +1/-1; empty if unsigned
  std::size_t original_size = 0;

  static InputVector from_unsigned(std::span<const std::uint64_t> raw,
                                   std::uint32_t bits);
  static InputVector from_signed(std::span<const std::int64_t> raw,
                                 std::uint32_t bits);
};

/// One recursion level: sorted duplicate-free values, pointers from each
/// input element into them, per-element alignment shifts, and the first
/// differences of the sorted list.
///
/// `differences` is always the global difference vector of `sorted_unique`
/// (differences[0] = sorted_unique[0]); `segment_bounds` partitions it into
/// contiguous segments when segmentation is enabled (size g+1, bounds[0]=0,
/// bounds[g]=m).
struct ChainLevel {
  std::vector<std::uint64_t> sorted_unique;
  std::vector<std::uint32_t> pointers;
  std::vector<std::uint8_t> shifts;
  std::vector<std::uint64_t> differences;
  std::vector<std::size_t> segment_bounds;

  std::size_t size() const { return sorted_unique.size(); }
  std::size_t segment_count() const {
    return segment_bounds.empty() ? 1 : segment_bounds.size() - 1;
  }
};

/// A node of the preprocessing recursion. The top node's level covers the
/// whole input; with segmentation each segment recurses as an independent
/// child lane. A leaf keeps its difference list as the base vector for the
/// binary-expansion base case.
struct ChainNode {
  ChainLevel level;
  std::size_t input_length = 0;       // length of the list this node was built from
  std::vector<ChainNode> children;    // one per segment; empty for a leaf
  std::vector<std::uint64_t> base;    // leaf only: == level.differences

  bool is_leaf() const { return children.empty(); }
};

/// Full preprocessing result for one vector. Immutable once built; any
/// number of scalar evaluations may read it concurrently.
class DiffChain {
public:
  const ChainConfig& config() const { return config_; }
  const InputVector& input() const { return input_; }
  const ChainNode& root() const { return root_; }

  /// True when the vector had no nonzero element; multiplying yields zeros.
  bool degenerate() const { return degenerate_; }

  /// Number of recursion levels along the deepest lane.
  std::size_t depth() const;

  friend DiffChain build_chain(InputVector input, const ChainConfig& config,
                               OpCounter& counter);

private:
  ChainConfig config_;
  InputVector input_;
  ChainNode root_;
  bool degenerate_ = false;
};

/// Right-shift every value until odd. Returns the odd values and the shift
/// counts. Zero values are invalid (strip them first).
std::pair<std::vector<std::uint64_t>, std::vector<std::uint8_t>> align(
    std::span<const std::uint64_t> values);

/// Sort and eliminate duplicates. Returns the strictly increasing unique
/// values S and 0-based pointers P with S[P[i]] == values[i]. Comparisons are
/// tallied as bookkeeping.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint32_t>> sort_dedup(
    std::span<const std::uint64_t> values, OpCounter& counter);

/// First differences with an imaginary 0 before the first element. Input must
/// be strictly increasing and positive.
std::vector<std::uint64_t> differences(std::span<const std::uint64_t> sorted,
                                       OpCounter& counter);

/// Longest possible list of distinct positive integers (odd ones when
/// `aligned`) whose sum is at most k: largest r with r(r+1)/2 <= k, or with
/// r^2 <= k when aligned.
std::uint64_t max_diff_count(std::uint64_t k, bool aligned);

/// Build the recursive preprocessing structure. Only bookkeeping operations
/// are counted; chain building performs no ratio-relevant additions.
DiffChain build_chain(InputVector input, const ChainConfig& config,
                      OpCounter& counter);

}  // namespace addmul

#endif
