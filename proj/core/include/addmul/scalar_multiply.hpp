#ifndef ADDMUL_SCALAR_MULTIPLY_HPP
#define ADDMUL_SCALAR_MULTIPLY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "addmul/chain.hpp"
#include "addmul/op_counter.hpp"

namespace addmul {

/// The counted arithmetic primitive: x + y*2^i. Throws width_error when the
/// result would exceed `width_bits` bits (accumulators are 2b wide, b <= 32).
std::uint64_t shift_add(std::uint64_t x, std::uint64_t y, unsigned i,
                        OpCounter& counter, AddKind kind,
                        unsigned width_bits = 64);

/// Binary-expansion multiplication: one shift-and-add per set bit of c,
/// tallied as base-case additions. Returns c*y; 0 with no additions when
/// c == 0.
std::uint64_t russian_peasants(std::uint64_t c, std::uint64_t y,
                               OpCounter& counter, unsigned width_bits = 64);

/// Prefix-sum the scaled differences of one level back into c*S. Position 0
/// of every segment is a copy (plus a standalone shift when its pending
/// alignment shift is nonzero); every other position is one shift-and-add,
/// fusing the difference's recorded alignment shift. `diff_shifts` may be
/// empty for no pending shifts. For segmented levels the caller supplies the
/// lane convention: each segment-initial entry of c_diffs is c times the
/// segment's first sorted value.
std::vector<std::uint64_t> accumulate_differences(std::span<const std::uint64_t> c_diffs,
                                      std::span<const std::uint8_t> diff_shifts,
                                      const ChainLevel& level,
                                      OpCounter& counter,
                                      unsigned width_bits = 64);

/// Step 5: out[i] = c_sorted[P[i]] * 2^H[i]. One copy per element, one
/// standalone shift per element with H[i] > 0. (Drivers that can shift-and-add
/// into a result matrix fuse the shift instead; see matmul.)
std::vector<std::uint64_t> follow_pointers(
    std::span<const std::uint64_t> c_sorted, const ChainLevel& level,
    OpCounter& counter);

/// Evaluate c times the root level's sorted-unique values. Drivers follow the
/// root pointers themselves so the final alignment shift can fuse into their
/// own accumulation.
std::vector<std::uint64_t> evaluate_top(const DiffChain& chain, std::uint64_t c,
                                        OpCounter& counter);

/// Full vector-scalar product c*v for every original index, zeros restored at
/// their positions. Signs are not applied; the pipeline is unsigned.
std::vector<std::uint64_t> multiply_chain(const DiffChain& chain,
                                          std::uint64_t c, OpCounter& counter);

/// Prefix sums computed in ceil(sqrt(n)) independent segments: local sums per
/// segment, a serial prefix over segment totals, then one add per element of
/// segments 2..g. Bit-identical to the sequential scan; at most 2n + sqrt(n)
/// additions.
std::vector<std::uint64_t> segmented_accumulate(
    std::span<const std::uint64_t> c_diffs, OpCounter& counter);

}  // namespace addmul

#endif
