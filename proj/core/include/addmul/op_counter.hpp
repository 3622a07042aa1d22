#ifndef ADDMUL_OP_COUNTER_HPP
#define ADDMUL_OP_COUNTER_HPP

#include <cstdint>
#include <string>

namespace addmul {

/// Category of a shift-and-add invocation.
enum class AddKind {
  Accumulate,        // prefix-sum additions over difference lists
  BaseCase,          // shift-and-adds inside the binary-expansion base case
  OutputAccumulate,  // summing outer-product terms into the result matrix
};

/// Tallies of every operation class in the pipeline. Value-like: one counter
/// per task, merged explicitly at joins.
///
/// The headline "additions per multiplication" ratio uses only
/// accumulate_adds + base_case_adds. Result-matrix additions are needed by
/// any matrix-multiplication algorithm and bookkeeping (sort comparisons,
/// difference subtractions) is asymptotically negligible, so neither enters
/// the ratio.
struct OpCounter {
  std::uint64_t accumulate_adds = 0;
  std::uint64_t base_case_adds = 0;
  std::uint64_t copies = 0;
  std::uint64_t shifts = 0;
  std::uint64_t bookkeeping_ops = 0;
  std::uint64_t output_accumulate_adds = 0;

  /// Double-entry audit: total shift-and-add invocations across the three
  /// AddKind categories. Not serialized; tests assert it equals the category
  /// sum.
  std::uint64_t shift_add_calls = 0;

  void bump(AddKind kind);

  /// Fieldwise sum; commutative and associative. Throws width_error if a
  /// register would overflow.
  void merge(const OpCounter& other);

  std::uint64_t ratio_relevant_adds() const {
    return accumulate_adds + base_case_adds;
  }

  /// (accumulate_adds + base_case_adds) / n_products.
  /// Throws std::invalid_argument when n_products == 0.
  double additions_per_multiplication(std::uint64_t n_products) const;

  /// Flat key:value block, one field per line.
  std::string to_text() const;

  /// Fixed CSV schema shared with the CLI --counts output.
  static std::string csv_header();
  std::string csv_row(double ratio) const;

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

OpCounter merge(OpCounter a, const OpCounter& b);

}  // namespace addmul

#endif
