#ifndef ADDMUL_MATMUL_HPP
#define ADDMUL_MATMUL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "addmul/chain.hpp"
#include "addmul/op_counter.hpp"

namespace addmul {

/// Row-major signed integer matrix; every |value| < 2^bits.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t bits = 0;
  std::vector<std::int64_t> data;

  std::int64_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static DenseMatrix zeros(std::size_t rows, std::size_t cols);

  /// Checks shape and declared width; throws width_error / dimension_error.
  void validate() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// Coordinate-triple form: only nonzero entries, no duplicate coordinates.
struct SparseTriples {
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    std::int64_t value = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t bits = 0;
  std::vector<Entry> entries;

  void validate() const;
  DenseMatrix to_dense() const;
  static SparseTriples from_dense(const DenseMatrix& dense);

  friend bool operator==(const SparseTriples&, const SparseTriples&) = default;
};

/// How one scalar of a column reconstructs from the deduplicated odd cores:
/// value = sign * unique_odd[group] * 2^shift, or a zero / power-of-two flag.
struct ScalarRef {
  bool zero = false;
  bool one = false;  // |value| is a power of two; odd core is 1
  bool negative = false;
  std::uint8_t shift = 0;
  std::uint32_t group = 0;  // index into unique_odd; valid when !zero && !one
};

struct ScalarDedup {
  std::vector<std::uint64_t> unique_odd;  // distinct odd magnitudes > 1
  std::vector<ScalarRef> refs;            // one per input scalar
};

/// Group scalars by their odd magnitude core so each distinct core is
/// multiplied through the chain once; duplicates and power-of-two multiples
/// reuse that work with shifts.
ScalarDedup dedup_scalars(std::span<const std::int64_t> scalars);

struct OuterStats {
  std::uint64_t n_products = 0;        // scalar products with both operands nonzero
  std::uint64_t chain_evaluations = 0; // distinct odd cores actually evaluated
};

/// Rank-1 update acc += col * row^T. The chain is built over the longer of
/// (col, row) and evaluated once per distinct odd scalar core of the other;
/// result-matrix additions are tallied as output_accumulate_adds. Operand bit
/// widths of 0 mean "infer from the data".
OuterStats outer_product_accumulate(std::span<const std::int64_t> col,
                                    std::span<const std::int64_t> row,
                                    DenseMatrix& acc, const ChainConfig& config,
                                    OpCounter& counter,
                                    std::uint32_t col_bits = 0,
                                    std::uint32_t row_bits = 0);

enum class ChainSide { ColumnsOfA, RowsOfB };

struct DenseProduct {
  DenseMatrix product;
  OpCounter counter;
  std::uint64_t n_products = 0;
  std::uint64_t chain_evaluations = 0;
  ChainSide side = ChainSide::RowsOfB;

  double ratio() const;
};

struct SparseProduct {
  SparseTriples product;
  OpCounter counter;
  std::uint64_t n_products = 0;
  std::uint64_t chain_evaluations = 0;

  double ratio() const;
};

/// A*B as a sum of outer products of columns of A with rows of B. Exact;
/// signs ride outside the unsigned pipeline.
DenseProduct matmul_dense(const DenseMatrix& a, const DenseMatrix& b,
                          const ChainConfig& config = {});

/// Triple-form product; the chain is built over the longer assembled nonzero
/// vector of each outer product. Exact zeros (including cancellation) are
/// omitted from the result.
SparseProduct matmul_sparse(const SparseTriples& a, const SparseTriples& b,
                            const ChainConfig& config = {});

/// Schoolbook triple loop with native multiplies. Reference path for the CLI
/// --naive mode; only result-matrix additions are tallied.
DenseProduct naive_matmul_dense(const DenseMatrix& a, const DenseMatrix& b);
SparseProduct naive_matmul_sparse(const SparseTriples& a, const SparseTriples& b);

}  // namespace addmul

#endif
