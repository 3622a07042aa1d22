#include "addmul/matmul.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "addmul/errors.hpp"
#include "addmul/scalar_multiply.hpp"

namespace addmul {

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
  DenseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.bits = 1;
  m.data.assign(rows * cols, 0);
  return m;
}

void DenseMatrix::validate() const {
  if (data.size() != rows * cols) {
    throw dimension_error("dense matrix: data length does not match shape");
  }
  if (bits < 1 || bits > 63) {
    throw width_error("dense matrix: bit width must be in [1, 63]");
  }
  const std::int64_t limit = (std::int64_t{1} << bits) - 1;
  for (const auto v : data) {
    if (v > limit || v < -limit) {
      throw width_error("dense matrix: value exceeds declared bit width");
    }
  }
}

void SparseTriples::validate() const {
  if (bits < 1 || bits > 63) {
    throw width_error("sparse matrix: bit width must be in [1, 63]");
  }
  const std::int64_t limit = (std::int64_t{1} << bits) - 1;
  std::vector<std::uint64_t> coords;
  coords.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw dimension_error("sparse matrix: coordinate out of range");
    }
    if (e.value == 0) {
      throw std::invalid_argument("sparse matrix: explicit zero entry");
    }
    if (e.value > limit || e.value < -limit) {
      throw width_error("sparse matrix: value exceeds declared bit width");
    }
    coords.push_back(static_cast<std::uint64_t>(e.row) * cols + e.col);
  }
  std::sort(coords.begin(), coords.end());
  if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
    throw std::invalid_argument("sparse matrix: duplicate coordinates");
  }
}

DenseMatrix SparseTriples::to_dense() const {
  DenseMatrix m = DenseMatrix::zeros(rows, cols);
  m.bits = bits;
  for (const auto& e : entries) {
    m.at(e.row, e.col) = e.value;
  }
  return m;
}

SparseTriples SparseTriples::from_dense(const DenseMatrix& dense) {
  SparseTriples s;
  s.rows = dense.rows;
  s.cols = dense.cols;
  s.bits = dense.bits;
  for (std::size_t r = 0; r < dense.rows; ++r) {
    for (std::size_t c = 0; c < dense.cols; ++c) {
      if (dense.at(r, c) != 0) {
        s.entries.push_back({r, c, dense.at(r, c)});
      }
    }
  }
  return s;
}

ScalarDedup dedup_scalars(std::span<const std::int64_t> scalars) {
  ScalarDedup out;
  out.refs.resize(scalars.size());
  std::unordered_map<std::uint64_t, std::uint32_t> group_of;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    ScalarRef& ref = out.refs[i];
    if (scalars[i] == 0) {
      ref.zero = true;
      continue;
    }
    ref.negative = scalars[i] < 0;
    const auto mag = static_cast<std::uint64_t>(
        ref.negative ? -scalars[i] : scalars[i]);
    const int tz = std::countr_zero(mag);
    ref.shift = static_cast<std::uint8_t>(tz);
    const std::uint64_t odd = mag >> tz;
    if (odd == 1) {
      ref.one = true;
      continue;
    }
    const auto [it, inserted] =
        group_of.try_emplace(odd, static_cast<std::uint32_t>(out.unique_odd.size()));
    if (inserted) {
      out.unique_odd.push_back(odd);
    }
    ref.group = it->second;
  }
  return out;
}

namespace {

std::uint32_t infer_bits(std::span<const std::int64_t> values) {
  std::uint64_t largest = 0;
  for (const auto v : values) {
    largest = std::max(largest,
                       static_cast<std::uint64_t>(v < 0 ? -v : v));
  }
  return std::max<std::uint32_t>(1, std::bit_width(largest));
}

/// acc += sign * (value << shift), overflow-checked, tallied as an
/// output-accumulate shift-and-add.
void output_shift_add(std::int64_t& cell, std::uint64_t value, unsigned shift,
                      bool negative, OpCounter& counter) {
  if (value != 0 && (shift >= 63 || (value >> (63 - shift)) != 0)) {
    throw width_error("result accumulation overflow");
  }
  const auto term = static_cast<std::int64_t>(value << shift);
  std::int64_t sum;
  if (__builtin_add_overflow(cell, negative ? -term : term, &sum)) {
    throw width_error("result accumulation overflow");
  }
  counter.bump(AddKind::OutputAccumulate);
  ++counter.copies;
  cell = sum;
}

struct CellTarget {
  DenseMatrix* acc;
  bool chain_is_col;   // chain positions index rows; scalars index columns
  std::size_t scalar_index;

  std::int64_t& cell(std::size_t chain_pos) const {
    return chain_is_col ? acc->at(chain_pos, scalar_index)
                        : acc->at(scalar_index, chain_pos);
  }
};

/// Scatter one scalar's contribution across the chain vector. `top` is c
/// times the root sorted-unique values for the scalar's odd core (empty for
/// power-of-two scalars, which reuse the original values directly).
void scatter_scalar(const InputVector& in, const ChainLevel& root,
                    std::span<const std::uint64_t> top, const ScalarRef& ref,
                    const CellTarget& target, OpCounter& counter) {
  std::size_t next_zero = 0;
  std::size_t retained = 0;
  for (std::size_t pos = 0; pos < in.original_size; ++pos) {
    if (next_zero < in.zero_positions.size() &&
        in.zero_positions[next_zero] == pos) {
      ++next_zero;
      continue;
    }
    const bool vec_negative = !in.signs.empty() && in.signs[retained] < 0;
    std::uint64_t value;
    unsigned shift = ref.shift;
    if (ref.one) {
      value = in.values[retained];
    } else {
      value = top[root.pointers[retained]];
      shift += root.shifts[retained];
    }
    output_shift_add(target.cell(pos), value, shift,
                     vec_negative != ref.negative, counter);
    ++retained;
  }
}

}  // namespace

OuterStats outer_product_accumulate(std::span<const std::int64_t> col,
                                    std::span<const std::int64_t> row,
                                    DenseMatrix& acc, const ChainConfig& config,
                                    OpCounter& counter, std::uint32_t col_bits,
                                    std::uint32_t row_bits) {
  if (acc.rows != col.size() || acc.cols != row.size()) {
    throw dimension_error("outer product: accumulator shape mismatch");
  }
  OuterStats stats;
  const auto nnz = [](std::span<const std::int64_t> v) {
    return static_cast<std::uint64_t>(
        std::count_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; }));
  };
  stats.n_products = nnz(col) * nnz(row);
  if (stats.n_products == 0) {
    return stats;
  }

  const bool chain_is_col = col.size() > row.size();
  const auto chain_vec = chain_is_col ? col : row;
  const auto scalars = chain_is_col ? row : col;
  const std::uint32_t chain_bits = chain_is_col ? col_bits : row_bits;

  const auto in = InputVector::from_signed(
      chain_vec, chain_bits ? chain_bits : infer_bits(chain_vec));
  const auto dedup = dedup_scalars(scalars);

  DiffChain chain;
  bool chain_built = false;
  std::vector<std::vector<std::uint64_t>> tops(dedup.unique_odd.size());
  for (std::size_t j = 0; j < dedup.refs.size(); ++j) {
    const ScalarRef& ref = dedup.refs[j];
    if (ref.zero) {
      continue;
    }
    if (!ref.one && tops[ref.group].empty()) {
      if (!chain_built) {
        chain = build_chain(in, config, counter);
        chain_built = true;
      }
      tops[ref.group] = evaluate_top(chain, dedup.unique_odd[ref.group], counter);
      ++stats.chain_evaluations;
    }
    const CellTarget target{&acc, chain_is_col, j};
    scatter_scalar(in, chain_built ? chain.root().level : ChainLevel{},
                   ref.one ? std::span<const std::uint64_t>{}
                           : std::span<const std::uint64_t>(tops[ref.group]),
                   ref, target, counter);
  }
  return stats;
}

namespace {

std::uint32_t result_bits(const DenseMatrix& m) {
  std::uint64_t largest = 0;
  for (const auto v : m.data) {
    largest = std::max(largest,
                       static_cast<std::uint64_t>(v < 0 ? -v : v));
  }
  return std::max<std::uint32_t>(1, std::bit_width(largest));
}

void check_operands(std::size_t a_cols, std::size_t b_rows, std::uint32_t a_bits,
                    std::uint32_t b_bits) {
  if (a_cols != b_rows) {
    throw dimension_error("matmul: inner dimensions differ");
  }
  if (a_bits > 32 || b_bits > 32) {
    throw width_error("matmul: operand bit width must be <= 32");
  }
}

}  // namespace

double DenseProduct::ratio() const {
  return n_products ? counter.additions_per_multiplication(n_products) : 0.0;
}

double SparseProduct::ratio() const {
  return n_products ? counter.additions_per_multiplication(n_products) : 0.0;
}

DenseProduct matmul_dense(const DenseMatrix& a, const DenseMatrix& b,
                          const ChainConfig& config) {
  a.validate();
  b.validate();
  check_operands(a.cols, b.rows, a.bits, b.bits);

  DenseProduct out;
  out.product = DenseMatrix::zeros(a.rows, b.cols);
  out.side = a.rows > b.cols ? ChainSide::ColumnsOfA : ChainSide::RowsOfB;

  std::vector<std::int64_t> col(a.rows);
  for (std::size_t t = 0; t < a.cols; ++t) {
    for (std::size_t i = 0; i < a.rows; ++i) {
      col[i] = a.at(i, t);
    }
    const std::span<const std::int64_t> row(b.data.data() + t * b.cols, b.cols);
    const auto stats = outer_product_accumulate(col, row, out.product, config,
                                                out.counter, a.bits, b.bits);
    out.n_products += stats.n_products;
    out.chain_evaluations += stats.chain_evaluations;
  }
  out.product.bits = result_bits(out.product);
  return out;
}

DenseProduct naive_matmul_dense(const DenseMatrix& a, const DenseMatrix& b) {
  a.validate();
  b.validate();
  check_operands(a.cols, b.rows, a.bits, b.bits);

  DenseProduct out;
  out.product = DenseMatrix::zeros(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t t = 0; t < a.cols; ++t) {
      const std::int64_t lhs = a.at(i, t);
      if (lhs == 0) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols; ++j) {
        const std::int64_t rhs = b.at(t, j);
        if (rhs == 0) {
          continue;
        }
        std::int64_t term;
        std::int64_t sum;
        if (__builtin_mul_overflow(lhs, rhs, &term) ||
            __builtin_add_overflow(out.product.at(i, j), term, &sum)) {
          throw width_error("result accumulation overflow");
        }
        out.product.at(i, j) = sum;
        ++out.counter.output_accumulate_adds;
        ++out.n_products;
      }
    }
  }
  out.product.bits = result_bits(out.product);
  return out;
}

namespace {

struct AssembledVector {
  std::vector<std::size_t> positions;  // row (column of A) or column (row of B)
  std::vector<std::int64_t> values;
};

std::vector<AssembledVector> assemble_columns(const SparseTriples& m) {
  std::vector<AssembledVector> cols(m.cols);
  for (const auto& e : m.entries) {
    cols[e.col].positions.push_back(e.row);
    cols[e.col].values.push_back(e.value);
  }
  return cols;
}

std::vector<AssembledVector> assemble_rows(const SparseTriples& m) {
  std::vector<AssembledVector> rows(m.rows);
  for (const auto& e : m.entries) {
    rows[e.row].positions.push_back(e.col);
    rows[e.row].values.push_back(e.value);
  }
  return rows;
}

SparseTriples collect_sparse(std::size_t rows, std::size_t cols,
                             std::unordered_map<std::uint64_t, std::int64_t>& cells) {
  SparseTriples out;
  out.rows = rows;
  out.cols = cols;
  std::uint64_t largest = 0;
  for (const auto& [key, value] : cells) {
    if (value == 0) {
      continue;  // cancellation: canonical form omits exact zeros
    }
    out.entries.push_back({key / cols, key % cols, value});
    largest = std::max(largest,
                       static_cast<std::uint64_t>(value < 0 ? -value : value));
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const SparseTriples::Entry& x, const SparseTriples::Entry& y) {
              return x.row != y.row ? x.row < y.row : x.col < y.col;
            });
  out.bits = std::max<std::uint32_t>(1, std::bit_width(largest));
  return out;
}

}  // namespace

SparseProduct matmul_sparse(const SparseTriples& a, const SparseTriples& b,
                            const ChainConfig& config) {
  a.validate();
  b.validate();
  check_operands(a.cols, b.rows, a.bits, b.bits);

  const auto a_cols = assemble_columns(a);
  const auto b_rows = assemble_rows(b);

  SparseProduct out;
  std::unordered_map<std::uint64_t, std::int64_t> cells;
  for (std::size_t t = 0; t < a.cols; ++t) {
    const auto& ca = a_cols[t];
    const auto& rb = b_rows[t];
    if (ca.values.empty() || rb.values.empty()) {
      continue;
    }
    out.n_products += static_cast<std::uint64_t>(ca.values.size()) * rb.values.size();

    // chain over the longer assembled vector; tie goes to the row of B
    const bool chain_is_col = ca.values.size() > rb.values.size();
    const auto& chain_vec = chain_is_col ? ca : rb;
    const auto& scalar_vec = chain_is_col ? rb : ca;
    const std::uint32_t chain_bits = chain_is_col ? a.bits : b.bits;

    const auto in = InputVector::from_signed(chain_vec.values, chain_bits);
    const auto dedup = dedup_scalars(scalar_vec.values);

    DiffChain chain;
    bool chain_built = false;
    std::vector<std::vector<std::uint64_t>> tops(dedup.unique_odd.size());
    for (std::size_t j = 0; j < dedup.refs.size(); ++j) {
      const ScalarRef& ref = dedup.refs[j];
      if (!ref.one && tops[ref.group].empty()) {
        if (!chain_built) {
          chain = build_chain(in, config, out.counter);
          chain_built = true;
        }
        tops[ref.group] =
            evaluate_top(chain, dedup.unique_odd[ref.group], out.counter);
        ++out.chain_evaluations;
      }
      const bool scalar_negative = ref.negative;
      for (std::size_t i = 0; i < chain_vec.values.size(); ++i) {
        const bool vec_negative = in.signs[i] < 0;
        std::uint64_t value;
        unsigned shift = ref.shift;
        if (ref.one) {
          value = in.values[i];
        } else {
          value = tops[ref.group][chain.root().level.pointers[i]];
          shift += chain.root().level.shifts[i];
        }
        const std::size_t r = chain_is_col ? chain_vec.positions[i] : scalar_vec.positions[j];
        const std::size_t c = chain_is_col ? scalar_vec.positions[j] : chain_vec.positions[i];
        output_shift_add(cells[static_cast<std::uint64_t>(r) * b.cols + c], value,
                         shift, vec_negative != scalar_negative, out.counter);
      }
    }
  }
  out.product = collect_sparse(a.rows, b.cols, cells);
  return out;
}

SparseProduct naive_matmul_sparse(const SparseTriples& a, const SparseTriples& b) {
  a.validate();
  b.validate();
  check_operands(a.cols, b.rows, a.bits, b.bits);

  const auto a_cols = assemble_columns(a);
  const auto b_rows = assemble_rows(b);

  SparseProduct out;
  std::unordered_map<std::uint64_t, std::int64_t> cells;
  for (std::size_t t = 0; t < a.cols; ++t) {
    for (std::size_t i = 0; i < a_cols[t].values.size(); ++i) {
      for (std::size_t j = 0; j < b_rows[t].values.size(); ++j) {
        const auto key =
            static_cast<std::uint64_t>(a_cols[t].positions[i]) * b.cols +
            b_rows[t].positions[j];
        std::int64_t term;
        std::int64_t sum;
        if (__builtin_mul_overflow(a_cols[t].values[i], b_rows[t].values[j],
                                   &term) ||
            __builtin_add_overflow(cells[key], term, &sum)) {
          throw width_error("result accumulation overflow");
        }
        cells[key] = sum;
        ++out.counter.output_accumulate_adds;
        ++out.n_products;
      }
    }
  }
  out.product = collect_sparse(a.rows, b.cols, cells);
  return out;
}

}  // namespace addmul
