#include "addmul/soft_float.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "addmul/errors.hpp"
#include "addmul/matmul.hpp"
#include "addmul/scalar_multiply.hpp"

namespace addmul {

using boost::multiprecision::cpp_int;

SoftFloatMatrix SoftFloatMatrix::zeros(std::size_t rows, std::size_t cols,
                                       std::uint32_t mantissa_bits) {
  SoftFloatMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.mantissa_bits = mantissa_bits;
  m.data.assign(rows * cols, SoftFloat{});
  return m;
}

void SoftFloatMatrix::validate() const {
  if (data.size() != rows * cols) {
    throw dimension_error("float matrix: data length does not match shape");
  }
  if (mantissa_bits < 2 || mantissa_bits > 32) {
    throw width_error("float matrix: mantissa width must be in [2, 32]");
  }
  const std::uint64_t lo = std::uint64_t{1} << (mantissa_bits - 1);
  const std::uint64_t hi = std::uint64_t{1} << mantissa_bits;
  for (const auto& f : data) {
    if (f.is_zero()) {
      if (f.exponent != 0 || f.negative) {
        throw width_error("float matrix: zero must be +:0:0");
      }
    } else if (f.mantissa < lo || f.mantissa >= hi) {
      throw width_error("float matrix: mantissa outside normalized range");
    }
  }
}

namespace {

constexpr std::int64_t kExponentLimit = std::numeric_limits<std::int32_t>::max();

SoftFloat round_exact(const cpp_int& sum, std::int64_t exponent,
                      std::uint32_t mantissa_bits) {
  SoftFloat out;
  if (sum == 0) {
    return out;
  }
  out.negative = sum < 0;
  cpp_int mag = abs(sum);
  const auto width = static_cast<std::int64_t>(msb(mag)) + 1;
  const auto m = static_cast<std::int64_t>(mantissa_bits);

  std::int64_t exp_out;
  cpp_int keep;
  if (width > m) {
    const auto drop = static_cast<unsigned>(width - m);
    keep = mag >> drop;
    const cpp_int rem = mag - (keep << drop);
    const cpp_int half = cpp_int(1) << (drop - 1);
    if (rem > half || (rem == half && bit_test(keep, 0))) {
      ++keep;
    }
    exp_out = exponent + drop;
    if (keep == cpp_int(1) << mantissa_bits) {
      keep >>= 1;
      exp_out += 1;
    }
  } else {
    keep = mag << static_cast<unsigned>(m - width);
    exp_out = exponent - (m - width);
  }
  if (exp_out > kExponentLimit || exp_out < -kExponentLimit) {
    throw width_error("soft float: exponent overflow");
  }
  out.exponent = static_cast<std::int32_t>(exp_out);
  out.mantissa = keep.convert_to<std::uint64_t>();
  return out;
}

/// Exact accumulator for one output cell: sum * 2^exponent.
struct ExactCell {
  cpp_int sum;
  std::int64_t exponent = 0;
  bool used = false;

  void add(bool negative, std::uint64_t value, std::int64_t exp) {
    cpp_int term = value;
    if (!used) {
      exponent = exp;
      used = true;
    } else if (exp < exponent) {
      sum <<= static_cast<unsigned>(exponent - exp);
      exponent = exp;
    }
    term <<= static_cast<unsigned>(exp - exponent);
    if (negative) {
      sum -= term;
    } else {
      sum += term;
    }
  }
};

void check_float_operands(const SoftFloatMatrix& a, const SoftFloatMatrix& b) {
  a.validate();
  b.validate();
  if (a.cols != b.rows) {
    throw dimension_error("matmul: inner dimensions differ");
  }
  if (a.mantissa_bits != b.mantissa_bits) {
    throw dimension_error("matmul: operands must share mantissa width");
  }
}

SoftFloatProduct finalize_cells(
    std::size_t rows, std::size_t cols, std::uint32_t mantissa_bits,
    std::unordered_map<std::uint64_t, ExactCell>& cells, SoftFloatProduct out) {
  out.product = SoftFloatMatrix::zeros(rows, cols, mantissa_bits);
  for (auto& [key, cell] : cells) {
    out.product.data[key] = round_exact(cell.sum, cell.exponent, mantissa_bits);
  }
  return out;
}

}  // namespace

SoftFloat round_to_softfloat(bool negative, std::uint64_t value,
                             std::int64_t exponent, std::uint32_t mantissa_bits) {
  SoftFloat f = round_exact(cpp_int(value), exponent, mantissa_bits);
  if (!f.is_zero()) {
    f.negative = negative;
  }
  return f;
}

SoftFloat softfloat_from_double(double d, std::uint32_t mantissa_bits) {
  SoftFloat out;
  if (d == 0.0) {
    return out;
  }
  out.negative = std::signbit(d);
  int e2 = 0;
  const double frac = std::frexp(std::fabs(d), &e2);  // frac in [0.5, 1)
  // frac * 2^m is exact for m <= 32; nearbyint rounds ties to even
  double scaled = std::nearbyint(std::ldexp(frac, static_cast<int>(mantissa_bits)));
  std::int64_t exponent = e2 - static_cast<int>(mantissa_bits);
  if (scaled >= std::ldexp(1.0, static_cast<int>(mantissa_bits))) {
    scaled = std::ldexp(scaled, -1);
    exponent += 1;
  }
  out.mantissa = static_cast<std::uint64_t>(scaled);
  out.exponent = static_cast<std::int32_t>(exponent);
  return out;
}

double softfloat_to_double(const SoftFloat& f) {
  if (f.is_zero()) {
    return 0.0;
  }
  const double mag = std::ldexp(static_cast<double>(f.mantissa), f.exponent);
  return f.negative ? -mag : mag;
}

double SoftFloatProduct::ratio() const {
  return n_products ? counter.additions_per_multiplication(n_products) : 0.0;
}

SoftFloatProduct matmul_softfloat(const SoftFloatMatrix& a,
                                  const SoftFloatMatrix& b,
                                  const ChainConfig& config) {
  check_float_operands(a, b);

  SoftFloatProduct out;
  std::unordered_map<std::uint64_t, ExactCell> cells;
  const bool chain_is_col = a.rows > b.cols;

  std::vector<std::uint64_t> chain_mantissas(chain_is_col ? a.rows : b.cols);
  for (std::size_t t = 0; t < a.cols; ++t) {
    const auto chain_float = [&](std::size_t i) -> const SoftFloat& {
      return chain_is_col ? a.at(i, t) : b.at(t, i);
    };
    const auto scalar_float = [&](std::size_t j) -> const SoftFloat& {
      return chain_is_col ? b.at(t, j) : a.at(j, t);
    };
    const std::size_t chain_len = chain_is_col ? a.rows : b.cols;
    const std::size_t scalar_len = chain_is_col ? b.cols : a.rows;

    std::uint64_t chain_nnz = 0;
    for (std::size_t i = 0; i < chain_len; ++i) {
      chain_mantissas[i] = chain_float(i).mantissa;
      chain_nnz += chain_float(i).is_zero() ? 0 : 1;
    }
    std::uint64_t scalar_nnz = 0;
    std::vector<std::int64_t> scalar_mantissas(scalar_len);
    for (std::size_t j = 0; j < scalar_len; ++j) {
      scalar_mantissas[j] = static_cast<std::int64_t>(scalar_float(j).mantissa);
      scalar_nnz += scalar_float(j).is_zero() ? 0 : 1;
    }
    if (chain_nnz == 0 || scalar_nnz == 0) {
      continue;
    }
    out.n_products += chain_nnz * scalar_nnz;

    const auto in = InputVector::from_unsigned(chain_mantissas, a.mantissa_bits);
    const auto dedup = dedup_scalars(scalar_mantissas);

    DiffChain chain;
    bool chain_built = false;
    std::vector<std::vector<std::uint64_t>> tops(dedup.unique_odd.size());
    for (std::size_t j = 0; j < scalar_len; ++j) {
      const ScalarRef& ref = dedup.refs[j];
      if (ref.zero) {
        continue;
      }
      const SoftFloat& sf = scalar_float(j);
      if (!ref.one && tops[ref.group].empty()) {
        if (!chain_built) {
          chain = build_chain(in, config, out.counter);
          chain_built = true;
        }
        tops[ref.group] =
            evaluate_top(chain, dedup.unique_odd[ref.group], out.counter);
        ++out.chain_evaluations;
      }

      std::size_t next_zero = 0;
      std::size_t retained = 0;
      for (std::size_t i = 0; i < chain_len; ++i) {
        if (next_zero < in.zero_positions.size() &&
            in.zero_positions[next_zero] == i) {
          ++next_zero;
          continue;
        }
        const SoftFloat& cf = chain_float(i);
        std::uint64_t value;
        std::int64_t exp = static_cast<std::int64_t>(cf.exponent) + sf.exponent +
                           ref.shift;
        if (ref.one) {
          value = in.values[retained];
        } else {
          value = tops[ref.group][chain.root().level.pointers[retained]];
          exp += chain.root().level.shifts[retained];
        }
        ++out.counter.copies;
        out.counter.bump(AddKind::OutputAccumulate);
        const std::size_t r = chain_is_col ? i : j;
        const std::size_t c = chain_is_col ? j : i;
        cells[static_cast<std::uint64_t>(r) * b.cols + c].add(
            cf.negative != sf.negative, value, exp);
        ++retained;
      }
    }
  }
  return finalize_cells(a.rows, b.cols, a.mantissa_bits, cells, std::move(out));
}

SoftFloatProduct naive_matmul_softfloat(const SoftFloatMatrix& a,
                                        const SoftFloatMatrix& b) {
  check_float_operands(a, b);

  SoftFloatProduct out;
  std::unordered_map<std::uint64_t, ExactCell> cells;
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t t = 0; t < a.cols; ++t) {
      const SoftFloat& fa = a.at(i, t);
      if (fa.is_zero()) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols; ++j) {
        const SoftFloat& fb = b.at(t, j);
        if (fb.is_zero()) {
          continue;
        }
        cells[static_cast<std::uint64_t>(i) * b.cols + j].add(
            fa.negative != fb.negative, fa.mantissa * fb.mantissa,
            static_cast<std::int64_t>(fa.exponent) + fb.exponent);
        ++out.counter.output_accumulate_adds;
        ++out.n_products;
      }
    }
  }
  return finalize_cells(a.rows, b.cols, a.mantissa_bits, cells, std::move(out));
}

}  // namespace addmul
