#ifndef ADDMUL_SOFT_FLOAT_HPP
#define ADDMUL_SOFT_FLOAT_HPP

#include <cstdint>
#include <vector>

#include "addmul/chain.hpp"
#include "addmul/op_counter.hpp"

namespace addmul {

/// Software float: value = sign * mantissa * 2^exponent, mantissa an m-bit
/// integer carrying the leading 1 (in [2^(m-1), 2^m)), or 0 for the value
/// zero.
struct SoftFloat {
  bool negative = false;
  std::int32_t exponent = 0;
  std::uint64_t mantissa = 0;

  bool is_zero() const { return mantissa == 0; }

  friend bool operator==(const SoftFloat&, const SoftFloat&) = default;
};

struct SoftFloatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t mantissa_bits = 12;
  std::vector<SoftFloat> data;

  SoftFloat& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const SoftFloat& at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  static SoftFloatMatrix zeros(std::size_t rows, std::size_t cols,
                               std::uint32_t mantissa_bits);
  void validate() const;

  friend bool operator==(const SoftFloatMatrix&, const SoftFloatMatrix&) = default;
};

/// Round value * 2^exponent to an m-bit mantissa, ties to even. `value` must
/// fit 64 bits; exact accumulation of many terms uses the wide internal
/// variant in matmul_softfloat.
SoftFloat round_to_softfloat(bool negative, std::uint64_t value,
                             std::int64_t exponent, std::uint32_t mantissa_bits);

/// Nearest m-bit float to d (ties to even). Exact when d is representable.
SoftFloat softfloat_from_double(double d, std::uint32_t mantissa_bits);
double softfloat_to_double(const SoftFloat& f);

struct SoftFloatProduct {
  SoftFloatMatrix product;
  OpCounter counter;
  std::uint64_t n_products = 0;
  std::uint64_t chain_evaluations = 0;

  double ratio() const;
};

/// Mantissa products run through the addition-only pipeline; exponents add;
/// every output cell accumulates its terms exactly in extended integers and
/// rounds once at the end (ties to even).
SoftFloatProduct matmul_softfloat(const SoftFloatMatrix& a,
                                  const SoftFloatMatrix& b,
                                  const ChainConfig& config = {});

/// Native mantissa multiplies with the identical accumulation and rounding.
SoftFloatProduct naive_matmul_softfloat(const SoftFloatMatrix& a,
                                        const SoftFloatMatrix& b);

}  // namespace addmul

#endif
