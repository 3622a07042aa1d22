#ifndef ADDMUL_MATRIX_IO_HPP
#define ADDMUL_MATRIX_IO_HPP

#include <iosfwd>
#include <string>
#include <variant>

#include "addmul/matmul.hpp"
#include "addmul/soft_float.hpp"

namespace addmul {

/// Matrix text formats, one per representation:
///   dense <rows> <cols> <bits>        one line per row, signed decimals
///   sparse <rows> <cols> <bits> <nnz> one `i j v` line per entry, 0-based
///   float <rows> <cols> <mantissa_bits>
///                                     one line per row of s:e:m triples
///                                     (sign +/-, decimal exponent, decimal
///                                     mantissa; zero is +:0:0)
using AnyMatrix = std::variant<DenseMatrix, SparseTriples, SoftFloatMatrix>;

AnyMatrix read_matrix(std::istream& in);
AnyMatrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const AnyMatrix& matrix);
void write_matrix_file(const std::string& path, const AnyMatrix& matrix);

}  // namespace addmul

#endif
