#include "addmul/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "addmul/errors.hpp"

namespace addmul {

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        return true;
      }
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) {
      throw parse_error(line_no + 1, std::string("expected ") + what);
    }
    return line;
  }
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) {
    tokens.push_back(token);
  }
  return tokens;
}

template <typename T>
T parse_number(const std::string& token, std::size_t line_no) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw parse_error(line_no, "malformed number '" + token + "'");
  }
  return value;
}

void check_value_width(std::int64_t v, std::uint32_t bits, std::size_t line_no) {
  if (bits < 1 || bits > 63) {
    throw parse_error(line_no, "bit width must be in [1, 63]");
  }
  const std::int64_t limit = (std::int64_t{1} << bits) - 1;
  if (v > limit || v < -limit) {
    throw width_error("line " + std::to_string(line_no) +
                      ": value exceeds declared bit width");
  }
}

DenseMatrix read_dense(LineReader& reader, const std::vector<std::string>& header) {
  if (header.size() != 4) {
    throw parse_error(reader.line_no, "dense header needs: dense <rows> <cols> <bits>");
  }
  DenseMatrix m;
  m.rows = parse_number<std::size_t>(header[1], reader.line_no);
  m.cols = parse_number<std::size_t>(header[2], reader.line_no);
  m.bits = parse_number<std::uint32_t>(header[3], reader.line_no);
  if (m.bits < 1 || m.bits > 63) {
    throw parse_error(reader.line_no, "bit width must be in [1, 63]");
  }
  m.data.reserve(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto tokens = tokenize(reader.require("matrix row"));
    if (tokens.size() != m.cols) {
      throw parse_error(reader.line_no,
                        "expected " + std::to_string(m.cols) + " values, got " +
                            std::to_string(tokens.size()));
    }
    for (const auto& token : tokens) {
      const auto v = parse_number<std::int64_t>(token, reader.line_no);
      check_value_width(v, m.bits, reader.line_no);
      m.data.push_back(v);
    }
  }
  return m;
}

SparseTriples read_sparse(LineReader& reader, const std::vector<std::string>& header) {
  if (header.size() != 5) {
    throw parse_error(reader.line_no,
                      "sparse header needs: sparse <rows> <cols> <bits> <nnz>");
  }
  SparseTriples m;
  m.rows = parse_number<std::size_t>(header[1], reader.line_no);
  m.cols = parse_number<std::size_t>(header[2], reader.line_no);
  m.bits = parse_number<std::uint32_t>(header[3], reader.line_no);
  const auto nnz = parse_number<std::size_t>(header[4], reader.line_no);
  if (m.bits < 1 || m.bits > 63) {
    throw parse_error(reader.line_no, "bit width must be in [1, 63]");
  }
  m.entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    const auto tokens = tokenize(reader.require("sparse entry"));
    if (tokens.size() != 3) {
      throw parse_error(reader.line_no, "expected 'i j v'");
    }
    SparseTriples::Entry e;
    e.row = parse_number<std::size_t>(tokens[0], reader.line_no);
    e.col = parse_number<std::size_t>(tokens[1], reader.line_no);
    e.value = parse_number<std::int64_t>(tokens[2], reader.line_no);
    if (e.row >= m.rows || e.col >= m.cols) {
      throw parse_error(reader.line_no, "coordinate out of range");
    }
    if (e.value == 0) {
      throw parse_error(reader.line_no, "explicit zero entry");
    }
    check_value_width(e.value, m.bits, reader.line_no);
    m.entries.push_back(e);
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& err) {
    throw parse_error(reader.line_no, err.what());
  }
  return m;
}

SoftFloat parse_triple(const std::string& token, std::uint32_t mantissa_bits,
                       std::size_t line_no) {
  const auto first_colon = token.find(':');
  const auto second_colon =
      first_colon == std::string::npos ? std::string::npos
                                       : token.find(':', first_colon + 1);
  if (first_colon == std::string::npos || second_colon == std::string::npos ||
      first_colon != 1 || (token[0] != '+' && token[0] != '-')) {
    throw parse_error(line_no, "malformed float triple '" + token + "'");
  }
  SoftFloat f;
  f.negative = token[0] == '-';
  f.exponent = parse_number<std::int32_t>(
      token.substr(first_colon + 1, second_colon - first_colon - 1), line_no);
  f.mantissa = parse_number<std::uint64_t>(token.substr(second_colon + 1), line_no);
  if (f.mantissa == 0) {
    if (f.exponent != 0 || f.negative) {
      throw parse_error(line_no, "zero must be written +:0:0");
    }
    return f;
  }
  const std::uint64_t lo = std::uint64_t{1} << (mantissa_bits - 1);
  const std::uint64_t hi = std::uint64_t{1} << mantissa_bits;
  if (f.mantissa < lo || f.mantissa >= hi) {
    throw width_error("line " + std::to_string(line_no) +
                      ": mantissa outside normalized range");
  }
  return f;
}

SoftFloatMatrix read_float(LineReader& reader, const std::vector<std::string>& header) {
  if (header.size() != 4) {
    throw parse_error(reader.line_no,
                      "float header needs: float <rows> <cols> <mantissa_bits>");
  }
  SoftFloatMatrix m;
  m.rows = parse_number<std::size_t>(header[1], reader.line_no);
  m.cols = parse_number<std::size_t>(header[2], reader.line_no);
  m.mantissa_bits = parse_number<std::uint32_t>(header[3], reader.line_no);
  if (m.mantissa_bits < 2 || m.mantissa_bits > 32) {
    throw parse_error(reader.line_no, "mantissa width must be in [2, 32]");
  }
  m.data.reserve(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto tokens = tokenize(reader.require("matrix row"));
    if (tokens.size() != m.cols) {
      throw parse_error(reader.line_no,
                        "expected " + std::to_string(m.cols) + " values, got " +
                            std::to_string(tokens.size()));
    }
    for (const auto& token : tokens) {
      m.data.push_back(parse_triple(token, m.mantissa_bits, reader.line_no));
    }
  }
  return m;
}

}  // namespace

AnyMatrix read_matrix(std::istream& in) {
  LineReader reader{in};
  const auto header = tokenize(reader.require("matrix header"));
  if (header[0] == "dense") {
    return read_dense(reader, header);
  }
  if (header[0] == "sparse") {
    return read_sparse(reader, header);
  }
  if (header[0] == "float") {
    return read_float(reader, header);
  }
  throw parse_error(reader.line_no, "unknown matrix kind '" + header[0] + "'");
}

AnyMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw parse_error(0, path + ": cannot open");
  }
  try {
    return read_matrix(in);
  } catch (const parse_error& err) {
    throw parse_error(err.line(), path + ":" + err.what());
  }
}

namespace {

void write_dense(std::ostream& out, const DenseMatrix& m) {
  out << "dense " << m.rows << ' ' << m.cols << ' ' << m.bits << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      out << (c ? " " : "") << m.at(r, c);
    }
    out << '\n';
  }
}

void write_sparse(std::ostream& out, const SparseTriples& m) {
  out << "sparse " << m.rows << ' ' << m.cols << ' ' << m.bits << ' '
      << m.entries.size() << '\n';
  for (const auto& e : m.entries) {
    out << e.row << ' ' << e.col << ' ' << e.value << '\n';
  }
}

void write_float(std::ostream& out, const SoftFloatMatrix& m) {
  out << "float " << m.rows << ' ' << m.cols << ' ' << m.mantissa_bits << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const SoftFloat& f = m.at(r, c);
      out << (c ? " " : "") << (f.negative ? '-' : '+') << ':' << f.exponent
          << ':' << f.mantissa;
    }
    out << '\n';
  }
}

}  // namespace

void write_matrix(std::ostream& out, const AnyMatrix& matrix) {
  std::visit(
      [&out](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DenseMatrix>) {
          write_dense(out, m);
        } else if constexpr (std::is_same_v<T, SparseTriples>) {
          write_sparse(out, m);
        } else {
          write_float(out, m);
        }
      },
      matrix);
}

void write_matrix_file(const std::string& path, const AnyMatrix& matrix) {
  std::ofstream out(path);
  if (!out) {
    throw parse_error(0, path + ": cannot open for writing");
  }
  write_matrix(out, matrix);
}

}  // namespace addmul
