#ifndef ADDMUL_ERRORS_HPP
#define ADDMUL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace addmul {

/// Malformed input text (matrix files, headers). `line` is 1-based, 0 if unknown.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error(line ? std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Operand shapes do not admit the requested operation.
class dimension_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value exceeds its declared bit width, or an accumulator would overflow.
class width_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace addmul

#endif
