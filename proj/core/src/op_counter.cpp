#include "addmul/op_counter.hpp"

#include <sstream>

#include "addmul/errors.hpp"

namespace addmul {

void OpCounter::bump(AddKind kind) {
  switch (kind) {
    case AddKind::Accumulate: ++accumulate_adds; break;
    case AddKind::BaseCase: ++base_case_adds; break;
    case AddKind::OutputAccumulate: ++output_accumulate_adds; break;
  }
  ++shift_add_calls;
}

namespace {

void checked_add(std::uint64_t& dst, std::uint64_t src) {
  if (__builtin_add_overflow(dst, src, &dst)) {
    throw width_error("operation counter overflow");
  }
}

}  // namespace

void OpCounter::merge(const OpCounter& other) {
  checked_add(accumulate_adds, other.accumulate_adds);
  checked_add(base_case_adds, other.base_case_adds);
  checked_add(copies, other.copies);
  checked_add(shifts, other.shifts);
  checked_add(bookkeeping_ops, other.bookkeeping_ops);
  checked_add(output_accumulate_adds, other.output_accumulate_adds);
  checked_add(shift_add_calls, other.shift_add_calls);
}

double OpCounter::additions_per_multiplication(std::uint64_t n_products) const {
  if (n_products == 0) {
    throw std::invalid_argument("additions_per_multiplication: n_products is 0");
  }
  return static_cast<double>(ratio_relevant_adds()) /
         static_cast<double>(n_products);
}

std::string OpCounter::to_text() const {
  std::ostringstream out;
  out << "accumulate_adds: " << accumulate_adds << '\n'
      << "base_case_adds: " << base_case_adds << '\n'
      << "copies: " << copies << '\n'
      << "shifts: " << shifts << '\n'
      << "bookkeeping_ops: " << bookkeeping_ops << '\n'
      << "output_accumulate_adds: " << output_accumulate_adds << '\n';
  return out.str();
}

std::string OpCounter::csv_header() {
  return "accumulate_adds,base_case_adds,copies,shifts,bookkeeping_ops,"
         "output_accumulate_adds,ratio";
}

std::string OpCounter::csv_row(double ratio) const {
  std::ostringstream out;
  out << accumulate_adds << ',' << base_case_adds << ',' << copies << ','
      << shifts << ',' << bookkeeping_ops << ',' << output_accumulate_adds
      << ',';
  out.setf(std::ios::fixed);
  out.precision(4);
  out << ratio;
  return out.str();
}

OpCounter merge(OpCounter a, const OpCounter& b) {
  a.merge(b);
  return a;
}

}  // namespace addmul
