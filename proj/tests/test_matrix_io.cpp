#include <doctest.h>

#include <sstream>

#include "addmul/errors.hpp"
#include "addmul/matrix_io.hpp"
#include "addmul/rng.hpp"
#include "test_helpers.hpp"

using namespace addmul;

namespace {

AnyMatrix roundtrip(const AnyMatrix& m) {
  std::stringstream buffer;
  write_matrix(buffer, m);
  return read_matrix(buffer);
}

}  // namespace

TEST_CASE("dense format") {
  std::istringstream in("dense 2 3 5\n1 -2 3\n4 5 -6\n");
  const auto m = std::get<DenseMatrix>(read_matrix(in));
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
  CHECK(m.bits == 5);
  CHECK(m.data == std::vector<std::int64_t>{1, -2, 3, 4, 5, -6});

  SUBCASE("written form is canonical") {
    std::stringstream buffer;
    write_matrix(buffer, m);
    CHECK(buffer.str() == "dense 2 3 5\n1 -2 3\n4 5 -6\n");
  }
  SUBCASE("short row reports its line") {
    std::istringstream bad("dense 2 2 5\n1 2\n3\n");
    try {
      read_matrix(bad);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("width violation is distinct from parse failure") {
    std::istringstream bad("dense 1 1 3\n9\n");
    CHECK_THROWS_AS(read_matrix(bad), width_error);
  }
  SUBCASE("malformed number") {
    std::istringstream bad("dense 1 1 3\nx\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
}

TEST_CASE("sparse format") {
  std::istringstream in("sparse 3 4 6 2\n0 1 -9\n2 3 17\n");
  const auto m = std::get<SparseTriples>(read_matrix(in));
  CHECK(m.rows == 3);
  CHECK(m.entries.size() == 2);
  CHECK(m.entries[1] == SparseTriples::Entry{2, 3, 17});

  SUBCASE("duplicate coordinates rejected") {
    std::istringstream bad("sparse 2 2 4 2\n0 0 1\n0 0 2\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
  SUBCASE("out-of-range coordinate rejected") {
    std::istringstream bad("sparse 2 2 4 1\n2 0 1\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
  SUBCASE("explicit zero rejected") {
    std::istringstream bad("sparse 2 2 4 1\n0 0 0\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
}

TEST_CASE("float format") {
  std::istringstream in("float 1 3 12\n+:-11:3072 -:0:2048 +:0:0\n");
  const auto m = std::get<SoftFloatMatrix>(read_matrix(in));
  CHECK(m.mantissa_bits == 12);
  CHECK(softfloat_to_double(m.at(0, 0)) == 1.5);
  CHECK(softfloat_to_double(m.at(0, 1)) == -2048.0);
  CHECK(m.at(0, 2).is_zero());

  SUBCASE("denormal mantissa rejected") {
    std::istringstream bad("float 1 1 12\n+:0:7\n");
    CHECK_THROWS_AS(read_matrix(bad), width_error);
  }
  SUBCASE("non-canonical zero rejected") {
    std::istringstream bad("float 1 1 12\n-:3:0\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
  SUBCASE("malformed triple rejected") {
    std::istringstream bad("float 1 1 12\n2048\n");
    CHECK_THROWS_AS(read_matrix(bad), parse_error);
  }
}

TEST_CASE("unknown kind") {
  std::istringstream bad("banana 1 1 4\n");
  CHECK_THROWS_AS(read_matrix(bad), parse_error);
}

TEST_CASE("random matrices survive a write/read round trip") {
  auto rng = trial_rng(127, 0);
  for (int round = 0; round < 40; ++round) {
    const std::size_t rows = 1 + uniform_below(rng, 12);
    const std::size_t cols = 1 + uniform_below(rng, 12);
    switch (round % 3) {
      case 0: {
        const auto m = addmul_test::random_dense(rng, rows, cols, 10);
        CHECK(std::get<DenseMatrix>(roundtrip(m)) == m);
        break;
      }
      case 1: {
        const auto m = addmul_test::random_sparse(rng, rows, cols, 10, 0.3);
        CHECK(std::get<SparseTriples>(roundtrip(m)) == m);
        break;
      }
      default: {
        auto m = SoftFloatMatrix::zeros(rows, cols, 12);
        for (auto& f : m.data) {
          if (uniform_below(rng, 4) == 0) {
            continue;
          }
          f.mantissa = 2048 + uniform_below(rng, 2048);
          f.exponent = static_cast<std::int32_t>(uniform_below(rng, 101)) - 50;
          f.negative = uniform_below(rng, 2) == 1;
        }
        CHECK(std::get<SoftFloatMatrix>(roundtrip(m)) == m);
        break;
      }
    }
  }
}
