#include <doctest.h>

#include <functional>

#include "addmul/chain.hpp"
#include "addmul/errors.hpp"
#include "addmul/rng.hpp"
#include "test_helpers.hpp"

using namespace addmul;

namespace {

/// Recursively check every level invariant and the exact round-trips:
/// prefix sums of D rebuild S, and S[P[i]] << H[i] rebuilds this node's input.
void verify_node(const ChainNode& node, const std::vector<std::uint64_t>& input,
                 bool aligned) {
  const auto& lvl = node.level;
  REQUIRE(lvl.pointers.size() == input.size());
  REQUIRE(lvl.shifts.size() == input.size());
  REQUIRE(lvl.differences.size() == lvl.sorted_unique.size());

  std::uint64_t prefix = 0;
  for (std::size_t i = 0; i < lvl.sorted_unique.size(); ++i) {
    if (i > 0) {
      CHECK(lvl.sorted_unique[i] > lvl.sorted_unique[i - 1]);
    }
    if (aligned) {
      CHECK((lvl.sorted_unique[i] & 1) == 1);
    }
    prefix += lvl.differences[i];
    CHECK(prefix == lvl.sorted_unique[i]);
  }
  for (std::size_t i = 0; i < input.size(); ++i) {
    CHECK((lvl.sorted_unique[lvl.pointers[i]] << lvl.shifts[i]) == input[i]);
  }

  REQUIRE(lvl.segment_bounds.front() == 0);
  REQUIRE(lvl.segment_bounds.back() == lvl.sorted_unique.size());

  if (node.is_leaf()) {
    CHECK(node.base == lvl.differences);
    return;
  }
  REQUIRE(node.children.size() == lvl.segment_count());
  for (std::size_t s = 0; s + 1 < lvl.segment_bounds.size(); ++s) {
    const std::size_t lo = lvl.segment_bounds[s];
    const std::size_t hi = lvl.segment_bounds[s + 1];
    std::vector<std::uint64_t> lane(lvl.differences.begin() + lo,
                                    lvl.differences.begin() + hi);
    if (s > 0) {
      lane[0] = lvl.sorted_unique[lo];
    }
    verify_node(node.children[s], lane, aligned);
  }
}

void verify_chain(const DiffChain& chain) {
  if (chain.degenerate()) {
    return;
  }
  verify_node(chain.root(), chain.input().values, chain.config().align);
}

}  // namespace

TEST_CASE("align divides out powers of two") {
  const std::vector<std::uint64_t> v{3, 7, 2, 12, 8, 6};
  const auto [odd, shifts] = align(v);
  CHECK(odd == std::vector<std::uint64_t>{3, 7, 1, 3, 1, 3});
  CHECK(shifts == std::vector<std::uint8_t>{0, 0, 1, 2, 3, 1});

  CHECK(align(std::vector<std::uint64_t>{1}).first ==
        std::vector<std::uint64_t>{1});
  CHECK(align(std::vector<std::uint64_t>{1}).second ==
        std::vector<std::uint8_t>{0});

  const auto [big_odd, big_shift] =
      align(std::vector<std::uint64_t>{std::uint64_t{1} << 31});
  CHECK(big_odd == std::vector<std::uint64_t>{1});
  CHECK(big_shift == std::vector<std::uint8_t>{31});

  CHECK_THROWS_AS(align(std::vector<std::uint64_t>{4, 0, 2}),
                  std::invalid_argument);
}

TEST_CASE("sort_dedup matches the worked example and the quadratic oracle") {
  OpCounter counter;
  const std::vector<std::uint64_t> v{3, 1, 4, 1, 5, 9};
  const auto [sorted, pointers] = sort_dedup(v, counter);
  CHECK(sorted == std::vector<std::uint64_t>{1, 3, 4, 5, 9});
  CHECK(pointers == std::vector<std::uint32_t>{1, 0, 2, 0, 3, 4});
  CHECK(counter.bookkeeping_ops > 0);
  CHECK(counter.ratio_relevant_adds() == 0);

  SUBCASE("all duplicates") {
    const auto [s, p] = sort_dedup(std::vector<std::uint64_t>{7, 7, 7}, counter);
    CHECK(s == std::vector<std::uint64_t>{7});
    CHECK(p == std::vector<std::uint32_t>{0, 0, 0});
  }
  SUBCASE("empty input is valid") {
    const auto [s, p] = sort_dedup(std::vector<std::uint64_t>{}, counter);
    CHECK(s.empty());
    CHECK(p.empty());
  }
  SUBCASE("random multisets agree with the oracle") {
    auto rng = trial_rng(3, 0);
    for (int round = 0; round < 200; ++round) {
      const auto values = draw_values(rng, 1 + uniform_below(rng, 40), 6);
      const auto [s, p] = sort_dedup(values, counter);
      const auto [os, op] = addmul_test::dedup_oracle(values);
      CHECK(s == os);
      CHECK(p == op);
    }
  }
}

TEST_CASE("differences") {
  OpCounter counter;
  CHECK(differences(std::vector<std::uint64_t>{1, 3, 4, 5, 9}, counter) ==
        std::vector<std::uint64_t>{1, 2, 1, 1, 4});
  CHECK(differences(std::vector<std::uint64_t>{5}, counter) ==
        std::vector<std::uint64_t>{5});
  CHECK(differences(std::vector<std::uint64_t>{1, 2}, counter) ==
        std::vector<std::uint64_t>{1, 1});
  CHECK_THROWS_AS(differences(std::vector<std::uint64_t>{3, 3}, counter),
                  std::invalid_argument);
  CHECK_THROWS_AS(differences(std::vector<std::uint64_t>{4, 2}, counter),
                  std::invalid_argument);
}

TEST_CASE("build_chain walks the worked example") {
  const std::vector<std::uint64_t> v{3, 1, 4, 1, 5, 9};
  ChainConfig config;
  config.align = false;
  config.base_threshold = 1;

  OpCounter counter;
  const auto chain =
      build_chain(InputVector::from_unsigned(v, 4), config, counter);
  CHECK(counter.ratio_relevant_adds() == 0);

  const ChainNode* node = &chain.root();
  CHECK(node->level.sorted_unique == std::vector<std::uint64_t>{1, 3, 4, 5, 9});
  CHECK(node->level.differences == std::vector<std::uint64_t>{1, 2, 1, 1, 4});

  node = &node->children.at(0);
  CHECK(node->level.sorted_unique == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(node->level.differences == std::vector<std::uint64_t>{1, 1, 2});

  node = &node->children.at(0);
  CHECK(node->level.sorted_unique == std::vector<std::uint64_t>{1, 2});
  CHECK(node->level.differences == std::vector<std::uint64_t>{1, 1});

  node = &node->children.at(0);
  CHECK(node->level.sorted_unique == std::vector<std::uint64_t>{1});
  CHECK(node->is_leaf());
  CHECK(node->base == std::vector<std::uint64_t>{1});

  verify_chain(chain);
}

TEST_CASE("build_chain aligned walkthrough") {
  const std::vector<std::uint64_t> v{3, 7, 2, 12, 8, 6};
  OpCounter counter;
  const auto chain =
      build_chain(InputVector::from_unsigned(v, 4), ChainConfig{}, counter);
  CHECK(chain.root().level.sorted_unique == std::vector<std::uint64_t>{1, 3, 7});
  CHECK(chain.root().level.pointers ==
        std::vector<std::uint32_t>{1, 2, 0, 1, 0, 1});
  CHECK(chain.root().level.shifts ==
        std::vector<std::uint8_t>{0, 0, 1, 2, 3, 1});
  verify_chain(chain);
}

TEST_CASE("constant vector bottoms out immediately") {
  const std::vector<std::uint64_t> v(100, 42);
  OpCounter counter;
  const auto chain =
      build_chain(InputVector::from_unsigned(v, 6), ChainConfig{}, counter);
  CHECK(chain.root().is_leaf());
  CHECK(chain.root().level.sorted_unique.size() == 1);
  CHECK(chain.depth() == 1);
}

TEST_CASE("all-zero vector degenerates") {
  const std::vector<std::uint64_t> v(8, 0);
  OpCounter counter;
  const auto chain =
      build_chain(InputVector::from_unsigned(v, 6), ChainConfig{}, counter);
  CHECK(chain.degenerate());
}

TEST_CASE("max_diff_count") {
  CHECK(max_diff_count(4096, false) == 90);
  CHECK(max_diff_count(410, false) == 28);
  CHECK(max_diff_count(std::uint64_t{1} << 24, true) == 4096);

  SUBCASE("definition holds near the boundary") {
    for (std::uint64_t k : {1ull, 2ull, 3ull, 100ull, 4095ull, 4096ull, 4097ull}) {
      for (const bool aligned : {false, true}) {
        const auto r = max_diff_count(k, aligned);
        const auto sum = [aligned](std::uint64_t x) {
          return aligned ? x * x : x * (x + 1) / 2;
        };
        CHECK(sum(r) <= k);
        CHECK(sum(r + 1) > k);
      }
    }
  }
}

TEST_CASE("second-level list length obeys the combinatorial cap") {
  auto rng = trial_rng(17, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto values = draw_values(rng, 1000, 12);
    OpCounter counter;
    ChainConfig config;
    config.align = false;
    const auto chain =
        build_chain(InputVector::from_unsigned(values, 12), config, counter);
    if (!chain.root().is_leaf()) {
      CHECK(chain.root().children[0].level.sorted_unique.size() <= 90);
    }
  }
}

TEST_CASE("round-trip and shrinkage properties on random chains") {
  auto rng = trial_rng(23, 0);
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint32_t bits = 2 + static_cast<std::uint32_t>(uniform_below(rng, 13));
    const std::size_t n = 1 + uniform_below(rng, 300);
    auto values = draw_values(rng, n, bits);
    // sprinkle zeros and duplicates
    for (std::size_t i = 0; i < n / 8; ++i) {
      values[uniform_below(rng, n)] = 0;
      values[uniform_below(rng, n)] = values[uniform_below(rng, n)];
    }
    ChainConfig config;
    config.align = uniform_below(rng, 2) == 1;
    config.segments = 1 + static_cast<std::uint32_t>(uniform_below(rng, 4));
    config.base_threshold = 1 + uniform_below(rng, 6);

    OpCounter counter;
    const auto chain =
        build_chain(InputVector::from_unsigned(values, bits), config, counter);
    CHECK(counter.ratio_relevant_adds() == 0);
    verify_chain(chain);

    // monotone shrinkage: a child's dedup list is bounded by the largest
    // value it can be drawn from
    if (!chain.degenerate() && !chain.root().is_leaf()) {
      for (const auto& child : chain.root().children) {
        const std::uint64_t cap =
            max_diff_count(chain.root().level.sorted_unique.back(), config.align);
        CHECK(child.level.sorted_unique.size() <= cap);
      }
    }
  }
}

TEST_CASE("segmented build with g=1 is identical to unsegmented") {
  auto rng = trial_rng(29, 0);
  const auto values = draw_values(rng, 200, 10);
  const auto input = InputVector::from_unsigned(values, 10);

  OpCounter c1;
  ChainConfig unsegmented;
  const auto a = build_chain(input, unsegmented, c1);

  ChainConfig one_segment = unsegmented;
  one_segment.segments = 1;
  const auto b = build_chain(input, one_segment, c1);

  // identical structure, node by node
  const std::function<void(const ChainNode&, const ChainNode&)> compare =
      [&](const ChainNode& x, const ChainNode& y) {
        CHECK(x.level.sorted_unique == y.level.sorted_unique);
        CHECK(x.level.pointers == y.level.pointers);
        CHECK(x.level.shifts == y.level.shifts);
        CHECK(x.level.differences == y.level.differences);
        CHECK(x.level.segment_bounds == y.level.segment_bounds);
        CHECK(x.base == y.base);
        REQUIRE(x.children.size() == y.children.size());
        for (std::size_t i = 0; i < x.children.size(); ++i) {
          compare(x.children[i], y.children[i]);
        }
      };
  compare(a.root(), b.root());
}

TEST_CASE("segmented build keeps the global differences partitioned") {
  auto rng = trial_rng(31, 0);
  const auto values = draw_values(rng, 1000, 12);
  ChainConfig config;
  config.align = false;
  config.segments = 10;

  OpCounter counter;
  const auto chain =
      build_chain(InputVector::from_unsigned(values, 12), config, counter);
  const auto& root = chain.root().level;
  REQUIRE(root.segment_count() == 10);

  // the recorded differences are the global first differences
  std::uint64_t prefix = 0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < root.size(); ++i) {
    prefix += root.differences[i];
    CHECK(prefix == root.sorted_unique[i]);
    total += root.differences[i];
  }
  CHECK(total == root.sorted_unique.back());
  CHECK(total < (1u << 12));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(InputVector::from_unsigned(std::vector<std::uint64_t>{16}, 4),
                  width_error);
  CHECK_THROWS_AS(InputVector::from_signed(std::vector<std::int64_t>{-16}, 4),
                  width_error);
  CHECK_THROWS_AS(
      InputVector::from_unsigned(std::vector<std::uint64_t>{1}, 33),
      width_error);

  const auto v =
      InputVector::from_signed(std::vector<std::int64_t>{-3, 0, 5}, 4);
  CHECK(v.values == std::vector<std::uint64_t>{3, 5});
  CHECK(v.zero_positions == std::vector<std::size_t>{1});
  CHECK(v.signs == std::vector<std::int8_t>{-1, 1});
}
