#include <benchmark/benchmark.h>

#include "addmul/chain.hpp"
#include "addmul/rng.hpp"

namespace {

void BM_BuildChain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const bool aligned = state.range(1) == 1;
  auto rng = addmul::trial_rng(1, 0);
  const auto values = addmul::draw_values(rng, n, 24);
  const auto input = addmul::InputVector::from_unsigned(values, 24);

  addmul::ChainConfig config;
  config.align = aligned;
  for (auto _ : state) {
    addmul::OpCounter counter;
    benchmark::DoNotOptimize(addmul::build_chain(input, config, counter));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_BuildChain)->ArgsProduct({{1000, 10000, 100000}, {0, 1}});
