#include <benchmark/benchmark.h>

#include <vector>

#include "addmul/matmul.hpp"
#include "addmul/rng.hpp"
#include "addmul/scalar_multiply.hpp"

namespace {

void BM_MultiplyChain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = addmul::trial_rng(2, 0);
  const auto values = addmul::draw_values(rng, n, 24);
  const auto input = addmul::InputVector::from_unsigned(values, 24);

  addmul::OpCounter counter;
  const auto chain = addmul::build_chain(input, addmul::ChainConfig{}, counter);
  std::uint64_t c = 3;
  for (auto _ : state) {
    addmul::OpCounter scalar_counter;
    benchmark::DoNotOptimize(addmul::multiply_chain(chain, c, scalar_counter));
    c = (c * 2862933555777941757ull + 3037000493ull) & 0xFFFFFF;
    c |= 1;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_NativeMultiplyBaseline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = addmul::trial_rng(2, 0);
  const auto values = addmul::draw_values(rng, n, 24);

  std::vector<std::uint64_t> out(n);
  std::uint64_t c = 3;
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = c * values[i];
    }
    benchmark::DoNotOptimize(out.data());
    c = (c * 2862933555777941757ull + 3037000493ull) & 0xFFFFFF;
    c |= 1;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_MatmulDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = addmul::trial_rng(3, 0);

  addmul::DenseMatrix a;
  a.rows = a.cols = n;
  a.bits = 12;
  addmul::DenseMatrix b = a;
  const std::uint64_t span = (1u << 12) - 1;
  a.data.resize(n * n);
  b.data.resize(n * n);
  for (auto& v : a.data) {
    v = static_cast<std::int64_t>(addmul::uniform_below(rng, span));
  }
  for (auto& v : b.data) {
    v = static_cast<std::int64_t>(addmul::uniform_below(rng, span));
  }

  for (auto _ : state) {
    benchmark::DoNotOptimize(addmul::matmul_dense(a, b));
  }
}

void BM_MatmulNaive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = addmul::trial_rng(3, 0);

  addmul::DenseMatrix a;
  a.rows = a.cols = n;
  a.bits = 12;
  addmul::DenseMatrix b = a;
  const std::uint64_t span = (1u << 12) - 1;
  a.data.resize(n * n);
  b.data.resize(n * n);
  for (auto& v : a.data) {
    v = static_cast<std::int64_t>(addmul::uniform_below(rng, span));
  }
  for (auto& v : b.data) {
    v = static_cast<std::int64_t>(addmul::uniform_below(rng, span));
  }

  for (auto _ : state) {
    benchmark::DoNotOptimize(addmul::naive_matmul_dense(a, b));
  }
}

}  // namespace

BENCHMARK(BM_MultiplyChain)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_NativeMultiplyBaseline)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_MatmulDense)->Arg(32)->Arg(64);
BENCHMARK(BM_MatmulNaive)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
