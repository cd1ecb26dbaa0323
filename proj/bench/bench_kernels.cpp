#include <benchmark/benchmark.h>

#include <vector>

#include "mskit/graph.hpp"
#include "mskit/kernels.hpp"

namespace {

using namespace mskit;

LoopSystem example1() {
  return {0, SequenceFamily({}, {LacunaryTerm{Support::squares(1), 1, 2, Rational(1, 2), false}})};
}

const FiniteGraph& graph() {
  static const FiniteGraph g = materialize(example1(), 16);
  return g;
}

template <auto Kernel>
void gather(benchmark::State& state) {
  const Csr& rows = graph().out();
  std::vector<BigInt> x(rows.rows(), BigInt(1) << 200), y(rows.rows());
  for (auto _ : state) {
    Kernel(rows, x, y, {});
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.rows()));
}

template <auto Kernel>
void spmv(benchmark::State& state) {
  const Csr& rows = graph().out();
  std::vector<double> x(rows.rows(), 1.0), y(rows.rows());
  for (auto _ : state) {
    Kernel(rows, x, y, 1.0);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.rows()));
}

}  // namespace

BENCHMARK(gather<&kernels::serial::gather_sum>)->Name("gather_sum/serial");
BENCHMARK(gather<&kernels::omp::gather_sum>)->Name("gather_sum/omp");
BENCHMARK(spmv<&kernels::serial::spmv>)->Name("spmv/serial");
BENCHMARK(spmv<&kernels::omp::spmv>)->Name("spmv/omp");

BENCHMARK_MAIN();
