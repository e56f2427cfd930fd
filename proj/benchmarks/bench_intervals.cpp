#include <benchmark/benchmark.h>

#include "projlim/base_measure.hpp"
#include "projlim/validators.hpp"

using namespace projlim;

namespace {

void BM_CommonRefinement(benchmark::State& state) {
  const auto g0 = BaseMeasure::exponential(1.0);
  const auto g1 = BaseMeasure::gaussian(0.7, 1.3);
  const int level = static_cast<int>(state.range(0));
  const Partition a = dyadic_quantile_partition(g0, level);
  const Partition b = dyadic_quantile_partition(g1, level);
  for (auto _ : state) {
    benchmark::DoNotOptimize(common_refinement(a, b));
  }
}
BENCHMARK(BM_CommonRefinement)->Arg(3)->Arg(6);

void BM_CoarseningOf(benchmark::State& state) {
  const auto g0 = BaseMeasure::exponential(1.0);
  const int level = static_cast<int>(state.range(0));
  const Partition coarse = dyadic_quantile_partition(g0, level - 1);
  const Partition fine = dyadic_quantile_partition(g0, level);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coarsening_of(coarse, fine));
  }
}
BENCHMARK(BM_CoarseningOf)->Arg(4)->Arg(8);

void BM_CellMasses(benchmark::State& state) {
  const auto g0 = BaseMeasure::gaussian(0, 1);
  const Partition I = dyadic_quantile_partition(g0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_masses(g0, I));
  }
}
BENCHMARK(BM_CellMasses)->Arg(4)->Arg(8);

void BM_KsTwoSample(benchmark::State& state) {
  RandomSource rng(SeededRng{7, 0});
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsTwoSample)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
