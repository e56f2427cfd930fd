#include <benchmark/benchmark.h>

#include "projlim/samplers.hpp"

using namespace projlim;

namespace {

const BaseMeasure kExp1 = BaseMeasure::exponential(1.0);

void BM_DirichletMarginal(benchmark::State& state) {
  const std::vector<double> shapes(static_cast<std::size_t>(state.range(0)), 1.25);
  RandomSource rng(SeededRng{1, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_dirichlet(shapes, rng));
  }
}
BENCHMARK(BM_DirichletMarginal)->Arg(4)->Arg(16)->Arg(64);

void BM_NigMarginal(benchmark::State& state) {
  const std::vector<double> shapes(static_cast<std::size_t>(state.range(0)), 0.5);
  RandomSource rng(SeededRng{2, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_nig(shapes, rng));
  }
}
BENCHMARK(BM_NigMarginal)->Arg(4)->Arg(16);

void BM_PolyaTreeLevel(benchmark::State& state) {
  const auto f = PolyaTreeFamily{kExp1, PolyaTreeSchedule::quadratic(1.0)};
  RandomSource rng(SeededRng{3, 0});
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(polya_tree_leaf_draw(f, level, rng));
  }
}
BENCHMARK(BM_PolyaTreeLevel)->Arg(4)->Arg(8);

void BM_StickBreaking(benchmark::State& state) {
  const Partition I = dyadic_quantile_partition(kExp1, 2);
  RandomSource rng(SeededRng{4, 0});
  const auto truncation = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stick_breaking_sample(5.0, kExp1, truncation, I, rng));
  }
}
BENCHMARK(BM_StickBreaking)->Arg(100)->Arg(10000);

void BM_InverseGaussian(benchmark::State& state) {
  RandomSource rng(SeededRng{5, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.inverse_gaussian(1.0, 1.0));
  }
}
BENCHMARK(BM_InverseGaussian);

void BM_ChainDraw(benchmark::State& state) {
  const MarginalFamily f = make_dirichlet(5.0, kExp1);
  std::vector<Partition> chain;
  for (int n = 1; n <= state.range(0); ++n) chain.push_back(dyadic_quantile_partition(kExp1, n));
  RandomSource rng(SeededRng{6, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_chain(f, chain, rng));
  }
}
BENCHMARK(BM_ChainDraw)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
