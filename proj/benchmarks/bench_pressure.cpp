#include <benchmark/benchmark.h>

#include <cmath>

#include "plab/linalg.hpp"
#include "plab/pressure.hpp"
#include "plab/rng.hpp"
#include "plab/symbolic.hpp"

namespace {

using namespace plab;

CocycleSpec bench_spec(int d, int k) {
  SplitMix rng(0xbe9c);
  std::vector<Matrix> ms;
  for (int i = 0; i < k; ++i) {
    Matrix m(d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = 0.4 * (2.0 * rng.uniform() - 1.0);
    ms.push_back(m);
  }
  return CocycleSpec::make(Sft::full_shift(k), std::move(ms));
}

void BM_LevelSum(benchmark::State& state) {
  const auto spec = bench_spec(3, 2);
  const int n = static_cast<int>(state.range(0));
  Budgets b;
  b.n_max = n;
  for (auto _ : state) {
    PressureEngine engine(spec, b);
    benchmark::DoNotOptimize(
        engine.level_sum_log(Exponent::scalar(1.5), PressureMode::svf, n));
  }
  // cost is linear in the number of enumerated words, not in the depth
  state.SetComplexityN(static_cast<int64_t>(1) << n);
}
BENCHMARK(BM_LevelSum)->Arg(8)->Arg(12)->Arg(16)->Complexity(benchmark::oN);

void BM_CachedResweep(benchmark::State& state) {
  // second exponent on a warm cache: the dimension-bisection inner loop
  const auto spec = bench_spec(3, 2);
  Budgets b;
  b.n_max = 12;
  PressureEngine engine(spec, b);
  engine.level_sum_log(Exponent::scalar(1.0), PressureMode::svf, 12);
  double s = 1.0;
  for (auto _ : state) {
    s = (s > 2.0) ? 1.0 : s + 0.125;
    benchmark::DoNotOptimize(
        engine.level_sum_log(Exponent::scalar(s), PressureMode::svf, 12));
  }
}
BENCHMARK(BM_CachedResweep);

void BM_SingularValues(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  SplitMix rng(0x51d5);
  Matrix m(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = 2.0 * rng.uniform() - 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(m));
}
BENCHMARK(BM_SingularValues)->DenseRange(2, 8, 2);

void BM_ExteriorPower(benchmark::State& state) {
  const int d = 6;
  const int t = static_cast<int>(state.range(0));
  SplitMix rng(0xe87e);
  Matrix m(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = 2.0 * rng.uniform() - 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(exterior_power(m, t));
}
BENCHMARK(BM_ExteriorPower)->DenseRange(1, 5);

}  // namespace

BENCHMARK_MAIN();
