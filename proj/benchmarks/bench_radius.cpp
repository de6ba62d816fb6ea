#include <benchmark/benchmark.h>

#include "stabrad/generate.hpp"
#include "stabrad/radius.hpp"
#include "stabrad/random.hpp"

using namespace stabrad;

namespace {

Pencil regular(Index n) {
  GenSpec spec;
  spec.n = spec.p = n;
  spec.seed = 7;
  spec.drops = {Complex(0.8, 0.3), Complex(-1.9, 0.5)};
  return generate(spec).pencil;
}

}  // namespace

static void BM_Svd(benchmark::State& state) {
  Rng rng(1);
  const CMatrix A = random_gaussian(rng, state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(svd(A));
}
BENCHMARK(BM_Svd)->Arg(4)->Arg(16)->Arg(64);

static void BM_GammaSequence(benchmark::State& state) {
  const Pencil P = regular(state.range(0));
  const LimitSpaces L = limit_spaces(P);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_sequence(P, L, 12));
}
BENCHMARK(BM_GammaSequence)->Arg(4)->Arg(8)->Arg(16);

static void BM_Oracle(benchmark::State& state) {
  const Pencil P = regular(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(d_oracle(P));
}
BENCHMARK(BM_Oracle)->Arg(4)->Arg(8)->Arg(16);

static void BM_MinimizeSr(benchmark::State& state) {
  const Pencil P = regular(state.range(0));
  const double hint = d_oracle(P).d;
  OptBudget budget;
  budget.starts = 8;
  budget.evals = 400;
  for (auto _ : state) benchmark::DoNotOptimize(minimize_sr(P, budget, hint));
}
BENCHMARK(BM_MinimizeSr)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
