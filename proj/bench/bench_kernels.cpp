// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to taste.
#include <benchmark/benchmark.h>

#include "fuzzylimit/eval.hpp"
#include "fuzzylimit/limit.hpp"
#include "fuzzylimit/parser.hpp"

using namespace fuzzylimit;

namespace {

const Expr& rational() {
  static const Expr e = parse("(x^3 - 4)/(x^2 + 1)");
  return e;
}

void BM_EvalSerial(benchmark::State& st) {
  const FuzzyNumber x = from_triangular(0, 0.5, 1, AlphaGrid{static_cast<int>(st.range(0))});
  for (auto _ : st) benchmark::DoNotOptimize(eval_fuzzy_serial(rational(), x));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_EvalParallel(benchmark::State& st) {
  const FuzzyNumber x = from_triangular(0, 0.5, 1, AlphaGrid{static_cast<int>(st.range(0))});
  for (auto _ : st) benchmark::DoNotOptimize(eval_fuzzy(rational(), x));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

LimitConfig limit_cfg(int levels) {
  LimitConfig cfg;
  cfg.grid = AlphaGrid{levels};
  return cfg;
}

void BM_LimitSerial(benchmark::State& st) {
  const LimitConfig cfg = limit_cfg(static_cast<int>(st.range(0)));
  const auto ap = ApproachSpec::at(from_triangular(0, 0.5, 1, cfg.grid));
  for (auto _ : st) benchmark::DoNotOptimize(fuzzy_limit_serial(rational(), ap, EvalMode::paper(), cfg));
}

void BM_LimitParallel(benchmark::State& st) {
  const LimitConfig cfg = limit_cfg(static_cast<int>(st.range(0)));
  const auto ap = ApproachSpec::at(from_triangular(0, 0.5, 1, cfg.grid));
  for (auto _ : st) benchmark::DoNotOptimize(fuzzy_limit(rational(), ap, EvalMode::paper(), cfg));
}

}  // namespace

BENCHMARK(BM_EvalSerial)->Arg(101)->Arg(1001);
BENCHMARK(BM_EvalParallel)->Arg(101)->Arg(1001);
BENCHMARK(BM_LimitSerial)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LimitParallel)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
