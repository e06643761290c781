// Serial reference against the OpenMP kernels.  Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "omf/catalog.hpp"
#include "omf/eval.hpp"
#include "omf/verify.hpp"

using namespace omf;

namespace {

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

GridSpec grid(const benchmark::State& state) {
  GridSpec g;
  g.policy = policy(state);
  g.dims = {2, 3, 4};
  g.trials = 200;
  return g;
}

const FunctionExpr& subject() {
  static const FunctionExpr e = make_theorem1_h(make_petz_hasegawa(0.3), 0.5, 2);
  return e;
}

void BM_Loewner(benchmark::State& state) {
  const GridSpec g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(loewner_test(subject(), g));
}

void BM_Pick(benchmark::State& state) {
  const GridSpec g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(pick_test(subject(), g));
}

void BM_Monotone(benchmark::State& state) {
  const GridSpec g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_monotone_test(subject(), g));
}

void BM_Certify(benchmark::State& state) {
  const GridSpec g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(certify(example8_sqrt_product(), g));
}

void BM_EvalBatch(benchmark::State& state) {
  GridSpec g;
  g.t_points = 100000;
  const auto ts = real_grid(g);
  for (auto _ : state) benchmark::DoNotOptimize(eval_real_batch(subject(), ts, {}, policy(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ts.size()));
}

}  // namespace

BENCHMARK(BM_Loewner)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pick)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Monotone)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
