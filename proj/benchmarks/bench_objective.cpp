#include "common.hpp"

#include <benchmark/benchmark.h>

namespace binoed::bench {
namespace {

void sizes(benchmark::internal::Benchmark* b) {
  for (int ell : {50, 100, 200}) {
    for (int m : {500, 1000, 2000}) b->Args({ell, m});
  }
}

void BM_Objective(benchmark::State& state) {
  LowRankObjective obj = random_objective(state.range(0), state.range(1));
  Vector w = interior_design(obj.m());
  for (auto _ : state) benchmark::DoNotOptimize(obj.objective(w));
}
BENCHMARK(BM_Objective)->Apply(sizes)->Unit(benchmark::kMicrosecond);

void BM_GradientCold(benchmark::State& state) {
  LowRankObjective obj = random_objective(state.range(0), state.range(1));
  Vector w = interior_design(obj.m());
  for (auto _ : state) benchmark::DoNotOptimize(obj.gradient(w));
}
BENCHMARK(BM_GradientCold)->Apply(sizes)->Unit(benchmark::kMicrosecond);

// Gradient on a workspace that already holds L^{-1} R from a Hessian product.
void BM_GradientReuse(benchmark::State& state) {
  LowRankObjective obj = random_objective(state.range(0), state.range(1));
  Vector w = interior_design(obj.m());
  Vector v = Vector::Ones(obj.m());
  for (auto _ : state) {
    state.PauseTiming();
    Workspace ws(obj, w);
    ws.hessian_matvec(v);
    state.ResumeTiming();
    benchmark::DoNotOptimize(ws.gradient());
  }
}
BENCHMARK(BM_GradientReuse)->Apply(sizes)->Unit(benchmark::kMicrosecond);

void BM_HessianMatvec(benchmark::State& state) {
  LowRankObjective obj = random_objective(state.range(0), state.range(1));
  Workspace ws(obj, interior_design(obj.m()));
  Vector v = Vector::Ones(obj.m());
  ws.hessian_matvec(v);
  for (auto _ : state) benchmark::DoNotOptimize(ws.hessian_matvec(v));
}
BENCHMARK(BM_HessianMatvec)->Apply(sizes)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace binoed::bench
