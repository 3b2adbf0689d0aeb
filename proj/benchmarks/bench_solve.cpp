#include "common.hpp"

#include <binoed/solve/projection.hpp>
#include <binoed/solve/solver.hpp>

#include <benchmark/benchmark.h>

namespace binoed::bench {
namespace {

void BM_Projection(benchmark::State& state) {
  const Index m = state.range(0);
  auto gen = make_stream(2, "bench-projection");
  Vector v = gaussian_vector(m, gen).array() + 0.5;
  const double budget = static_cast<double>(m) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(project_capped_simplex(v, budget));
}
BENCHMARK(BM_Projection)->RangeMultiplier(4)->Range(64, 4096);

void BM_SolveConvex(benchmark::State& state) {
  LowRankObjective obj = random_objective(40, state.range(0));
  const Index m0 = state.range(0) / 8;
  for (auto _ : state) benchmark::DoNotOptimize(solve_convex(obj, m0, SolverConfig{}).J);
}
BENCHMARK(BM_SolveConvex)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Continuation(benchmark::State& state) {
  LowRankObjective obj = random_objective(40, state.range(0));
  const Index m0 = state.range(0) / 8;
  for (auto _ : state) benchmark::DoNotOptimize(p_continuation(obj, m0, 0.05, SolverConfig{}).J_binary);
}
BENCHMARK(BM_Continuation)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace binoed::bench
