#include <benchmark/benchmark.h>

#include <numbers>

#include "vortexflow/dynamics.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/meanfield.hpp"
#include "vortexflow/poisson.hpp"
#include "vortexflow/reference.hpp"

using namespace vortexflow;

static void BM_PoissonSolve(benchmark::State& state) {
  const ScalarField w = gaussian_field(make_grid(static_cast<int>(state.range(0)), 6.0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_streamfunction(w));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_PoissonSolve)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNLogN);

static void BM_Functionals(benchmark::State& state) {
  const ScalarField w = gaussian_field(make_grid(static_cast<int>(state.range(0)), 6.0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_functionals(w));
}
BENCHMARK(BM_Functionals)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void step_bench(benchmark::State& state, const ModelSpec& model) {
  const Grid g = make_grid(static_cast<int>(state.range(0)), 8.0);
  const FlowState s(sample_on_grid(canonical_solution(-1.0, 4.0 * std::numbers::pi), g));
  const double dt = cfl_dt(s, model);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, model, dt));
}

static void BM_StepNavierStokes(benchmark::State& state) { step_bench(state, navier_stokes_model(0.1)); }
BENCHMARK(BM_StepNavierStokes)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_StepConstrainedEI(benchmark::State& state) { step_bench(state, constrained_EI_model(0.1)); }
BENCHMARK(BM_StepConstrainedEI)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Shoot(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(shoot(-1.0, 4.0 * std::numbers::pi, 0.5));
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMicrosecond);

static void BM_CanonicalSolution(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(canonical_solution(-1.0, 6.0 * std::numbers::pi));
}
BENCHMARK(BM_CanonicalSolution)->Unit(benchmark::kMillisecond);

static void BM_FpExact(benchmark::State& state) {
  const ScalarField w = gaussian_field(make_grid(static_cast<int>(state.range(0)), 8.0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fp_exact(w, DriftCurve::constant(1.0), 0.5, 1.0, 0.0));
}
BENCHMARK(BM_FpExact)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
