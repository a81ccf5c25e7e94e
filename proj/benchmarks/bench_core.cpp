/// Microbenchmarks for the hot paths: state construction, the eigensolve,
/// residual/Jacobian assembly at production resolution, and a full Newton
/// solve at a small grid. Run manually: build/benchmarks/solwave_bench.

#include <benchmark/benchmark.h>

#include <cmath>

#include "solwave/diagnostics.hpp"
#include "solwave/wavesolve.hpp"

namespace {

using namespace solwave;

ShearProfile curved_profile() {
  ShearProfile p;
  p.g = 1.0;
  p.c = 1.6;
  p.d = 1.0;
  p.u = UProfile::expression("0.15*sin(1.7*y) + 0.05*y");
  return p;
}

void BM_BuildAsymptoticState(benchmark::State& state) {
  const auto profile = curved_profile();
  for (auto _ : state)
    benchmark::DoNotOptimize(build_asymptotic_state(profile, 257));
}
BENCHMARK(BM_BuildAsymptoticState)->Unit(benchmark::kMicrosecond);

void BM_SolveSturm(benchmark::State& state) {
  const auto st = build_asymptotic_state(curved_profile(), 513);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sturm(st));
}
BENCHMARK(BM_SolveSturm)->Unit(benchmark::kMicrosecond);

struct SolverFixture {
  AsymptoticState state;
  SturmSpectrum spectrum;
  StripGrid grid;
  HeightField seed;

  SolverFixture(int np, int nq)
      : state(build_asymptotic_state(curved_profile(), np)) {
    spectrum = solve_sturm(state);
    grid = StripGrid::half(40.0 / std::sqrt(spectrum.mu[0]), nq, np,
                           state.flux);
    seed = initial_guess(state, spectrum, 0.08, grid);
  }
};

void BM_ResidualAssembly(benchmark::State& state) {
  static const SolverFixture f(65, 801);
  for (auto _ : state)
    benchmark::DoNotOptimize(residual(f.seed, f.state, 0.0));
}
BENCHMARK(BM_ResidualAssembly)->Unit(benchmark::kMillisecond);

void BM_JacobianAssembly(benchmark::State& state) {
  static const SolverFixture f(65, 801);
  for (auto _ : state)
    benchmark::DoNotOptimize(jacobian(f.seed, f.state, 0.0));
}
BENCHMARK(BM_JacobianAssembly)->Unit(benchmark::kMillisecond);

void BM_NewtonSolve(benchmark::State& state) {
  static const SolverFixture f(33, 301);
  for (auto _ : state) {
    auto sol = newton_solve(f.seed, f.state, 0.0);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_NewtonSolve)->Unit(benchmark::kMillisecond);

void BM_Diagnostics(benchmark::State& state) {
  static const SolverFixture f(33, 301);
  static const WaveSolution sol = newton_solve(f.seed, f.state, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_diagnostics(sol, &f.spectrum));
}
BENCHMARK(BM_Diagnostics)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
