#include <benchmark/benchmark.h>

#include <cmath>

#include "ehd/poisson.hpp"
#include "ehd/sim.hpp"
#include "ehd/stationary.hpp"
#include "ehd/transport.hpp"

using namespace ehd;

namespace {

ScalarField bump(const Grid2D& g) {
  return ScalarField::sample(g, [](double x, double y) { return std::exp(-20.0 * ((x - 0.4) * (x - 0.4) + (y - 0.5) * (y - 0.5))); });
}

void BM_PoissonCg(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const PoissonSolver solver(g, SolverKind::kConjugateGradient, SolveOptions{1e-10, 20000});
  const ScalarField rhs = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(solver.dirichlet(rhs));
}

void BM_PoissonCholesky(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const PoissonSolver solver(g, SolverKind::kCholesky, SolveOptions{1e-10, 20000});
  const ScalarField rhs = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(solver.dirichlet(rhs));
}

void BM_ChargeStep(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const StationarySolution eq = solve_pb(0.05, 0.1, g);
  ChargeStepper stepper(g);
  const ChargePair c{bump(g), eq.w};
  const MacVectorField u(g);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(c, eq.phi, u, 1e-3));
}

void BM_FullStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.nx = cfg.ny = static_cast<int>(state.range(0));
  cfg.preset = "vortex-charge";
  const SystemState initial = make_initial_state(cfg);
  Simulator sim(initial.grid());
  for (auto _ : state) {
    SystemState s = initial;
    sim.step(s, 1e-3);
    benchmark::DoNotOptimize(s.t);
  }
}

void BM_StationarySolve(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_pb(0.05, 0.1, g));
}

}  // namespace

BENCHMARK(BM_PoissonCg)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PoissonCholesky)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChargeStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StationarySolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
