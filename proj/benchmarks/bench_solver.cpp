#include "crowdflow/dg_assembly.hpp"
#include "crowdflow/dg_solver.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/shooting.hpp"
#include "crowdflow/velocity.hpp"

#include <benchmark/benchmark.h>

using namespace crowdflow;

namespace {

ModelParams corridor_params() {
  ModelParams p;
  p.epsilon = 0.1;
  p.velocity = HarmonicPotentialVelocity{};
  p.segments = {BoundarySegment::inflow("in1", 0.2), BoundarySegment::inflow("in2", 0.4),
                BoundarySegment::outflow("out1", 0.4), BoundarySegment::outflow("out2", 0.2),
                BoundarySegment::wall("wall")};
  return p;
}

Mesh corridor(int nx) {
  CorridorSpec spec;
  spec.nx = nx;
  spec.ny = nx / 2;
  spec.doors = standard_corridor_doors();
  return build_corridor_mesh(spec);
}

void BM_AssembleSwip(benchmark::State& state) {
  const Mesh mesh = corridor(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_swip(mesh, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(mesh.num_cells()));
}
BENCHMARK(BM_AssembleSwip)->Arg(20)->Arg(80);

void BM_AssembleUpwind(benchmark::State& state) {
  const Mesh mesh = corridor(static_cast<int>(state.range(0)));
  const auto params = corridor_params();
  const auto velocity = resolve_velocity(mesh, params);
  const auto rho = DgFunction::constant(mesh, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_upwind(mesh, velocity, rho));
}
BENCHMARK(BM_AssembleUpwind)->Arg(20)->Arg(80);

void BM_HarmonicVelocity(benchmark::State& state) {
  const Mesh mesh = corridor(static_cast<int>(state.range(0)));
  const auto params = corridor_params();
  for (auto _ : state) benchmark::DoNotOptimize(resolve_velocity(mesh, params));
}
BENCHMARK(BM_HarmonicVelocity)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_CorridorStep(benchmark::State& state) {
  const Mesh mesh = corridor(static_cast<int>(state.range(0)));
  const auto params = corridor_params();
  DgSolver solver(mesh, params, resolve_velocity(mesh, params), SolverConfig{});
  DgFunction rho = DgFunction::constant(mesh, 0.5);
  for (auto _ : state) rho = solver.step(rho);
}
BENCHMARK(BM_CorridorStep)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Solve1D(benchmark::State& state) {
  const Mesh mesh = build_interval_mesh(static_cast<int>(state.range(0)));
  const auto params = make_interval_params(0.1, 0.2, 0.4);
  const auto velocity = resolve_velocity(mesh, params);
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(params, mesh, velocity, SolverConfig{}));
}
BENCHMARK(BM_Solve1D)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Shooting(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(shooting_solve(0.1, 0.2, 0.4));
}
BENCHMARK(BM_Shooting)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
