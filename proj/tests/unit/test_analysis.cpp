#include "crowdflow/analysis.hpp"
#include "crowdflow/dg_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <optional>

using namespace crowdflow;

namespace {

struct Run {
  Mesh mesh;
  ModelParams params;
  VelocityField velocity;
  std::optional<DgFunction> rho;
  SolveReport report;
};

// Heap-allocated so the DgFunction keeps a stable mesh address.
std::unique_ptr<Run> solve_interval(int n, double eps, double a, double b) {
  auto run = std::make_unique<Run>();
  run->mesh = build_interval_mesh(n);
  run->params = make_interval_params(eps, a, b);
  run->velocity = resolve_velocity(run->mesh, run->params);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  auto [rho, rep] = solve_stationary(run->params, run->mesh, run->velocity, cfg);
  run->rho.emplace(std::move(rho));
  run->report = rep;
  return run;
}

}  // namespace

TEST(Analysis, DiscreteInterfaceFluxIsConstant) {
  const auto r = solve_interval(80, 0.05, 0.3, 0.45);
  ASSERT_TRUE(r->report.converged);
  const auto f = interface_fluxes(*r->rho, r->params, r->velocity, 10.0);
  ASSERT_EQ(f.size(), 79u);
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  EXPECT_LT(*hi - *lo, 1e-8);
  // ... and equal to the boundary fluxes.
  EXPECT_NEAR(f.front(), r->report.flux.inflow_total, 1e-8);
  EXPECT_NEAR(f.front(), r->report.flux.outflow_total, 1e-8);
  // Cell fluxes agree with it to discretization accuracy.
  EXPECT_NEAR(r->report.flux.mean_flux, f.front(), 1e-3);
  EXPECT_LT(r->report.flux.flux_stddev, 1e-2);
}

TEST(Analysis, OneDimensionalOnlyHelpers) {
  CorridorSpec spec;
  spec.nx = 4;
  spec.ny = 2;
  const Mesh mesh = build_corridor_mesh(spec);
  const auto rho = DgFunction::constant(mesh, 0.5);
  ModelParams p;
  p.segments = {BoundarySegment::wall("wall")};
  const auto vel = resolve_constant(mesh, {1.0, 0.0});
  EXPECT_THROW(cell_fluxes(rho, p, vel), std::invalid_argument);
  EXPECT_THROW(interface_fluxes(rho, p, vel, 10.0), std::invalid_argument);
}

TEST(Analysis, FluxOfConstantState) {
  const Mesh mesh = build_interval_mesh(10);
  const auto p = make_interval_params(0.1, 0.3, 0.7);
  const auto vel = resolve_velocity(mesh, p);
  const auto r = compute_flux(DgFunction::constant(mesh, 0.3), p, vel);
  EXPECT_NEAR(r.mean_flux, 0.21, 1e-15);
  EXPECT_NEAR(r.inflow_total, 0.21, 1e-15);
  EXPECT_NEAR(r.outflow_total, 0.21, 1e-15);
  EXPECT_NEAR(r.balance_residual, 0.0, 1e-15);
  EXPECT_NEAR(r.flux_stddev, 0.0, 1e-15);
}

TEST(Analysis, EstimatesOnRegimes) {
  // Maximal current regime.
  {
    const auto r = solve_interval(200, 0.1, 0.6, 0.7);
    const auto e = check_phase_estimates(*r->rho, r->params, r->velocity);
    EXPECT_TRUE(e.energy.applicable);
    EXPECT_TRUE(e.maximal_current.applicable);
    EXPECT_TRUE(e.maximal_flux.applicable);
    EXPECT_FALSE(e.boundary_layer.applicable);
    EXPECT_TRUE(e.all_pass());
    EXPECT_GE(e.maximal_flux.bound, 0.25 - 1e-3);
  }
  // Influx limited.
  {
    const auto r = solve_interval(200, 0.1, 0.2, 0.4);
    const auto e = check_phase_estimates(*r->rho, r->params, r->velocity);
    EXPECT_FALSE(e.maximal_current.applicable);
    EXPECT_TRUE(e.boundary_layer.applicable);
    EXPECT_TRUE(e.bounds_applicable);
    EXPECT_TRUE(e.all_pass());
    EXPECT_DOUBLE_EQ(e.bounds_min, 0.2);
    EXPECT_DOUBLE_EQ(e.bounds_max, 0.6);
  }
}

TEST(Analysis, EstimatesDetectViolations) {
  // A density far from the bulk value fails the deviation estimate.
  const Mesh mesh = build_interval_mesh(20);
  const auto p = make_interval_params(0.01, 0.2, 0.4);
  const auto vel = resolve_velocity(mesh, p);
  const auto e = check_phase_estimates(DgFunction::constant(mesh, 0.7), p, vel);
  EXPECT_TRUE(e.boundary_layer.applicable);
  EXPECT_FALSE(e.boundary_layer.pass);
  EXPECT_FALSE(e.bounds_pass);
  EXPECT_FALSE(e.all_pass());
}

TEST(Analysis, BoundsNotApplicableForLinearFieldIn2D) {
  CorridorSpec spec;
  spec.nx = 4;
  spec.ny = 2;
  spec.doors = {{Side::Left, 0.0, 0.5, "in"}, {Side::Right, 0.0, 0.5, "out"}};
  const Mesh mesh = build_corridor_mesh(spec);
  ModelParams p;
  p.segments = {BoundarySegment::inflow("in", 0.6), BoundarySegment::outflow("out", 0.9),
                BoundarySegment::wall("wall")};
  p.velocity = LinearPotentialVelocity{{1.0, 0.0}};
  const auto vel = resolve_velocity(mesh, p);
  const auto e = check_phase_estimates(DgFunction::constant(mesh, 0.95), p, vel);
  EXPECT_FALSE(e.bounds_applicable);
  EXPECT_TRUE(e.all_pass());
}

TEST(Analysis, Classification) {
  EXPECT_EQ(classify(0.2499, 0.5), Phase::MaximalCurrent);
  EXPECT_EQ(classify(0.26, 0.3), Phase::MaximalCurrent);
  EXPECT_EQ(classify(0.16, 0.2), Phase::InfluxLimited);
  EXPECT_EQ(classify(0.16, 0.8), Phase::OutfluxLimited);
  EXPECT_EQ(classify(0.2499, 0.5, 1e-5), Phase::OutfluxLimited);
  EXPECT_STREQ(phase_name(Phase::MaximalCurrent), "maximal_current");
  EXPECT_STREQ(phase_name(Phase::InfluxLimited), "influx_limited");
  EXPECT_STREQ(phase_name(Phase::OutfluxLimited), "outflux_limited");
}
