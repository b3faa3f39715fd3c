#include "crowdflow/dg_function.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace crowdflow;

TEST(ModelParams, IntervalDefaults) {
  const ModelParams p = make_interval_params(0.05, 0.3, 0.6);
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.tau, 0.01);
  EXPECT_DOUBLE_EQ(p.initial_density, 0.5);
  ASSERT_NE(p.find_segment("inflow"), nullptr);
  EXPECT_EQ(p.find_segment("inflow")->kind, SegmentKind::Inflow);
  EXPECT_DOUBLE_EQ(p.find_segment("outflow")->rate, 0.6);
  EXPECT_EQ(p.find_segment("wall"), nullptr);
}

TEST(ModelParams, RejectsBadFields) {
  ModelParams p = make_interval_params(0.1, 0.3, 0.6);
  p.epsilon = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = make_interval_params(0.1, 1.2, 0.6);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = make_interval_params(0.1, 0.3, -0.1);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = make_interval_params(0.1, 0.3, 0.6);
  p.segments.push_back(BoundarySegment::wall("inflow"));
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = make_interval_params(0.1, 0.3, 0.6);
  p.tau = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ModelParams, RateEndpointsAreValid) {
  EXPECT_NO_THROW(make_interval_params(0.1, 0.0, 1.0).validate());
  EXPECT_NO_THROW(make_interval_params(0.1, 1.0, 0.0).validate());
}

TEST(ModelParams, DensityBounds) {
  ModelParams p;
  p.segments = {BoundarySegment::inflow("in1", 0.2), BoundarySegment::inflow("in2", 0.4),
                BoundarySegment::outflow("out1", 0.4), BoundarySegment::outflow("out2", 0.2),
                BoundarySegment::wall("wall")};
  const auto [lo, hi] = p.density_bounds();
  EXPECT_DOUBLE_EQ(lo, 0.2);
  EXPECT_DOUBLE_EQ(hi, 0.8);
  p.segments = {BoundarySegment::wall("wall")};
  EXPECT_EQ(p.density_bounds(), std::make_pair(0.0, 1.0));
}

TEST(EntropyVariables, RoundTripRandom) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> rho(1e-6, 1.0 - 1e-6), pot(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double r = rho(gen), v = pot(gen);
    EXPECT_NEAR(psi_to_rho(rho_to_psi(r, v), v), r, 1e-12);
    const auto s = EntropyState::from_density(r, v);
    EXPECT_NEAR(EntropyState::from_entropy_variable(s.psi, v).rho, r, 1e-12);
  }
}

TEST(EntropyVariables, DomainAndSaturation) {
  EXPECT_THROW(rho_to_psi(0.0, 0.0), std::domain_error);
  EXPECT_THROW(rho_to_psi(1.0, 0.0), std::domain_error);
  EXPECT_THROW(rho_to_psi(1.5, 0.0), std::domain_error);
  EXPECT_DOUBLE_EQ(psi_to_rho(0.0, 0.0), 0.5);
  EXPECT_EQ(psi_to_rho(1e6, 0.0), 1.0);
  EXPECT_EQ(psi_to_rho(-1e6, 0.0), 0.0);
  EXPECT_TRUE(std::isfinite(psi_to_rho(-800.0, 0.0)));
}

TEST(EntropyVariables, MobilityFormulasAgree) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> z(-30.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    const double psi = z(gen), v = 0.1 * z(gen);
    const double a = mobility(psi, v), b = mobility_cosh(psi, v);
    EXPECT_LE(std::abs(a - b), 1e-14 * std::abs(b)) << psi << ' ' << v;
    // A(psi, V) = rho (1 - rho).
    const double r = psi_to_rho(psi, v);
    EXPECT_NEAR(a, r * (1.0 - r), 1e-15);
  }
  EXPECT_DOUBLE_EQ(mobility(0.0, 0.0), 0.25);
}

TEST(Entropy, ConstantDensityOnInterval) {
  const Mesh mesh = build_interval_mesh(10);
  const auto rho = DgFunction::constant(mesh, 0.3);
  const auto zero = DgFunction::constant(mesh, 0.0);
  const double expected = 0.3 * std::log(0.3) + 0.7 * std::log(0.7);
  EXPECT_NEAR(entropy(rho, zero, mesh), expected, 1e-14);
}

TEST(Entropy, PotentialTermIsLinear) {
  // With rho = 1/2 and V = x the potential term is -1/2 * area * mean(x).
  CorridorSpec spec;
  spec.nx = 6;
  spec.ny = 3;
  const Mesh mesh = build_corridor_mesh(spec);
  const auto rho = DgFunction::constant(mesh, 0.5);
  const auto v = DgFunction::interpolate(mesh, [](const Eigen::Vector2d& x) { return x.x(); });
  const double area = spec.length * spec.height;
  const double expected = area * std::log(0.5) - 0.5 * area * 0.5 * spec.length;
  EXPECT_NEAR(entropy(rho, v, mesh), expected, 1e-13);
}

TEST(Entropy, ClipsSaturatedDensity) {
  const Mesh mesh = build_interval_mesh(4);
  const auto rho = DgFunction::constant(mesh, 1.0);
  const auto zero = DgFunction::constant(mesh, 0.0);
  const double e = entropy(rho, zero, mesh);
  EXPECT_TRUE(std::isfinite(e));
  EXPECT_NEAR(e, 0.0, 1e-10);
}
