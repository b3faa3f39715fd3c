#include "crowdflow/analytic1d.hpp"
#include "crowdflow/shooting.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace crowdflow;

TEST(Shooting, MeetsBoundaryConditions) {
  for (auto [eps, a, b] : {std::tuple{0.1, 0.2, 0.4}, {0.1, 0.4, 0.2}, {0.05, 0.7, 0.7},
                           {0.1, 0.3, 0.7}, {0.05, 0.9, 0.3}}) {
    const auto r = shooting_solve(eps, a, b);
    ASSERT_FALSE(r.x.empty());
    EXPECT_DOUBLE_EQ(r.x.front(), 0.0);
    EXPECT_DOUBLE_EQ(r.x.back(), 1.0);
    EXPECT_NEAR(a * (1.0 - r.rho.front()), r.j, 1e-8) << eps << ' ' << a << ' ' << b;
    EXPECT_NEAR(b * r.rho.back(), r.j, 1e-8) << eps << ' ' << a << ' ' << b;
    EXPECT_LT(r.landing_residual, 1e-8);
    EXPECT_LT(r.richardson_error, 1e-8);
  }
}

TEST(Shooting, AgreesWithClosedForms) {
  // Constant solution.
  EXPECT_NEAR(shooting_solve(0.1, 0.3, 0.7).j, 0.21, 1e-9);
  // j > 1/4 against the Newton flux.
  const auto n = solve_flux_newton(0.1, 0.7, 0.7);
  ASSERT_TRUE(n.has_value());
  EXPECT_NEAR(shooting_solve(0.1, 0.7, 0.7).j, n->j, 1e-9);
  // j < 1/4 against the hyperbolic profile started from the same inflow.
  const auto r = shooting_solve(0.1, 0.2, 0.4);
  const auto s = ExplicitSolution1D::from_inflow(0.1, r.j, 1.0 - r.j / 0.2);
  for (std::size_t i = 0; i < r.x.size(); i += r.x.size() / 10)
    EXPECT_NEAR(r.rho[i], s(r.x[i]), 1e-8);
}

TEST(Shooting, InfluxLimitedPlateau) {
  // Small epsilon, alpha < beta < 1 - alpha: bulk density near alpha.
  const auto r = shooting_solve(0.01, 0.2, 0.4);
  EXPECT_NEAR(r.j, 0.16, 1e-3);
  EXPECT_NEAR(r.rho[r.rho.size() / 2], 0.2, 1e-3);
}

TEST(Shooting, InputChecks) {
  EXPECT_THROW(shooting_solve(0.0, 0.2, 0.4), std::invalid_argument);
  EXPECT_THROW(shooting_solve(0.1, 0.0, 0.4), std::invalid_argument);
  EXPECT_THROW(shooting_solve(0.1, 0.2, 1.4), std::invalid_argument);
  ShootingOptions o;
  o.steps = 1;
  EXPECT_THROW(shooting_solve(0.1, 0.2, 0.4, o), std::invalid_argument);
}
