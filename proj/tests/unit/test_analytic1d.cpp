#include "crowdflow/analytic1d.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace crowdflow;

namespace {

// -eps rho' + rho (1 - rho) by central differences, independent of
// ExplicitSolution1D::derivative.
double ode_flux(const ExplicitSolution1D& s, double x) {
  const double h = 1e-6;
  const double d = (s(x + h) - s(x - h)) / (2.0 * h);
  const double r = s(x);
  return -s.epsilon() * d + r * (1.0 - r);
}

void expect_constant_flux(const ExplicitSolution1D& s, double tol) {
  for (double x = 0.05; x < 1.0; x += 0.1) {
    EXPECT_NEAR(ode_flux(s, x), s.flux(), tol) << "x = " << x;
    const double h = 1e-6;
    EXPECT_NEAR(s.derivative(x), (s(x + h) - s(x - h)) / (2.0 * h), 1e-5 * (1 + std::abs(s.derivative(x))));
  }
}

}  // namespace

TEST(PhaseBoundary, ReportedValueAtSmallEpsilon) {
  EXPECT_NEAR(phase_boundary_beta(0.01, 0.4912), 0.603773585, 1e-6);
}

TEST(PhaseBoundary, BothConstantsAgreeOnTheCurve) {
  for (double eps : {0.1, 0.05, 0.01}) {
    for (double a : {0.47, 0.48, 0.49, 0.495}) {
      if (a <= phase_boundary_alpha_min(eps)) continue;
      const double b = phase_boundary_beta(eps, a);
      const auto [c1, c2] = quarterflux_constants(eps, a, b);
      EXPECT_NEAR(c1, c2, 1e-12 * std::abs(c1)) << eps << ' ' << a;
      EXPECT_DOUBLE_EQ(phase_boundary_alpha(eps, a), b);
      // The j = 1/4 profile then meets both Robin conditions.
      const auto s = ExplicitSolution1D::quarter_flux(eps, c1);
      EXPECT_NEAR(a * (1.0 - s(0.0)), 0.25, 1e-12);
      EXPECT_NEAR(b * s(1.0), 0.25, 1e-12);
    }
  }
}

TEST(PhaseBoundary, DomainChecks) {
  EXPECT_THROW(phase_boundary_beta(0.01, 0.3), std::domain_error);
  EXPECT_THROW(phase_boundary_beta(0.01, 0.6), std::domain_error);
  EXPECT_THROW(phase_boundary_beta(0.0, 0.49), std::domain_error);
  EXPECT_DOUBLE_EQ(phase_boundary_beta(0.1, 0.5), 0.5);
  EXPECT_THROW(quarterflux_constants(0.1, 0.5, 0.7), std::domain_error);
}

TEST(PhaseBoundary, CurveShape) {
  const double eps = 0.1;
  const auto curve = phase_boundary_curve(eps, 50);
  ASSERT_EQ(curve.size(), 99u);
  EXPECT_NEAR(curve.front().beta, 1.0, 1e-12);
  EXPECT_NEAR(curve[49].alpha, 0.5, 1e-15);
  EXPECT_NEAR(curve[49].beta, 0.5, 1e-15);
  EXPECT_NEAR(curve.back().alpha, 1.0, 1e-12);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    // Mirror symmetry under alpha <-> beta.
    EXPECT_NEAR(curve[i].alpha, curve[curve.size() - 1 - i].beta, 1e-14);
    EXPECT_EQ(curve[i].side, i < 50 ? BoundarySide::AlphaLimited : BoundarySide::BetaLimited);
    EXPECT_GT(curve[i].alpha, phase_boundary_alpha_min(eps));
  }
  // Beta decreases along the alpha-limited branch.
  for (std::size_t i = 1; i < 50; ++i) EXPECT_LT(curve[i].beta, curve[i - 1].beta);
  EXPECT_THROW(phase_boundary_curve(eps, 1), std::invalid_argument);
}

TEST(ExplicitSolution, BranchesSolveTheOde) {
  const double eps = 0.1;
  expect_constant_flux(ExplicitSolution1D::constant(eps, 0.3), 1e-12);
  expect_constant_flux(ExplicitSolution1D::quarter_flux(eps, 0.4), 1e-7);
  expect_constant_flux(ExplicitSolution1D::quarter_flux(eps, -1.3), 1e-7);
  expect_constant_flux(ExplicitSolution1D::trig(eps, 0.27, -0.5), 1e-7);
  expect_constant_flux(ExplicitSolution1D::hyperbolic(eps, 0.16, -0.3, HyperbolicKind::Tanh), 1e-7);
  expect_constant_flux(ExplicitSolution1D::hyperbolic(eps, 0.16, 0.2, HyperbolicKind::Coth), 1e-7);
}

TEST(ExplicitSolution, PolesAreRejected) {
  EXPECT_THROW(ExplicitSolution1D::quarter_flux(0.1, -0.5), std::domain_error);
  EXPECT_THROW(ExplicitSolution1D::trig(0.01, 0.3, 0.0), std::domain_error);
  EXPECT_THROW(ExplicitSolution1D::trig(0.1, 0.2, 0.0), std::domain_error);
  EXPECT_THROW(ExplicitSolution1D::hyperbolic(0.1, 0.16, -0.5, HyperbolicKind::Coth),
               std::domain_error);
  EXPECT_THROW(ExplicitSolution1D::hyperbolic(0.1, 0.3, 0.0, HyperbolicKind::Tanh),
               std::domain_error);
  EXPECT_THROW(ExplicitSolution1D::constant(0.0, 0.5), std::domain_error);
}

TEST(ExplicitSolution, FromInflowMatchesInitialValue) {
  const double eps = 0.05;
  for (double j : {0.1, 0.2, 0.25, 0.26}) {
    for (double rho0 : {0.1, 0.3, 0.6}) {
      try {
        const auto s = ExplicitSolution1D::from_inflow(eps, j, rho0);
        EXPECT_NEAR(s(0.0), rho0, 1e-12);
        EXPECT_DOUBLE_EQ(s.flux(), j);
        expect_constant_flux(s, 1e-6);
      } catch (const std::domain_error&) {
        // A pole inside [0, 1] for this data is legitimate.
      }
    }
  }
  // Exactly on the hyperbolic fixed point the profile is constant.
  const double kappa = 0.5 * std::sqrt(1.0 - 4.0 * 0.16);
  const auto flat = ExplicitSolution1D::from_inflow(eps, 0.16, 0.5 - kappa);
  EXPECT_NEAR(flat(0.7), 0.2, 1e-12);
}

TEST(ConstantSolution, OnlyWhenRatesSumToOne) {
  const auto c = constant_solution(0.3, 0.7);
  ASSERT_TRUE(c.has_value());
  EXPECT_DOUBLE_EQ(c->first, 0.3);
  EXPECT_DOUBLE_EQ(c->second, 0.21);
  EXPECT_FALSE(constant_solution(0.3, 0.6).has_value());
}

TEST(FluxNewton, SolutionMeetsBothBoundaryConditions) {
  for (double eps : {0.1, 0.05, 0.01}) {
    for (auto [a, b] : {std::pair{0.7, 0.7}, {0.6, 0.9}, {0.9, 0.6}, {1.0, 1.0}, {0.55, 0.8}}) {
      const auto sol = solve_flux_newton(eps, a, b);
      ASSERT_TRUE(sol.has_value()) << eps << ' ' << a << ' ' << b;
      EXPECT_GT(sol->j, 0.25);
      EXPECT_NEAR(flux_equation(eps, a, b, sol->j), 0.0, 1e-10);
      const auto s = ExplicitSolution1D::trig(eps, sol->j, sol->c);
      EXPECT_NEAR(a * (1.0 - s(0.0)), sol->j, 1e-10);
      EXPECT_NEAR(b * s(1.0), sol->j, 1e-10);
      EXPECT_LE(sol->iterations, 100);
    }
  }
}

TEST(FluxNewton, SymmetricRates) {
  const auto ab = solve_flux_newton(0.05, 0.6, 0.9);
  const auto ba = solve_flux_newton(0.05, 0.9, 0.6);
  ASSERT_TRUE(ab && ba);
  EXPECT_NEAR(ab->j, ba->j, 1e-13);
}

TEST(FluxNewton, NoRootBelowTheCurve) {
  EXPECT_FALSE(solve_flux_newton(0.1, 0.2, 0.4).has_value());
  EXPECT_FALSE(solve_flux_newton(0.01, 0.4, 0.9).has_value());
  EXPECT_FALSE(solve_flux_newton(0.1, 0.5, 0.5).has_value());
  EXPECT_THROW(solve_flux_newton(0.1, 0.0, 0.5), std::domain_error);
}

TEST(FluxNewton, RootAppearsAboveTheCurve) {
  const double eps = 0.05;
  const double a = 0.49;
  const double b = phase_boundary_beta(eps, a);
  EXPECT_FALSE(solve_flux_newton(eps, a, b - 0.02).has_value());
  const auto above = solve_flux_newton(eps, a, b + 0.05);
  ASSERT_TRUE(above.has_value());
  EXPECT_LT(above->j - 0.25, 1e-2);
}
