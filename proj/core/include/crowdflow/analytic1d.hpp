#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace crowdflow {

// Closed-form stationary solutions of
//   eps rho' = rho (1 - rho) - j  on [0, 1],
//   j = alpha (1 - rho(0)) = beta rho(1),
// i.e. the 1D problem with u = 1.

struct ConstantBranch {
  double rho;
  double j;
};

/// rho = 1/2 + eps / (x + c), flux exactly 1/4.
struct QuarterFluxBranch {
  double c;
};

/// rho = 1/2 - k tan(k (x + c) / eps), k = sqrt(4j - 1) / 2, for j > 1/4.
struct TrigBranch {
  double j;
  double c;
};

enum class HyperbolicKind { Tanh, Coth };

/// rho = 1/2 + kappa tanh|coth(kappa (x + c) / eps), kappa = sqrt(1 - 4j) / 2,
/// for j < 1/4.
struct HyperbolicBranch {
  double j;
  double c;
  HyperbolicKind kind;
};

using ExplicitBranch = std::variant<ConstantBranch, QuarterFluxBranch, TrigBranch, HyperbolicBranch>;

/// A closed-form profile with no pole on [0, 1]. The factories throw
/// std::domain_error otherwise.
class ExplicitSolution1D {
 public:
  static ExplicitSolution1D constant(double epsilon, double rho);
  static ExplicitSolution1D quarter_flux(double epsilon, double c);
  static ExplicitSolution1D trig(double epsilon, double j, double c);
  static ExplicitSolution1D hyperbolic(double epsilon, double j, double c, HyperbolicKind kind);

  /// The solution of the ODE with flux j through rho(0) = rho0; picks the
  /// branch from j and, for j < 1/4, from where rho0 sits relative to the
  /// two equilibria.
  static ExplicitSolution1D from_inflow(double epsilon, double j, double rho0);

  double epsilon() const { return epsilon_; }
  const ExplicitBranch& branch() const { return branch_; }
  double flux() const;
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  ExplicitSolution1D(double epsilon, ExplicitBranch branch) : epsilon_(epsilon), branch_(branch) {}
  double epsilon_;
  ExplicitBranch branch_;
};

/// (rho, j) when alpha + beta = 1 (within 1e-12), the only case with a
/// constant solution.
std::optional<std::pair<double, double>> constant_solution(double alpha, double beta);

/// Constants c1 (from the inflow condition) and c2 (from the outflow
/// condition) of the j = 1/4 profile; a solution exists iff c1 = c2 and
/// c > 0 or c < -1. Throws std::domain_error at alpha = 1/2 or beta = 1/2.
std::pair<double, double> quarterflux_constants(double epsilon, double alpha, double beta);

/// Lower end of the alpha interval on which phase_boundary_beta is defined:
/// (1 + 2 eps) / (2 (4 eps + 1)).
double phase_boundary_alpha_min(double epsilon);

/// The beta > 1/2 for which a j = 1/4 solution exists at this alpha.
/// Requires phase_boundary_alpha_min(eps) < alpha < 1/2 (std::domain_error
/// otherwise); alpha = 1/2 returns 1/2.
double phase_boundary_beta(double epsilon, double alpha);

/// Mirror image of phase_boundary_beta with the roles of alpha and beta
/// exchanged.
double phase_boundary_alpha(double epsilon, double beta);

struct FluxSolution {
  double j;
  double c;
  int iterations;
};

/// Root j > 1/4 of the two-sided boundary condition for the tan profile,
/// by Newton's method safeguarded with bisection. Empty when no root
/// exists, which places (alpha, beta) in the j <= 1/4 regime.
std::optional<FluxSolution> solve_flux_newton(double epsilon, double alpha, double beta,
                                              double j_init = 0.26);

/// Residual of the transcendental flux equation at j > 1/4; positive below
/// the root.
double flux_equation(double epsilon, double alpha, double beta, double j);

enum class BoundarySide { AlphaLimited, BetaLimited };

struct PhaseBoundarySample {
  double alpha;
  double beta;
  double epsilon;
  BoundarySide side;
};

/// Boundary of the j >= 1/4 region in the unit (alpha, beta) square: the
/// alpha-limited branch from beta = 1 down to the corner (1/2, 1/2), then
/// the mirrored branch out to alpha = 1. n_samples per branch (>= 2).
std::vector<PhaseBoundarySample> phase_boundary_curve(double epsilon, int n_samples);

}  // namespace crowdflow
