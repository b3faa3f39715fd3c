#pragma once

#include <stdexcept>
#include <vector>

namespace crowdflow {

/// No sign change of the landing residual over the flux bracket.
class NonBracketingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ShootingDirection { Forward, Backward };

struct ShootingOptions {
  int steps = 10000;
  double j_min = 1e-8;
  int max_bisections = 200;
};

struct ShootingResult {
  double j = 0.0;
  std::vector<double> x;
  std::vector<double> rho;
  /// Mismatch of the boundary condition at the far end of the integration.
  double landing_residual = 0.0;
  /// Difference at the far end between `steps` and `2 * steps` RK4 runs.
  double richardson_error = 0.0;
  ShootingDirection direction = ShootingDirection::Forward;
};

/// Solves eps rho' = rho (1 - rho) - j with j = alpha (1 - rho(0)) =
/// beta rho(1) by bisection on j. Integrates from x = 0 (forward) and from
/// x = 1 (backward), keeping whichever lands more accurately: each
/// direction is stable only on one side of the bulk equilibrium.
ShootingResult shooting_solve(double epsilon, double alpha, double beta,
                              const ShootingOptions& options = {});

}  // namespace crowdflow
