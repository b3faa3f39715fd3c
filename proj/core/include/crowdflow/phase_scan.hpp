#pragma once

#include "crowdflow/analysis.hpp"
#include "crowdflow/dg_solver.hpp"

#include <Eigen/Core>

#include <functional>
#include <ostream>
#include <vector>

namespace crowdflow {

/// Flux and phase on an (alpha, beta) grid. Matrices are indexed
/// (alpha index, beta index).
struct PhaseGrid {
  double epsilon = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  Eigen::MatrixXd flux;
  Eigen::MatrixXd mean_density;
  Eigen::Matrix<Phase, Eigen::Dynamic, Eigen::Dynamic> phase;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> converged;
};

struct PhaseScanConfig {
  /// Rates run 0, step, 2 step, ..., 1.
  double step = 0.01;
  int cells = 200;
  double tau = 0.01;
  SolverConfig solver;
  /// Worker threads; 0 picks the hardware concurrency.
  int jobs = 0;
  double classification_tol = kClassificationTol;
};

/// Solves every grid point. Rows (fixed alpha) are distributed over worker
/// threads; along a row each solve starts from the previous converged
/// solution, or from the constant initial density when that fails. The
/// result does not depend on the number of threads.
PhaseGrid scan_phase_diagram(double epsilon, const PhaseScanConfig& config,
                             const std::function<void(int rows_done, int rows)>& progress = {});

/// Evenly spaced rates 0..1 with the given step (rounded to a whole number
/// of intervals).
std::vector<double> rate_samples(double step);

/// CSV with header alpha,beta,j,phase,converged; alpha-major order.
void write_phase_csv(const PhaseGrid& grid, std::ostream& out);

}  // namespace crowdflow
