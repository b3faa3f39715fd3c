#pragma once

#include "crowdflow/analysis.hpp"
#include "crowdflow/dg_assembly.hpp"
#include "crowdflow/dg_function.hpp"
#include "crowdflow/linear_solver.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"
#include "crowdflow/velocity.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace crowdflow {

struct SolverConfig {
  PenaltyConfig penalty;
  /// Stop once ||rho_{n+1} - rho_n||_L2 / tau <= tol.
  double tol = 1e-8;
  int max_iter = 200000;
};

struct SolveReport {
  int iterations = 0;
  double final_update_norm = 0.0;
  FluxReport flux;
  bool converged = false;
  double max_linear_residual = 0.0;
};

/// Semi-implicit pseudo-time iteration (M + tau A(rho_n)) rho_{n+1} =
/// M rho_n + tau f. Mass, diffusion and Robin terms are assembled once; the
/// advection part is reassembled in place every step. Not thread safe; use
/// one instance per thread.
class DgSolver {
 public:
  DgSolver(const Mesh& mesh, ModelParams params, VelocityField velocity, SolverConfig config = {});

  const Mesh& mesh() const { return *mesh_; }
  const ModelParams& params() const { return params_; }
  const VelocityField& velocity() const { return velocity_; }
  const SolverConfig& config() const { return config_; }

  /// One pseudo-time step from rho_n.
  DgFunction step(const DgFunction& rho_n);

  /// Iterates from `initial` (rho = initial_density when omitted).
  std::pair<DgFunction, SolveReport> solve_stationary();
  std::pair<DgFunction, SolveReport> solve_stationary(const DgFunction& initial);

  /// Called after every step with the iteration count and update norm.
  void set_observer(std::function<void(int, double)> observer) { observer_ = std::move(observer); }

 private:
  const Mesh* mesh_;
  ModelParams params_;
  VelocityField velocity_;
  SolverConfig config_;
  OperatorPattern pattern_;
  SparseMatrix fixed_;     // M + tau (S + B)
  SparseMatrix advection_;
  SparseMatrix system_;
  SparseMatrix mass_;
  Eigen::VectorXd load_;   // tau f
  LinearSolver linear_;
  std::optional<BandedSolver> banded_;
  double last_linear_residual_ = 0.0;
  std::function<void(int, double)> observer_;
};

std::pair<DgFunction, SolveReport> solve_stationary(const ModelParams& params, const Mesh& mesh,
                                                    const VelocityField& velocity,
                                                    const SolverConfig& config = {});

}  // namespace crowdflow
