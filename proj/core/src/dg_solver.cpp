#include "crowdflow/dg_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdflow {

DgSolver::DgSolver(const Mesh& mesh, ModelParams params, VelocityField velocity,
                   SolverConfig config)
    : mesh_(&mesh),
      params_(std::move(params)),
      velocity_(std::move(velocity)),
      config_(config),
      pattern_(mesh) {
  params_.validate();
  if (!(config_.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(config_.penalty.eta > 0.0)) throw std::invalid_argument("penalty eta must be positive");
  if (config_.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (velocity_.cells.size() != mesh.num_cells())
    throw std::invalid_argument("velocity field does not match the mesh");

  const double tau = params_.tau;
  mass_ = pattern_.zero();
  pattern_.add_mass(mass_, 1.0);
  fixed_ = mass_;
  pattern_.add_swip(fixed_, params_.epsilon, config_.penalty, tau);
  load_ = Eigen::VectorXd::Zero(fixed_.rows());
  pattern_.add_boundary(fixed_, &load_, params_.segments, tau);
  advection_ = pattern_.zero();
  if (mesh.dim() == 1) banded_.emplace(pattern_.lower_bandwidth(), pattern_.upper_bandwidth());
  system_ = pattern_.zero();
}

DgFunction DgSolver::step(const DgFunction& rho_n) {
  if (&rho_n.mesh() != mesh_) throw std::invalid_argument("iterate lives on another mesh");
  const Eigen::Index nnz = advection_.nonZeros();
  std::fill(advection_.valuePtr(), advection_.valuePtr() + nnz, 0.0);
  pattern_.add_upwind(advection_, velocity_, rho_n, params_.tau);
  Eigen::Map<Eigen::VectorXd>(system_.valuePtr(), nnz) =
      Eigen::Map<const Eigen::VectorXd>(fixed_.valuePtr(), nnz) +
      Eigen::Map<const Eigen::VectorXd>(advection_.valuePtr(), nnz);
  const Eigen::VectorXd rhs = mass_ * rho_n.coefficients() + load_;
  Eigen::VectorXd next;
  if (banded_) {
    next = banded_->solve(system_, rhs);
    const double nb = rhs.norm();
    last_linear_residual_ = (system_ * next - rhs).norm() / (nb > 0.0 ? nb : 1.0);
    if (!next.allFinite() || !(last_linear_residual_ <= kLinearTolerance))
      throw LinearSolverError("banded solve missed the residual bound", last_linear_residual_);
  } else {
    LinearSolveInfo info;
    next = linear_.solve(system_, rhs, &rho_n.coefficients(), &info);
    last_linear_residual_ = info.relative_residual;
  }
  return DgFunction(*mesh_, std::move(next));
}

std::pair<DgFunction, SolveReport> DgSolver::solve_stationary() {
  return solve_stationary(DgFunction::constant(*mesh_, params_.initial_density));
}

std::pair<DgFunction, SolveReport> DgSolver::solve_stationary(const DgFunction& initial) {
  SolveReport report;
  DgFunction rho = initial;
  for (int it = 1; it <= config_.max_iter; ++it) {
    DgFunction next = step(rho);
    const double update = l2_distance(next, rho) / params_.tau;
    rho = std::move(next);
    report.iterations = it;
    report.final_update_norm = update;
    report.max_linear_residual = std::max(report.max_linear_residual, last_linear_residual_);
    if (observer_) observer_(it, update);
    if (!std::isfinite(update)) break;
    if (update <= config_.tol) {
      report.converged = true;
      break;
    }
  }
  report.flux = compute_flux(rho, params_, velocity_);
  return {std::move(rho), report};
}

std::pair<DgFunction, SolveReport> solve_stationary(const ModelParams& params, const Mesh& mesh,
                                                    const VelocityField& velocity,
                                                    const SolverConfig& config) {
  DgSolver solver(mesh, params, velocity, config);
  return solver.solve_stationary();
}

}  // namespace crowdflow
