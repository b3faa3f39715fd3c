#pragma once

#include "crowdflow/dg_assembly.hpp"

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowdflow {

class LinearSolverError : public std::runtime_error {
 public:
  LinearSolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

enum class LinearMethod { Banded, Krylov, SparseLU };

struct LinearSolveInfo {
  LinearMethod method = LinearMethod::Banded;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Relative residual bound every successful solve meets.
inline constexpr double kLinearTolerance = 1e-12;

/// Band direct elimination with partial pivoting (LAPACK dgbsv).
Eigen::VectorXd solve_banded(const SparseMatrix& a, const Eigen::VectorXd& b, int lower,
                             int upper);

/// solve_banded with band storage and pivots kept between calls.
class BandedSolver {
 public:
  BandedSolver(int lower, int upper) : lower_(lower), upper_(upper) {}
  Eigen::VectorXd solve(const SparseMatrix& a, const Eigen::VectorXd& b);

 private:
  int lower_;
  int upper_;
  std::vector<double> band_;
  std::vector<int> pivots_;
};

/// Solves a x = b to relative residual kLinearTolerance. Narrow-band
/// matrices go to banded elimination; others to BiCGSTAB with an
/// incomplete-LU preconditioner, falling back to sparse LU. Throws
/// LinearSolverError on singularity or breakdown.
Eigen::VectorXd solve_linear_system(const SparseMatrix& a, const Eigen::VectorXd& b,
                                    LinearSolveInfo* info = nullptr);

/// Reusable solver for a sequence of systems sharing one pattern; keeps the
/// last solution as the Krylov starting guess.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Eigen::VectorXd solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                        const Eigen::VectorXd* guess = nullptr, LinearSolveInfo* info = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace crowdflow
