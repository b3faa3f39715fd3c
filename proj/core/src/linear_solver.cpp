#include "crowdflow/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <lapack.h>

#include <algorithm>
#include <limits>
#include <vector>

namespace crowdflow {

namespace {

constexpr int kMaxBand = 8;

std::pair<int, int> bandwidths(const SparseMatrix& a) {
  int lower = 0, upper = 0;
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      lower = std::max(lower, i - static_cast<int>(it.col()));
      upper = std::max(upper, static_cast<int>(it.col()) - i);
    }
  return {lower, upper};
}

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double r = (a * x - b).norm();
  return nb > 0.0 ? r / nb : r;
}

void check_square(const SparseMatrix& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("linear system must be square");
  if (a.rows() != b.size()) throw std::invalid_argument("right-hand side size mismatch");
}

}  // namespace

Eigen::VectorXd BandedSolver::solve(const SparseMatrix& a, const Eigen::VectorXd& b) {
  check_square(a, b);
  int n = static_cast<int>(a.rows());
  if (n == 0) return {};
  int kl = lower_, ku = upper_, nrhs = 1, status = 0;
  int ldab = 2 * kl + ku + 1;
  // Column-major band storage: A(i, j) at band[(kl + ku + i - j) + j * ldab].
  band_.assign(static_cast<std::size_t>(ldab) * n, 0.0);
  pivots_.resize(n);
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (i - j > kl || j - i > ku) throw std::invalid_argument("entry outside the declared band");
      band_[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab] =
          it.value();
    }
  Eigen::VectorXd x = b;
  LAPACK_dgbsv(&n, &kl, &ku, &nrhs, band_.data(), &ldab, pivots_.data(), x.data(), &n, &status);
  if (status != 0)
    throw LinearSolverError(status > 0 ? "banded matrix is singular" : "dgbsv argument error",
                            std::numeric_limits<double>::infinity());
  return x;
}

Eigen::VectorXd solve_banded(const SparseMatrix& a, const Eigen::VectorXd& b, int lower,
                             int upper) {
  BandedSolver solver(lower, upper);
  return solver.solve(a, b);
}

namespace {

// Incomplete LU that survives BiCGSTAB::compute: the factors are rebuilt only
// when `stale` is set, so a slowly varying sequence of systems shares one
// factorization.
class ReusableIlut {
 public:
  ReusableIlut() {
    ilu_.setDroptol(1e-6);
    ilu_.setFillfactor(10);
  }
  template <typename M>
  ReusableIlut& analyzePattern(const M&) {
    return *this;
  }
  template <typename M>
  ReusableIlut& factorize(const M& m) {
    if (stale) {
      ilu_.compute(m);
      stale = false;
    }
    return *this;
  }
  template <typename M>
  ReusableIlut& compute(const M& m) {
    return factorize(m);
  }
  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    return ilu_.solve(b);
  }
  Eigen::ComputationInfo info() { return ilu_.info(); }

  bool stale = true;

 private:
  Eigen::IncompleteLUT<double> ilu_;
};

// Refactor once the Krylov count exceeds this multiple of the count seen
// right after the last factorization.
constexpr int kRefreshFactor = 3;
constexpr int kRefreshFloor = 20;

}  // namespace

struct LinearSolver::Impl {
  Eigen::BiCGSTAB<SparseMatrix, ReusableIlut> krylov;
  Eigen::VectorXd last;
  Eigen::Index size = -1;
  int fresh_iterations = 0;

  bool krylov_solve(const SparseMatrix& a, const Eigen::VectorXd& b, const Eigen::VectorXd* guess,
                    Eigen::VectorXd& x, LinearSolveInfo& info) {
    const bool refreshed = krylov.preconditioner().stale;
    krylov.compute(a);
    if (krylov.preconditioner().info() != Eigen::Success) return false;
    const Eigen::VectorXd* x0 = guess ? guess : (last.size() == b.size() ? &last : nullptr);
    if (x0)
      x = krylov.solveWithGuess(b, *x0);
    else
      x = krylov.solve(b);
    info.iterations += static_cast<int>(krylov.iterations());
    if (krylov.info() != Eigen::Success || !x.allFinite()) return false;
    info.relative_residual = relative_residual(a, x, b);
    if (!(info.relative_residual <= kLinearTolerance)) return false;
    const int its = static_cast<int>(krylov.iterations());
    if (refreshed)
      fresh_iterations = its;
    else if (its > std::max(kRefreshFloor, kRefreshFactor * fresh_iterations))
      krylov.preconditioner().stale = true;
    return true;
  }
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {
  impl_->krylov.setTolerance(0.1 * kLinearTolerance);
  impl_->krylov.setMaxIterations(1000);
}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Eigen::VectorXd LinearSolver::solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd* guess, LinearSolveInfo* info) {
  check_square(a, b);
  LinearSolveInfo local;
  Eigen::VectorXd x;
  const auto [lower, upper] = bandwidths(a);
  if (lower <= kMaxBand && upper <= kMaxBand) {
    local.method = LinearMethod::Banded;
    x = solve_banded(a, b, lower, upper);
    local.relative_residual = relative_residual(a, x, b);
  } else {
    local.method = LinearMethod::Krylov;
    auto& impl = *impl_;
    if (impl.size != a.rows()) {
      impl.krylov.preconditioner().stale = true;
      impl.size = a.rows();
    }
    bool ok = impl.krylov_solve(a, b, guess, x, local);
    if (!ok && !impl.krylov.preconditioner().stale) {
      // The kept factorization may belong to a matrix too far from this one.
      impl.krylov.preconditioner().stale = true;
      ok = impl.krylov_solve(a, b, guess, x, local);
    }
    if (!ok) {
      impl.krylov.preconditioner().stale = true;
      local.method = LinearMethod::SparseLU;
      Eigen::SparseMatrix<double> col = a;
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(col);
      if (lu.info() != Eigen::Success)
        throw LinearSolverError("sparse LU factorization failed: " + lu.lastErrorMessage(),
                                std::numeric_limits<double>::infinity());
      x = lu.solve(b);
      local.relative_residual = relative_residual(a, x, b);
    }
  }
  if (!x.allFinite() || !(local.relative_residual <= kLinearTolerance))
    throw LinearSolverError("linear solve missed the residual bound", local.relative_residual);
  impl_->last = x;
  if (info) *info = local;
  return x;
}

Eigen::VectorXd solve_linear_system(const SparseMatrix& a, const Eigen::VectorXd& b,
                                    LinearSolveInfo* info) {
  LinearSolver solver;
  return solver.solve(a, b, nullptr, info);
}

}  // namespace crowdflow
