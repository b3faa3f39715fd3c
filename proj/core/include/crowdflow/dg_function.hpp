#pragma once

#include "crowdflow/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>

namespace crowdflow {

/// Broken P1 function: one nodal value per cell vertex, stored cell by cell
/// (index = (dim + 1) * cell + local vertex).
class DgFunction {
 public:
  explicit DgFunction(const Mesh& mesh);
  DgFunction(const Mesh& mesh, Eigen::VectorXd coefficients);

  static DgFunction constant(const Mesh& mesh, double value);
  /// Nodal interpolant of f, evaluated at each cell's vertices.
  static DgFunction interpolate(const Mesh& mesh,
                                const std::function<double(const Eigen::Vector2d&)>& f);

  const Mesh& mesh() const { return *mesh_; }
  int dofs_per_cell() const { return mesh_->dim() + 1; }
  Eigen::Index size() const { return coefficients_.size(); }

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  Eigen::VectorXd& coefficients() { return coefficients_; }

  double& operator()(int cell, int k) { return coefficients_[dofs_per_cell() * cell + k]; }
  double operator()(int cell, int k) const { return coefficients_[dofs_per_cell() * cell + k]; }

  /// Value inside `cell` at the given barycentric coordinates.
  double value(int cell, const std::array<double, 3>& bary) const;
  /// Value at a physical point known to lie in `cell`.
  double value_at(int cell, const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(int cell) const;
  double cell_mean(int cell) const;

  double min() const { return coefficients_.minCoeff(); }
  double max() const { return coefficients_.maxCoeff(); }

 private:
  const Mesh* mesh_;
  Eigen::VectorXd coefficients_;
};

double integrate(const DgFunction& v);
double l2_norm(const DgFunction& v);

/// Exact L2 norm of the difference of two broken P1 functions on one mesh.
double l2_distance(const DgFunction& a, const DgFunction& b);

}  // namespace crowdflow
