#include "crowdflow/dg_function.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdflow {

DgFunction::DgFunction(const Mesh& mesh)
    : mesh_(&mesh),
      coefficients_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_cells()) *
                                          (mesh.dim() + 1))) {}

DgFunction::DgFunction(const Mesh& mesh, Eigen::VectorXd coefficients)
    : mesh_(&mesh), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != static_cast<Eigen::Index>(mesh.num_cells()) * (mesh.dim() + 1))
    throw std::invalid_argument("coefficient count does not match the mesh");
}

DgFunction DgFunction::constant(const Mesh& mesh, double value) {
  DgFunction f(mesh);
  f.coefficients_.setConstant(value);
  return f;
}

DgFunction DgFunction::interpolate(const Mesh& mesh,
                                   const std::function<double(const Eigen::Vector2d&)>& f) {
  DgFunction out(mesh);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto verts = mesh.cell(c);
    for (int k = 0; k < out.dofs_per_cell(); ++k) out(c, k) = f(mesh.vertex(verts[k]));
  }
  return out;
}

double DgFunction::value(int cell, const std::array<double, 3>& bary) const {
  double s = 0.0;
  for (int k = 0; k < dofs_per_cell(); ++k) s += bary[k] * (*this)(cell, k);
  return s;
}

double DgFunction::value_at(int cell, const Eigen::Vector2d& x) const {
  const Eigen::Vector2d& p0 = mesh_->vertex(mesh_->cell(cell)[0]);
  double s = (*this)(cell, 0);
  for (int k = 1; k < dofs_per_cell(); ++k)
    s += ((*this)(cell, k) - (*this)(cell, 0)) * mesh_->barycentric_gradient(cell, k).dot(x - p0);
  return s;
}

Eigen::Vector2d DgFunction::gradient(int cell) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int k = 0; k < dofs_per_cell(); ++k)
    g += (*this)(cell, k) * mesh_->barycentric_gradient(cell, k);
  return g;
}

double DgFunction::cell_mean(int cell) const {
  double s = 0.0;
  for (int k = 0; k < dofs_per_cell(); ++k) s += (*this)(cell, k);
  return s / dofs_per_cell();
}

double integrate(const DgFunction& v) {
  double s = 0.0;
  for (int c = 0; c < static_cast<int>(v.mesh().num_cells()); ++c)
    s += v.mesh().cell_measure(c) * v.cell_mean(c);
  return s;
}

namespace {

// Integral of the square of an affine function over a simplex with nodal
// values a: |T| * 2 / ((d+1)(d+2)) * (sum a_k^2 + sum_{k<l} a_k a_l).
double cell_square(const double* a, int n, double measure) {
  double sq = 0.0, cross = 0.0;
  for (int k = 0; k < n; ++k) {
    sq += a[k] * a[k];
    for (int l = k + 1; l < n; ++l) cross += a[k] * a[l];
  }
  return measure * 2.0 / (n * (n + 1)) * (sq + cross);
}

}  // namespace

double l2_norm(const DgFunction& v) {
  const int n = v.dofs_per_cell();
  double s = 0.0;
  for (int c = 0; c < static_cast<int>(v.mesh().num_cells()); ++c)
    s += cell_square(v.coefficients().data() + n * c, n, v.mesh().cell_measure(c));
  return std::sqrt(s);
}

double l2_distance(const DgFunction& a, const DgFunction& b) {
  if (&a.mesh() != &b.mesh() || a.size() != b.size())
    throw std::invalid_argument("l2_distance needs functions on the same mesh");
  return l2_norm(DgFunction(a.mesh(), a.coefficients() - b.coefficients()));
}

}  // namespace crowdflow
