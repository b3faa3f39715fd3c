#include "crowdflow/dg_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdflow {

namespace {

constexpr double kGaussOffset = 0.28867513459481287;  // 1 / (2 sqrt 3)

int dof(const Mesh& mesh, int cell, int k) { return (mesh.dim() + 1) * cell + k; }

// Cell quadrature in barycentric coordinates: two-point Gauss on intervals,
// edge midpoints on triangles. Both integrate quadratics exactly.
struct CellRule {
  int n;
  std::array<std::array<double, 3>, 3> bary;
  std::array<double, 3> weight;  // fractions of the cell measure
};

const CellRule& cell_rule(int dim) {
  static const CellRule interval{2,
                                 {{{0.5 + kGaussOffset, 0.5 - kGaussOffset, 0.0},
                                   {0.5 - kGaussOffset, 0.5 + kGaussOffset, 0.0},
                                   {0.0, 0.0, 0.0}}},
                                 {0.5, 0.5, 0.0}};
  static const CellRule triangle{3,
                                 {{{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}},
                                 {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  return dim == 1 ? interval : triangle;
}

// Local matrix accumulator keyed by (test, trial) local DOF pairs within
// the block coupling cell rows to cell columns.
using Block = std::array<std::array<double, 3>, 3>;

}  // namespace

FaceQuadrature face_quadrature(const Face& face) {
  if (face.num_vertices == 1) return {1, {0.0, 0.0}, {1.0, 0.0}};
  return {2, {0.5 - kGaussOffset, 0.5 + kGaussOffset}, {0.5 * face.measure, 0.5 * face.measure}};
}

double face_basis(const Face& face, int side, int k, double t) {
  const auto& loc = face.local[side];
  if (face.num_vertices == 1) return loc[0] == k ? 1.0 : 0.0;
  if (loc[0] == k) return 1.0 - t;
  if (loc[1] == k) return t;
  return 0.0;
}

FaceTraces face_average_jump(const DgFunction& v, int face) {
  const Mesh& mesh = v.mesh();
  const Face& f = mesh.face(face);
  if (f.is_boundary())
    throw std::invalid_argument("face_average_jump needs an interior face");
  const auto q = face_quadrature(f);
  FaceTraces out;
  out.num_points = q.num_points;
  for (int p = 0; p < q.num_points; ++p) {
    std::array<double, 2> trace{0.0, 0.0};
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < v.dofs_per_cell(); ++k)
        trace[s] += face_basis(f, s, k, q.t[p]) * v(f.cells[s], k);
    out.average[p] = 0.5 * (trace[0] + trace[1]);
    out.jump[p] = trace[0] - trace[1];
  }
  return out;
}

OperatorPattern::OperatorPattern(const Mesh& mesh) : mesh_(&mesh) {
  const int n = mesh.dim() + 1;
  const int ndof = n * static_cast<int>(mesh.num_cells());
  std::vector<Eigen::Triplet<double>> t;
  const auto couple = [&](int rc, int cc) {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const int i = dof(mesh, rc, k), j = dof(mesh, cc, l);
        t.emplace_back(i, j, 0.0);
        lower_ = std::max(lower_, i - j);
        upper_ = std::max(upper_, j - i);
      }
  };
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) couple(c, c);
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary()) continue;
    couple(f.cells[0], f.cells[1]);
    couple(f.cells[1], f.cells[0]);
  }
  pattern_.resize(ndof, ndof);
  pattern_.setFromTriplets(t.begin(), t.end());
  pattern_.makeCompressed();

  const auto offsets = [&](int rc, int cc) {
    BlockOffsets at{-1, -1, -1};
    for (int k = 0; k < n; ++k) {
      const int row = n * rc + k;
      const int* begin = pattern_.innerIndexPtr() + pattern_.outerIndexPtr()[row];
      const int* end = pattern_.innerIndexPtr() + pattern_.outerIndexPtr()[row + 1];
      at[k] = static_cast<int>(std::lower_bound(begin, end, n * cc) - pattern_.innerIndexPtr());
    }
    return at;
  };
  cell_blocks_.resize(mesh.num_cells());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) cell_blocks_[c] = offsets(c, c);
  face_blocks_.resize(mesh.num_faces());
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary()) continue;
    for (int si = 0; si < 2; ++si)
      for (int sj = 0; sj < 2; ++sj)
        face_blocks_[f][2 * si + sj] = offsets(face.cells[si], face.cells[sj]);
  }
}

void OperatorPattern::scatter(SparseMatrix& m, const BlockOffsets& at, const Block& b,
                              double scale) const {
  const int n = mesh_->dim() + 1;
  double* v = m.valuePtr();
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) v[at[k] + l] += scale * b[k][l];
}

void OperatorPattern::add_mass(SparseMatrix& m, double scale) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.dim() + 1;
  const double denom = n == 2 ? 6.0 : 12.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    Block b{};
    const double base = mesh.cell_measure(c) / denom;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) b[k][l] = base * (k == l ? 2.0 : 1.0);
    scatter(m, cell_blocks_[c], b, scale);
  }
}

void OperatorPattern::add_swip(SparseMatrix& m, double epsilon, const PenaltyConfig& penalty,
                               double scale) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.dim() + 1;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    Block b{};
    const double w = epsilon * mesh.cell_measure(c);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        b[k][l] = w * mesh.barycentric_gradient(c, k).dot(mesh.barycentric_gradient(c, l));
    scatter(m, cell_blocks_[c], b, scale);
  }
  for (int fi = 0; fi < static_cast<int>(mesh.num_faces()); ++fi) {
    const Face& f = mesh.face(fi);
    if (f.is_boundary()) continue;
    const auto q = face_quadrature(f);
    const double pen = penalty.eta * epsilon / f.h;
    // Normal derivative of each basis function's contribution to {grad v}.n.
    std::array<std::array<double, 3>, 2> dn{};
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < n; ++k)
        dn[s][k] = 0.5 * mesh.barycentric_gradient(f.cells[s], k).dot(f.normal);
    for (int si = 0; si < 2; ++si) {    // test side
      for (int sj = 0; sj < 2; ++sj) {  // trial side
        const double sgn_i = si == 0 ? 1.0 : -1.0;
        const double sgn_j = sj == 0 ? 1.0 : -1.0;
        Block b{};
        for (int p = 0; p < q.num_points; ++p) {
          for (int k = 0; k < n; ++k) {
            const double jump_test = sgn_i * face_basis(f, si, k, q.t[p]);
            for (int l = 0; l < n; ++l) {
              const double jump_trial = sgn_j * face_basis(f, sj, l, q.t[p]);
              b[k][l] += q.weight[p] * (-epsilon * (dn[sj][l] * jump_test + jump_trial * dn[si][k]) +
                                        pen * jump_trial * jump_test);
            }
          }
        }
        scatter(m, face_blocks_[fi][2 * si + sj], b, scale);
      }
    }
  }
}

void OperatorPattern::add_upwind(SparseMatrix& m, const VelocityField& velocity,
                                 const DgFunction& rho_prev, double scale) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.dim() + 1;
  const CellRule& rule = cell_rule(mesh.dim());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Eigen::Vector2d& u = velocity[c];
    std::array<double, 3> u_grad{};
    for (int k = 0; k < n; ++k) u_grad[k] = u.dot(mesh.barycentric_gradient(c, k));
    Block b{};
    for (int p = 0; p < rule.n; ++p) {
      const double w = rule.weight[p] * mesh.cell_measure(c) * (1.0 - rho_prev.value(c, rule.bary[p]));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) b[k][l] -= w * rule.bary[p][l] * u_grad[k];
    }
    scatter(m, cell_blocks_[c], b, scale);
  }
  for (int fi = 0; fi < static_cast<int>(mesh.num_faces()); ++fi) {
    const Face& f = mesh.face(fi);
    if (f.is_boundary()) continue;
    const auto q = face_quadrature(f);
    const auto prev = face_average_jump(rho_prev, fi);
    const double un = velocity.face_normal(mesh, fi);
    for (int si = 0; si < 2; ++si) {
      for (int sj = 0; sj < 2; ++sj) {
        const double sgn_i = si == 0 ? 1.0 : -1.0;
        const double sgn_j = sj == 0 ? 1.0 : -1.0;
        Block b{};
        for (int p = 0; p < q.num_points; ++p) {
          const double wind = (1.0 - prev.average[p]) * un;
          for (int k = 0; k < n; ++k) {
            const double jump_test = sgn_i * face_basis(f, si, k, q.t[p]);
            if (jump_test == 0.0) continue;
            for (int l = 0; l < n; ++l) {
              const double phi = face_basis(f, sj, l, q.t[p]);
              if (phi == 0.0) continue;
              b[k][l] += q.weight[p] * (wind * 0.5 * phi + 0.5 * std::abs(wind) * sgn_j * phi) *
                         jump_test;
            }
          }
        }
        scatter(m, face_blocks_[fi][2 * si + sj], b, scale);
      }
    }
  }
}

void OperatorPattern::add_boundary(SparseMatrix& m, Eigen::VectorXd* rhs,
                                   const std::vector<BoundarySegment>& segments,
                                   double scale) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.dim() + 1;
  const auto by_tag = segments_by_tag(mesh, segments);
  for (const Face& f : mesh.faces()) {
    if (!f.is_boundary()) continue;
    if (f.tag < 0) throw std::invalid_argument("untagged boundary face");
    const BoundarySegment& seg = *by_tag[f.tag];
    if (seg.kind == SegmentKind::Wall || seg.rate == 0.0) continue;
    const auto q = face_quadrature(f);
    const int c = f.cells[0];
    Block b{};
    for (int p = 0; p < q.num_points; ++p) {
      for (int k = 0; k < n; ++k) {
        const double phi_k = face_basis(f, 0, k, q.t[p]);
        if (seg.kind == SegmentKind::Inflow && rhs)
          (*rhs)[dof(mesh, c, k)] += scale * seg.rate * q.weight[p] * phi_k;
        for (int l = 0; l < n; ++l)
          b[k][l] += seg.rate * q.weight[p] * phi_k * face_basis(f, 0, l, q.t[p]);
      }
    }
    scatter(m, cell_blocks_[c], b, scale);
  }
}

SparseMatrix assemble_mass(const Mesh& mesh) {
  OperatorPattern p(mesh);
  SparseMatrix m = p.zero();
  p.add_mass(m, 1.0);
  m.prune(0.0);
  return m;
}

SparseMatrix assemble_swip(const Mesh& mesh, double epsilon, const PenaltyConfig& penalty) {
  if (!(penalty.eta > 0.0)) throw std::invalid_argument("penalty eta must be positive");
  OperatorPattern p(mesh);
  SparseMatrix m = p.zero();
  p.add_swip(m, epsilon, penalty, 1.0);
  m.prune(0.0);
  return m;
}

SparseMatrix assemble_upwind(const Mesh& mesh, const VelocityField& velocity,
                             const DgFunction& rho_prev) {
  OperatorPattern p(mesh);
  SparseMatrix m = p.zero();
  p.add_upwind(m, velocity, rho_prev, 1.0);
  m.prune(0.0);
  return m;
}

BoundaryForms assemble_boundary(const Mesh& mesh, const std::vector<BoundarySegment>& segments) {
  OperatorPattern p(mesh);
  BoundaryForms out{p.zero(), Eigen::VectorXd::Zero(p.zero().rows())};
  p.add_boundary(out.matrix, &out.rhs, segments, 1.0);
  out.matrix.prune(0.0);
  return out;
}

}  // namespace crowdflow
