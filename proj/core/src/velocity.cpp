#include "crowdflow/velocity.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <string>

namespace crowdflow {

double VelocityField::face_normal(const Mesh& mesh, int face) const {
  const Face& f = mesh.face(face);
  if (f.is_boundary()) return cells[f.cells[0]].dot(f.normal);
  return 0.5 * (cells[f.cells[0]] + cells[f.cells[1]]).dot(f.normal);
}

std::vector<const BoundarySegment*> segments_by_tag(const Mesh& mesh,
                                                    const std::vector<BoundarySegment>& segments) {
  std::vector<const BoundarySegment*> out;
  for (const auto& name : mesh.tag_names()) {
    const BoundarySegment* seg = nullptr;
    for (const auto& s : segments)
      if (s.tag == name) seg = &s;
    if (!seg) throw std::invalid_argument("boundary tag '" + name + "' has no segment");
    out.push_back(seg);
  }
  return out;
}

namespace {

VelocityField uniform(const Mesh& mesh, const Eigen::Vector2d& value, VelocitySpec source) {
  VelocityField u;
  u.cells.assign(mesh.num_cells(), value);
  u.source = source;
  u.potential = DgFunction::interpolate(mesh, [&](const Eigen::Vector2d& x) { return value.dot(x); });
  return u;
}

Eigen::Vector2d restrict_to_dim(const Mesh& mesh, Eigen::Vector2d v) {
  if (mesh.dim() == 1) {
    if (v.y() != 0.0) throw std::invalid_argument("1D velocity must have zero y component");
  }
  return v;
}

}  // namespace

VelocityField resolve_constant(const Mesh& mesh, const Eigen::Vector2d& value) {
  if (value.isZero(0.0)) throw std::invalid_argument("constant velocity must be nonzero");
  return uniform(mesh, restrict_to_dim(mesh, value), ConstantVelocity{value});
}

VelocityField resolve_linear(const Mesh& mesh, const Eigen::Vector2d& direction) {
  if (direction.isZero(0.0)) throw std::invalid_argument("potential direction must be nonzero");
  return uniform(mesh, restrict_to_dim(mesh, direction), LinearPotentialVelocity{direction});
}

VelocityField solve_harmonic_potential(const Mesh& mesh,
                                       const std::vector<BoundarySegment>& segments,
                                       int pin_face) {
  const auto by_tag = segments_by_tag(mesh, segments);
  const int nf = static_cast<int>(mesh.num_faces());
  const int nc = static_cast<int>(mesh.num_cells());
  const int d = mesh.dim();

  double in_measure = 0.0, out_measure = 0.0;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(nf);
  for (int f = 0; f < nf; ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) continue;
    const auto kind = by_tag[face.tag]->kind;
    if (kind == SegmentKind::Inflow) {
      in_measure += face.measure;
      load[f] = -face.measure;
    } else if (kind == SegmentKind::Outflow) {
      out_measure += face.measure;
      load[f] = face.measure;
    }
  }
  if (std::abs(in_measure - out_measure) > 1e-10)
    throw std::invalid_argument("harmonic potential needs equal inflow and outflow measure (" +
                                std::to_string(in_measure) + " vs " +
                                std::to_string(out_measure) + ")");

  if (pin_face < 0) {
    for (int f = 0; f < nf && pin_face < 0; ++f)
      if (mesh.face(f).is_boundary()) pin_face = f;
  }
  if (pin_face < 0 || pin_face >= nf) throw std::invalid_argument("invalid pinned face");

  // Reduced numbering skipping the pinned DOF.
  const auto reduced = [&](int f) { return f < pin_face ? f : f - 1; };
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nc) * (d + 1) * (d + 1));
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < d + 1; ++k) {
      const int fk = mesh.cell_face(c, k);
      if (fk == pin_face) continue;
      for (int l = 0; l < d + 1; ++l) {
        const int fl = mesh.cell_face(c, l);
        if (fl == pin_face) continue;
        // grad phi_F = -d grad(lambda of the opposite vertex)
        const double v = d * d * mesh.cell_measure(c) *
                         mesh.barycentric_gradient(c, k).dot(mesh.barycentric_gradient(c, l));
        triplets.emplace_back(reduced(fk), reduced(fl), v);
      }
    }
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(nf);
  if (nf > 1) {
    Eigen::SparseMatrix<double> K(nf - 1, nf - 1);
    K.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::VectorXd b(nf - 1);
    for (int f = 0; f < nf; ++f)
      if (f != pin_face) b[reduced(f)] = load[f];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("harmonic potential: pinned Neumann system is singular");
    const Eigen::VectorXd x = ldlt.solve(b);
    if (ldlt.info() != Eigen::Success || !x.allFinite())
      throw std::runtime_error("harmonic potential: solve failed");
    for (int f = 0; f < nf; ++f)
      if (f != pin_face) values[f] = x[reduced(f)];
  }

  VelocityField u;
  u.source = HarmonicPotentialVelocity{};
  u.cells.resize(nc);
  DgFunction potential(mesh);
  for (int c = 0; c < nc; ++c) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    double sum = 0.0;
    for (int k = 0; k < d + 1; ++k) {
      const double vf = values[mesh.cell_face(c, k)];
      g -= d * vf * mesh.barycentric_gradient(c, k);
      sum += vf;
    }
    u.cells[c] = g;
    // phi_{F_k}(vertex m) = 1 - d delta_km
    for (int m = 0; m < d + 1; ++m) potential(c, m) = sum - d * values[mesh.cell_face(c, m)];
  }
  u.potential = std::move(potential);
  return u;
}

VelocityField resolve_velocity(const Mesh& mesh, const ModelParams& params) {
  return std::visit(
      [&](const auto& spec) -> VelocityField {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ConstantVelocity>)
          return resolve_constant(mesh, spec.value);
        else if constexpr (std::is_same_v<T, LinearPotentialVelocity>)
          return resolve_linear(mesh, spec.direction);
        else
          return solve_harmonic_potential(mesh, params.segments);
      },
      params.velocity);
}

double divergence_residual(const Mesh& mesh, const VelocityField& u) {
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    double s = 0.0;
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      const int f = mesh.cell_face(c, k);
      const Face& face = mesh.face(f);
      const double sign = face.cells[0] == c ? 1.0 : -1.0;
      s += sign * face.measure * u.face_normal(mesh, f);
    }
    total += std::abs(s);
  }
  return total;
}

BoundaryFluxBalance boundary_flux_balance(const Mesh& mesh, const VelocityField& u,
                                          const std::vector<BoundarySegment>& segments) {
  const auto by_tag = segments_by_tag(mesh, segments);
  BoundaryFluxBalance b;
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) continue;
    const double flux = face.measure * u.face_normal(mesh, f);
    switch (by_tag[face.tag]->kind) {
      case SegmentKind::Inflow: b.inflow += flux; break;
      case SegmentKind::Outflow: b.outflow += flux; break;
      case SegmentKind::Wall: b.wall += flux; break;
    }
  }
  return b;
}

}  // namespace crowdflow
