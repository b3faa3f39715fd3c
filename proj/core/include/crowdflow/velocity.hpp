#pragma once

#include "crowdflow/dg_function.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace crowdflow {

/// Piecewise constant velocity, one vector per cell.
struct VelocityField {
  std::vector<Eigen::Vector2d> cells;
  VelocitySpec source;
  /// Potential V with u = grad V, when the field has one.
  std::optional<DgFunction> potential;

  const Eigen::Vector2d& operator[](int cell) const { return cells[cell]; }
  /// {u} . n_F on interior faces, u . n_F on boundary faces.
  double face_normal(const Mesh& mesh, int face) const;
};

/// Uniform field. Throws std::invalid_argument for a zero vector.
VelocityField resolve_constant(const Mesh& mesh, const Eigen::Vector2d& value);

/// u = grad(direction . x).
VelocityField resolve_linear(const Mesh& mesh, const Eigen::Vector2d& direction);

/// u = grad V for the harmonic V with dV/dn = -1 on inflow segments, +1 on
/// outflow segments and 0 on walls. V is discretized with nonconforming
/// (Crouzeix-Raviart) P1 elements, whose broken gradient has continuous
/// normal components, so the field is exactly divergence free cell by cell.
/// The constant is fixed by pinning the face DOF `pin_face`, or the first
/// boundary face when negative.
///
/// Throws std::invalid_argument when the inflow and outflow measures differ
/// by more than 1e-10 or a boundary tag has no segment, std::runtime_error
/// when the pinned system is singular.
VelocityField solve_harmonic_potential(const Mesh& mesh,
                                       const std::vector<BoundarySegment>& segments,
                                       int pin_face = -1);

VelocityField resolve_velocity(const Mesh& mesh, const ModelParams& params);

/// Sum over cells of |integral over the cell boundary of u . n|, with
/// interior faces carrying the average of the two cell velocities.
double divergence_residual(const Mesh& mesh, const VelocityField& u);

struct BoundaryFluxBalance {
  double inflow = 0.0;
  double outflow = 0.0;
  double wall = 0.0;
  double total() const { return inflow + outflow + wall; }
};

/// Integrals of u . n over the inflow, outflow and wall parts of the boundary.
BoundaryFluxBalance boundary_flux_balance(const Mesh& mesh, const VelocityField& u,
                                          const std::vector<BoundarySegment>& segments);

/// Segment for every mesh tag id; throws std::invalid_argument for a tag
/// without a segment.
std::vector<const BoundarySegment*> segments_by_tag(const Mesh& mesh,
                                                    const std::vector<BoundarySegment>& segments);

}  // namespace crowdflow
