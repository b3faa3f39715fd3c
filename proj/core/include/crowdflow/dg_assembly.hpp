#pragma once

#include "crowdflow/dg_function.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"
#include "crowdflow/velocity.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace crowdflow {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct PenaltyConfig {
  double eta = 10.0;
};

/// Trace average and jump (cells[0] minus cells[1]) at the face quadrature
/// points. One point in 1D, two Gauss points in 2D.
struct FaceTraces {
  int num_points = 0;
  std::array<double, 2> average{};
  std::array<double, 2> jump{};
};

/// Throws std::invalid_argument on a boundary face.
FaceTraces face_average_jump(const DgFunction& v, int face);

/// Quadrature on a face: positions t along the face (from vertices[0] to
/// vertices[1]) and weights summing to the face measure.
struct FaceQuadrature {
  int num_points;
  std::array<double, 2> t;
  std::array<double, 2> weight;
};
FaceQuadrature face_quadrature(const Face& face);

/// Value of local basis function k of cell `face.cells[side]` at face point t.
double face_basis(const Face& face, int side, int k, double t);

SparseMatrix assemble_mass(const Mesh& mesh);

/// eps (grad rho, grad phi) minus the symmetric consistency terms plus the
/// penalty eta eps / h_F on interior faces.
SparseMatrix assemble_swip(const Mesh& mesh, double epsilon, const PenaltyConfig& penalty = {});

/// Advection form linearized at rho_prev: -(rho (1 - rho_prev) u, grad phi)
/// plus, on interior faces, the upwind flux (1 - {rho_prev}) {u}.n {rho} [phi]
/// + 1/2 |(1 - {rho_prev}) {u}.n| [rho] [phi].
SparseMatrix assemble_upwind(const Mesh& mesh, const VelocityField& velocity,
                             const DgFunction& rho_prev);

/// Robin terms: alpha (rho, phi) on inflow faces, beta (rho, phi) on
/// outflow faces; the load alpha (1, phi) on inflow faces.
struct BoundaryForms {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};
BoundaryForms assemble_boundary(const Mesh& mesh, const std::vector<BoundarySegment>& segments);

/// Sparsity pattern holding every cell block and every interior face
/// coupling, so all forms above can be written into one value array.
/// `add` requires (i, j) to be in the pattern.
class OperatorPattern {
 public:
  explicit OperatorPattern(const Mesh& mesh);

  const SparseMatrix& zero() const { return pattern_; }
  /// Number of off-diagonals below/above the main diagonal.
  int lower_bandwidth() const { return lower_; }
  int upper_bandwidth() const { return upper_; }

  void add_mass(SparseMatrix& m, double scale) const;
  void add_swip(SparseMatrix& m, double epsilon, const PenaltyConfig& penalty, double scale) const;
  void add_upwind(SparseMatrix& m, const VelocityField& velocity, const DgFunction& rho_prev,
                  double scale) const;
  void add_boundary(SparseMatrix& m, Eigen::VectorXd* rhs,
                    const std::vector<BoundarySegment>& segments, double scale) const;

  /// Position in the value array of entry (test cell rc row k, first
  /// column of trial cell cc); columns of one cell are contiguous.
  using BlockOffsets = std::array<int, 3>;

 private:
  void scatter(SparseMatrix& m, const BlockOffsets& at, const std::array<std::array<double, 3>, 3>& b,
               double scale) const;

  const Mesh* mesh_;
  SparseMatrix pattern_;
  int lower_ = 0;
  int upper_ = 0;
  std::vector<BlockOffsets> cell_blocks_;
  // Per face, blocks (test side, trial side) in the order 00, 01, 10, 11.
  std::vector<std::array<BlockOffsets, 4>> face_blocks_;
};

}  // namespace crowdflow
