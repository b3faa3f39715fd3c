#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace crowdflow {

inline constexpr int kInteriorTag = -1;

/// A cell facet: a point in 1D, an edge in 2D.
///
/// `cells[0]` is always set; `cells[1]` is -1 on the boundary. The normal
/// points from cells[0] into cells[1], or outward on the boundary.
/// `local[s][k]` is the position of vertex k of this face inside the vertex
/// list of cells[s].
struct Face {
  std::array<int, 2> vertices{-1, -1};
  int num_vertices = 0;
  std::array<int, 2> cells{-1, -1};
  std::array<std::array<int, 2>, 2> local{{{-1, -1}, {-1, -1}}};
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double measure = 0.0;
  int tag = kInteriorTag;
  double h = 0.0;

  bool is_boundary() const { return cells[1] < 0; }
};

/// Chooses a boundary tag for a boundary face from its midpoint and outward
/// normal.
using BoundaryTagger =
    std::function<std::string(const Eigen::Vector2d& midpoint, const Eigen::Vector2d& normal)>;

/// Simplicial mesh in 1D (intervals) or 2D (counterclockwise triangles).
/// 1D coordinates are stored in the x component with y = 0. Immutable once
/// built.
class Mesh {
 public:
  using Cell = std::array<int, 3>;

  /// Builds faces, normals and length scales from a cell list. Throws
  /// std::invalid_argument for degenerate or clockwise cells, vertex
  /// indices out of range, or facets shared by more than two cells.
  static Mesh from_cells(int dim, std::vector<Eigen::Vector2d> vertices,
                         std::vector<Cell> cells, const BoundaryTagger& tagger);

  int dim() const { return dim_; }
  int vertices_per_cell() const { return dim_ + 1; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  std::span<const int> cell(int c) const {
    return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)};
  }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }

  /// Face opposite local vertex k of cell c.
  int cell_face(int c, int k) const { return cell_faces_[c][k]; }

  double cell_measure(int c) const { return cell_measures_[c]; }
  double cell_diameter(int c) const { return cell_diameters_[c]; }
  const std::vector<double>& cell_diameters() const { return cell_diameters_; }

  /// Gradient of the barycentric coordinate of local vertex k on cell c.
  const Eigen::Vector2d& barycentric_gradient(int c, int k) const {
    return bary_gradients_[c][k];
  }
  Eigen::Vector2d centroid(int c) const;
  Eigen::Vector2d face_midpoint(int f) const;

  const std::vector<std::string>& tag_names() const { return tag_names_; }
  int tag_id(std::string_view name) const;  // -1 if absent
  std::string_view face_tag(int f) const;   // "" for interior faces

  std::size_t num_interior_faces() const;
  std::size_t num_boundary_faces() const;

 private:
  int dim_ = 1;
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> cell_faces_;
  std::vector<double> cell_measures_;
  std::vector<double> cell_diameters_;
  std::vector<std::array<Eigen::Vector2d, 3>> bary_gradients_;
  std::vector<std::string> tag_names_;
};

enum class Side { Left, Right };

/// A door on the left (x = 0) or right (x = length) corridor wall, spanning
/// y_lo < y < y_hi. The interval is snapped to the nearest horizontal grid
/// lines.
struct DoorSpec {
  Side side = Side::Left;
  double y_lo = 0.0;
  double y_hi = 1.0;
  std::string tag;
};

struct CorridorSpec {
  int nx = 80;
  int ny = 40;
  double length = 2.0;
  double height = 1.0;
  std::vector<DoorSpec> doors;
};

struct ObstacleSpec {
  Eigen::Vector2d center{1.7, 0.5};
  double radius = 0.2;
};

struct IntervalSpec {
  int cells = 200;
};

struct CorridorWithObstacleSpec {
  CorridorSpec corridor;
  ObstacleSpec obstacle;
};

using GeometrySpec = std::variant<IntervalSpec, CorridorSpec, CorridorWithObstacleSpec>;

inline constexpr std::string_view kInflowTag = "inflow";
inline constexpr std::string_view kOutflowTag = "outflow";
inline constexpr std::string_view kWallTag = "wall";

/// Two entrances and two exits at 0.65 < y < 0.85 (tags in1/out1) and
/// 0.15 < y < 0.35 (tags in2/out2).
std::vector<DoorSpec> standard_corridor_doors();

/// n uniform cells on [0, 1]; x = 0 tagged "inflow", x = 1 "outflow".
Mesh build_interval_mesh(int n);

/// [0, length] x [0, height], each grid rectangle split along its
/// lower-left to upper-right diagonal. Door faces get the door tag, every
/// other boundary face "wall".
Mesh build_corridor_mesh(const CorridorSpec& spec);

/// Corridor mesh minus the triangles whose centroid lies inside the disk.
/// Exposed faces are tagged "wall". Throws if the remaining mesh is not
/// edge-connected or the disk touches the outer wall or door columns.
Mesh build_obstacle_mesh(const CorridorSpec& corridor, const ObstacleSpec& obstacle);

Mesh build_mesh(const GeometrySpec& spec);

/// True if every cell can be reached from cell 0 through interior faces.
bool is_connected(const Mesh& mesh);

double total_cell_measure(const Mesh& mesh);
double boundary_measure(const Mesh& mesh);
double tagged_measure(const Mesh& mesh, std::string_view tag);

}  // namespace crowdflow
