#include "crowdflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

namespace crowdflow {

namespace {

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {v.y(), -v.x()}; }

}  // namespace

Mesh Mesh::from_cells(int dim, std::vector<Eigen::Vector2d> vertices, std::vector<Cell> cells,
                      const BoundaryTagger& tagger) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("mesh dimension must be 1 or 2");
  if (cells.empty()) throw std::invalid_argument("mesh has no cells");

  Mesh mesh;
  mesh.dim_ = dim;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);

  const int nv = static_cast<int>(mesh.vertices_.size());
  const int nloc = dim + 1;
  const std::size_t nc = mesh.cells_.size();
  mesh.cell_measures_.resize(nc);
  mesh.cell_diameters_.resize(nc);
  mesh.bary_gradients_.resize(nc);
  mesh.cell_faces_.resize(nc);

  for (std::size_t c = 0; c < nc; ++c) {
    auto& cell = mesh.cells_[c];
    for (int k = 0; k < nloc; ++k) {
      if (cell[k] < 0 || cell[k] >= nv)
        throw std::invalid_argument("cell " + std::to_string(c) + " references vertex " +
                                    std::to_string(cell[k]) + " out of range");
    }
    if (dim == 1) {
      cell[2] = -1;
      const double x0 = mesh.vertices_[cell[0]].x();
      const double x1 = mesh.vertices_[cell[1]].x();
      const double len = x1 - x0;
      if (!(len > 0.0))
        throw std::invalid_argument("interval cell " + std::to_string(c) +
                                    " must have x0 < x1");
      mesh.cell_measures_[c] = len;
      mesh.cell_diameters_[c] = len;
      mesh.bary_gradients_[c][0] = {-1.0 / len, 0.0};
      mesh.bary_gradients_[c][1] = {1.0 / len, 0.0};
      mesh.bary_gradients_[c][2] = Eigen::Vector2d::Zero();
    } else {
      const Eigen::Vector2d& p0 = mesh.vertices_[cell[0]];
      const Eigen::Vector2d& p1 = mesh.vertices_[cell[1]];
      const Eigen::Vector2d& p2 = mesh.vertices_[cell[2]];
      const Eigen::Vector2d e1 = p1 - p0;
      const Eigen::Vector2d e2 = p2 - p0;
      const double twice_area = e1.x() * e2.y() - e1.y() * e2.x();
      if (!(twice_area > 0.0))
        throw std::invalid_argument("triangle " + std::to_string(c) +
                                    " is degenerate or clockwise");
      mesh.cell_measures_[c] = 0.5 * twice_area;
      mesh.cell_diameters_[c] =
          std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
      // grad(lambda_k) = -perp(opposite edge, oriented ccw) / (2|T|)
      const std::array<const Eigen::Vector2d*, 3> p{&p0, &p1, &p2};
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d edge = *p[(k + 2) % 3] - *p[(k + 1) % 3];
        mesh.bary_gradients_[c][k] = -perp(edge) / twice_area;
      }
    }
  }

  // Facets keyed by their sorted vertex tuple, numbered in order of first
  // appearance while sweeping cells and local facets.
  std::map<std::array<int, 2>, int> lookup;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells_[c];
    for (int k = 0; k < nloc; ++k) {
      std::array<int, 2> lv{-1, -1};
      int n = 0;
      for (int m = 0; m < nloc; ++m)
        if (m != k) lv[n++] = m;
      std::array<int, 2> key{cell[lv[0]], n == 2 ? cell[lv[1]] : -1};
      if (n == 2 && key[0] > key[1]) {
        std::swap(key[0], key[1]);
        std::swap(lv[0], lv[1]);
      }
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(mesh.faces_.size()));
      if (inserted) {
        Face face;
        face.num_vertices = n;
        face.vertices = key;
        face.cells[0] = static_cast<int>(c);
        face.local[0] = lv;
        mesh.faces_.push_back(face);
      } else {
        Face& face = mesh.faces_[it->second];
        if (face.cells[1] >= 0)
          throw std::invalid_argument("facet shared by more than two cells at cell " +
                                      std::to_string(c));
        face.cells[1] = static_cast<int>(c);
        face.local[1] = lv;
      }
      mesh.cell_faces_[c][k] = it->second;
    }
    if (dim == 1) mesh.cell_faces_[c][2] = -1;
  }

  for (std::size_t f = 0; f < mesh.faces_.size(); ++f) {
    Face& face = mesh.faces_[f];
    const int c0 = face.cells[0];
    const auto& cell = mesh.cells_[c0];
    if (dim == 1) {
      const int v = face.vertices[0];
      const int other = cell[0] == v ? cell[1] : cell[0];
      face.normal = {mesh.vertices_[v].x() > mesh.vertices_[other].x() ? 1.0 : -1.0, 0.0};
      face.measure = 1.0;
    } else {
      const Eigen::Vector2d& a = mesh.vertices_[face.vertices[0]];
      const Eigen::Vector2d& b = mesh.vertices_[face.vertices[1]];
      face.measure = (b - a).norm();
      Eigen::Vector2d n = perp(b - a) / face.measure;
      const int opposite = cell[0] + cell[1] + cell[2] - face.vertices[0] - face.vertices[1];
      if (n.dot(mesh.vertices_[opposite] - a) > 0.0) n = -n;
      face.normal = n;
    }
    if (face.is_boundary()) {
      face.h = mesh.cell_diameters_[c0];
    } else {
      face.h = 0.5 * (mesh.cell_diameters_[c0] + mesh.cell_diameters_[face.cells[1]]);
    }
  }

  for (std::size_t f = 0; f < mesh.faces_.size(); ++f) {
    Face& face = mesh.faces_[f];
    if (!face.is_boundary()) continue;
    std::string name = tagger(mesh.face_midpoint(static_cast<int>(f)), face.normal);
    if (name.empty())
      throw std::invalid_argument("boundary face " + std::to_string(f) + " left untagged");
    int id = mesh.tag_id(name);
    if (id < 0) {
      id = static_cast<int>(mesh.tag_names_.size());
      mesh.tag_names_.push_back(std::move(name));
    }
    face.tag = id;
  }
  return mesh;
}

Eigen::Vector2d Mesh::centroid(int c) const {
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (int v : cell(c)) s += vertices_[v];
  return s / static_cast<double>(dim_ + 1);
}

Eigen::Vector2d Mesh::face_midpoint(int f) const {
  const Face& face = faces_[f];
  if (face.num_vertices == 1) return vertices_[face.vertices[0]];
  return 0.5 * (vertices_[face.vertices[0]] + vertices_[face.vertices[1]]);
}

int Mesh::tag_id(std::string_view name) const {
  for (std::size_t i = 0; i < tag_names_.size(); ++i)
    if (tag_names_[i] == name) return static_cast<int>(i);
  return -1;
}

std::string_view Mesh::face_tag(int f) const {
  const int t = faces_[f].tag;
  return t == kInteriorTag ? std::string_view{} : std::string_view{tag_names_[t]};
}

std::size_t Mesh::num_interior_faces() const {
  return static_cast<std::size_t>(
      std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return !f.is_boundary(); }));
}

std::size_t Mesh::num_boundary_faces() const { return faces_.size() - num_interior_faces(); }

std::vector<DoorSpec> standard_corridor_doors() {
  return {
      {Side::Left, 0.65, 0.85, "in1"},
      {Side::Left, 0.15, 0.35, "in2"},
      {Side::Right, 0.65, 0.85, "out1"},
      {Side::Right, 0.15, 0.35, "out2"},
  };
}

Mesh build_interval_mesh(int n) {
  if (n < 1) throw std::invalid_argument("interval mesh needs at least one cell");
  std::vector<Eigen::Vector2d> vertices(n + 1);
  for (int i = 0; i <= n; ++i) vertices[i] = {static_cast<double>(i) / n, 0.0};
  std::vector<Mesh::Cell> cells(n);
  for (int i = 0; i < n; ++i) cells[i] = {i, i + 1, -1};
  return Mesh::from_cells(1, std::move(vertices), std::move(cells),
                          [](const Eigen::Vector2d&, const Eigen::Vector2d& normal) {
                            return std::string(normal.x() < 0.0 ? kInflowTag : kOutflowTag);
                          });
}

namespace {

struct SnappedDoor {
  Side side;
  int lo;
  int hi;
  std::string tag;
};

std::vector<SnappedDoor> snap_doors(const CorridorSpec& spec) {
  std::vector<SnappedDoor> snapped;
  for (const auto& door : spec.doors) {
    if (door.tag.empty()) throw std::invalid_argument("door needs a tag");
    if (door.tag == kWallTag) throw std::invalid_argument("door tag 'wall' is reserved");
    if (!(door.y_lo >= 0.0 && door.y_hi <= spec.height && door.y_lo < door.y_hi))
      throw std::invalid_argument("door '" + door.tag + "' interval outside the corridor wall");
    const int lo = static_cast<int>(std::lround(door.y_lo / spec.height * spec.ny));
    const int hi = static_cast<int>(std::lround(door.y_hi / spec.height * spec.ny));
    if (hi <= lo)
      throw std::invalid_argument("door '" + door.tag + "' is narrower than one grid cell");
    snapped.push_back({door.side, lo, hi, door.tag});
  }
  for (std::size_t i = 0; i < spec.doors.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.doors.size(); ++j) {
      const auto& a = spec.doors[i];
      const auto& b = spec.doors[j];
      if (a.tag == b.tag) throw std::invalid_argument("duplicate door tag '" + a.tag + "'");
      if (a.side != b.side) continue;
      const bool raw_overlap = a.y_lo < b.y_hi && b.y_lo < a.y_hi;
      const bool snapped_overlap = snapped[i].lo < snapped[j].hi && snapped[j].lo < snapped[i].hi;
      if (raw_overlap || snapped_overlap)
        throw std::invalid_argument("doors '" + a.tag + "' and '" + b.tag + "' overlap");
    }
  }
  return snapped;
}

struct CorridorGrid {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Mesh::Cell> cells;
};

CorridorGrid corridor_grid(const CorridorSpec& spec) {
  if (spec.nx < 2 && spec.ny < 2)
    throw std::invalid_argument("corridor grid too coarse");
  if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("corridor grid needs nx, ny >= 1");
  if (!(spec.length > 0.0 && spec.height > 0.0))
    throw std::invalid_argument("corridor dimensions must be positive");
  CorridorGrid g;
  g.vertices.reserve(static_cast<std::size_t>(spec.nx + 1) * (spec.ny + 1));
  for (int j = 0; j <= spec.ny; ++j)
    for (int i = 0; i <= spec.nx; ++i)
      g.vertices.emplace_back(spec.length * i / spec.nx, spec.height * j / spec.ny);
  const auto id = [&](int i, int j) { return j * (spec.nx + 1) + i; };
  g.cells.reserve(static_cast<std::size_t>(2) * spec.nx * spec.ny);
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      g.cells.push_back({v00, v10, v11});
      g.cells.push_back({v00, v11, v01});
    }
  }
  return g;
}

BoundaryTagger corridor_tagger(const CorridorSpec& spec, std::vector<SnappedDoor> doors) {
  const double dy = spec.height / spec.ny;
  const double tol = 1e-9 * std::max(spec.length, spec.height);
  return [=](const Eigen::Vector2d& mid, const Eigen::Vector2d& normal) {
    const bool left = normal.x() < -0.5 && std::abs(mid.x()) < tol;
    const bool right = normal.x() > 0.5 && std::abs(mid.x() - spec.length) < tol;
    if (left || right) {
      const double row = mid.y() / dy;
      for (const auto& d : doors) {
        if ((d.side == Side::Left) != left) continue;
        if (row > d.lo && row < d.hi) return d.tag;
      }
    }
    return std::string(kWallTag);
  };
}

}  // namespace

Mesh build_corridor_mesh(const CorridorSpec& spec) {
  auto doors = snap_doors(spec);
  auto grid = corridor_grid(spec);
  return Mesh::from_cells(2, std::move(grid.vertices), std::move(grid.cells),
                          corridor_tagger(spec, std::move(doors)));
}

Mesh build_obstacle_mesh(const CorridorSpec& corridor, const ObstacleSpec& obstacle) {
  auto doors = snap_doors(corridor);
  const double hx = corridor.length / corridor.nx;
  const Eigen::Vector2d& c = obstacle.center;
  const double r = obstacle.radius;
  if (!(r > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
  if (!(c.x() - r > hx && c.x() + r < corridor.length - hx && c.y() - r > 0.0 &&
        c.y() + r < corridor.height))
    throw std::invalid_argument(
        "obstacle must lie strictly inside the corridor, clear of the door columns");

  auto grid = corridor_grid(corridor);
  std::vector<Mesh::Cell> kept;
  kept.reserve(grid.cells.size());
  for (const auto& cell : grid.cells) {
    const Eigen::Vector2d centroid =
        (grid.vertices[cell[0]] + grid.vertices[cell[1]] + grid.vertices[cell[2]]) / 3.0;
    if ((centroid - c).squaredNorm() >= r * r) kept.push_back(cell);
  }

  // Compact vertices no longer referenced by any cell, keeping their order.
  std::vector<int> remap(grid.vertices.size(), -1);
  for (const auto& cell : kept)
    for (int k = 0; k < 3; ++k) remap[cell[k]] = 0;
  std::vector<Eigen::Vector2d> vertices;
  for (std::size_t old = 0; old < remap.size(); ++old) {
    if (remap[old] < 0) continue;
    remap[old] = static_cast<int>(vertices.size());
    vertices.push_back(grid.vertices[old]);
  }
  for (auto& cell : kept)
    for (int k = 0; k < 3; ++k) cell[k] = remap[cell[k]];

  Mesh mesh = Mesh::from_cells(2, std::move(vertices), std::move(kept),
                               corridor_tagger(corridor, std::move(doors)));
  if (!is_connected(mesh))
    throw std::invalid_argument("obstacle disconnects the corridor mesh");
  return mesh;
}

Mesh build_mesh(const GeometrySpec& spec) {
  return std::visit(
      [](const auto& s) -> Mesh {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntervalSpec>) {
          return build_interval_mesh(s.cells);
        } else if constexpr (std::is_same_v<T, CorridorSpec>) {
          return build_corridor_mesh(s);
        } else {
          return build_obstacle_mesh(s.corridor, s.obstacle);
        }
      },
      spec);
}

bool is_connected(const Mesh& mesh) {
  const std::size_t nc = mesh.num_cells();
  std::vector<char> seen(nc, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop();
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      const Face& f = mesh.face(mesh.cell_face(c, k));
      if (f.is_boundary()) continue;
      const int other = f.cells[0] == c ? f.cells[1] : f.cells[0];
      if (!seen[other]) {
        seen[other] = 1;
        ++count;
        queue.push(other);
      }
    }
  }
  return count == nc;
}

double total_cell_measure(const Mesh& mesh) {
  double s = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) s += mesh.cell_measure(static_cast<int>(c));
  return s;
}

double boundary_measure(const Mesh& mesh) {
  double s = 0.0;
  for (const auto& f : mesh.faces())
    if (f.is_boundary()) s += f.measure;
  return s;
}

double tagged_measure(const Mesh& mesh, std::string_view tag) {
  const int id = mesh.tag_id(tag);
  double s = 0.0;
  if (id < 0) return s;
  for (const auto& f : mesh.faces())
    if (f.tag == id) s += f.measure;
  return s;
}

}  // namespace crowdflow
