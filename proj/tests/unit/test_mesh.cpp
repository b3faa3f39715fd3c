#include "crowdflow/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace crowdflow;

namespace {

// Bookkeeping every mesh must satisfy.
void check_invariants(const Mesh& mesh) {
  std::vector<int> face_count(mesh.num_faces(), 0);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    EXPECT_GT(mesh.cell_measure(c), 0.0);
    Eigen::Vector2d grad_sum = Eigen::Vector2d::Zero();
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      const int f = mesh.cell_face(c, k);
      ++face_count[f];
      const Face& face = mesh.face(f);
      EXPECT_TRUE(face.cells[0] == c || face.cells[1] == c);
      // The face opposite vertex k does not contain that vertex.
      const int v = mesh.cell(c)[k];
      for (int i = 0; i < face.num_vertices; ++i) EXPECT_NE(face.vertices[i], v);
      // Barycentric gradient k is the inward normal of the opposite face
      // scaled by 1 / height.
      const auto& g = mesh.barycentric_gradient(c, k);
      const double sign = face.cells[0] == c ? -1.0 : 1.0;
      const double height = mesh.dim() == 1 ? mesh.cell_measure(c)
                                            : 2.0 * mesh.cell_measure(c) / face.measure;
      EXPECT_NEAR((g - sign * face.normal / height).norm(), 0.0, 1e-10);
      grad_sum += g;
    }
    EXPECT_NEAR(grad_sum.norm(), 0.0, 1e-10);
  }
  double divergence = 0.0;
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
    const Face& face = mesh.face(f);
    EXPECT_EQ(face_count[f], face.is_boundary() ? 1 : 2);
    EXPECT_NEAR(face.normal.norm(), 1.0, 1e-12);
    EXPECT_GT(face.measure, 0.0);
    EXPECT_GT(face.h, 0.0);
    EXPECT_EQ(face.is_boundary(), face.tag != kInteriorTag);
    for (int s = 0; s < (face.is_boundary() ? 1 : 2); ++s)
      for (int k = 0; k < face.num_vertices; ++k)
        EXPECT_EQ(mesh.cell(face.cells[s])[face.local[s][k]], face.vertices[k]);
    if (face.is_boundary()) {
      // Outward: points away from the owning cell's centroid.
      EXPECT_GT(face.normal.dot(mesh.face_midpoint(f) - mesh.centroid(face.cells[0])), 0.0);
      divergence += face.measure * face.normal.x();
    } else {
      EXPECT_GT(face.normal.dot(mesh.centroid(face.cells[1]) - mesh.centroid(face.cells[0])), 0.0);
    }
  }
  // Closed boundary: integral of n over the boundary vanishes in 2D.
  if (mesh.dim() == 2) EXPECT_NEAR(divergence, 0.0, 1e-10);
  EXPECT_EQ(mesh.num_interior_faces() + mesh.num_boundary_faces(), mesh.num_faces());
  EXPECT_TRUE(is_connected(mesh));
}

}  // namespace

TEST(IntervalMesh, Structure) {
  const Mesh mesh = build_interval_mesh(5);
  EXPECT_EQ(mesh.dim(), 1);
  EXPECT_EQ(mesh.num_cells(), 5u);
  EXPECT_EQ(mesh.num_vertices(), 6u);
  EXPECT_EQ(mesh.num_faces(), 6u);
  EXPECT_EQ(mesh.num_boundary_faces(), 2u);
  EXPECT_NEAR(total_cell_measure(mesh), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(tagged_measure(mesh, "inflow"), 1.0);
  EXPECT_DOUBLE_EQ(tagged_measure(mesh, "outflow"), 1.0);
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
    if (mesh.face_tag(f) == "inflow") {
      EXPECT_DOUBLE_EQ(mesh.face_midpoint(f).x(), 0.0);
      EXPECT_DOUBLE_EQ(mesh.face(f).normal.x(), -1.0);
    }
    if (mesh.face_tag(f) == "outflow") EXPECT_DOUBLE_EQ(mesh.face(f).normal.x(), 1.0);
  }
  check_invariants(mesh);
  EXPECT_THROW(build_interval_mesh(0), std::invalid_argument);
}

TEST(CorridorMesh, CountsAndTags) {
  CorridorSpec spec;
  spec.nx = 20;
  spec.ny = 10;
  spec.doors = standard_corridor_doors();
  const Mesh mesh = build_corridor_mesh(spec);
  EXPECT_EQ(mesh.num_cells(), 2u * 20 * 10);
  EXPECT_EQ(mesh.num_vertices(), 21u * 11);
  EXPECT_EQ(mesh.num_boundary_faces(), 2u * (20 + 10));
  EXPECT_NEAR(total_cell_measure(mesh), 2.0, 1e-12);
  EXPECT_NEAR(boundary_measure(mesh), 6.0, 1e-12);
  for (const char* tag : {"in1", "in2", "out1", "out2"})
    EXPECT_NEAR(tagged_measure(mesh, tag), 0.2, 1e-12) << tag;
  EXPECT_NEAR(tagged_measure(mesh, "wall"), 6.0 - 0.8, 1e-12);
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
    if (mesh.face_tag(f) == "in1") {
      const auto m = mesh.face_midpoint(f);
      EXPECT_DOUBLE_EQ(m.x(), 0.0);
      // [0.65, 0.85] snaps to rows 7..9 of 10.
      EXPECT_GT(m.y(), 0.7);
      EXPECT_LT(m.y(), 0.9);
    }
  }
  check_invariants(mesh);
}

TEST(CorridorMesh, DoorsSnapToGridLines) {
  CorridorSpec spec;
  spec.nx = 4;
  spec.ny = 4;
  spec.doors = {{Side::Left, 0.2, 0.55, "in"}};
  const Mesh mesh = build_corridor_mesh(spec);
  EXPECT_NEAR(tagged_measure(mesh, "in"), 0.25, 1e-12);
}

TEST(CorridorMesh, RejectsBadDoors) {
  CorridorSpec spec;
  spec.nx = 10;
  spec.ny = 10;
  spec.doors = {{Side::Left, 0.2, 0.5, "a"}, {Side::Left, 0.4, 0.7, "b"}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
  spec.doors = {{Side::Left, 0.2, 0.5, "a"}, {Side::Right, 0.2, 0.5, "a"}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
  spec.doors = {{Side::Left, 0.2, 0.5, "wall"}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
  spec.doors = {{Side::Left, 0.5, 1.5, "a"}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
  spec.doors = {{Side::Left, 0.51, 0.52, "a"}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
  spec.doors = {{Side::Left, 0.2, 0.5, ""}};
  EXPECT_THROW(build_corridor_mesh(spec), std::invalid_argument);
}

TEST(ObstacleMesh, HoleIsWalled) {
  CorridorSpec spec;
  spec.nx = 40;
  spec.ny = 20;
  spec.doors = standard_corridor_doors();
  ObstacleSpec obstacle{{1.0, 0.5}, 0.2};
  const Mesh mesh = build_obstacle_mesh(spec, obstacle);
  const Mesh full = build_corridor_mesh(spec);
  EXPECT_LT(mesh.num_cells(), full.num_cells());
  const double removed = total_cell_measure(full) - total_cell_measure(mesh);
  EXPECT_NEAR(removed, M_PI * 0.04, 0.02);
  EXPECT_GT(tagged_measure(mesh, "wall"), tagged_measure(full, "wall"));
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c)
    EXPECT_GE((mesh.centroid(c) - obstacle.center).norm(), obstacle.radius);
  check_invariants(mesh);
}

TEST(ObstacleMesh, RejectsObstacleTouchingWall) {
  CorridorSpec spec;
  spec.nx = 40;
  spec.ny = 20;
  EXPECT_THROW(build_obstacle_mesh(spec, {{1.0, 0.5}, 0.6}), std::invalid_argument);
  EXPECT_THROW(build_obstacle_mesh(spec, {{1.0, 0.5}, -0.1}), std::invalid_argument);
}

TEST(MeshFromCells, RandomPerturbedGridsKeepInvariants) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    std::vector<Eigen::Vector2d> pts;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        Eigen::Vector2d p(i, j);
        if (i > 0 && i < n && j > 0 && j < n) p += Eigen::Vector2d(jitter(gen), jitter(gen));
        pts.push_back(p / n);
      }
    std::vector<Mesh::Cell> cells;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int a = j * (n + 1) + i, b = a + 1, c = a + n + 2, d = a + n + 1;
        if ((i + j + trial) % 2) {
          cells.push_back({a, b, c});
          cells.push_back({a, c, d});
        } else {
          cells.push_back({a, b, d});
          cells.push_back({b, c, d});
        }
      }
    const Mesh mesh = Mesh::from_cells(
        2, pts, cells, [](const Eigen::Vector2d& m, const Eigen::Vector2d&) {
          return m.x() < 1e-12 ? std::string("left") : std::string("rest");
        });
    EXPECT_NEAR(total_cell_measure(mesh), 1.0, 1e-12);
    EXPECT_NEAR(tagged_measure(mesh, "left"), 1.0, 1e-12);
    check_invariants(mesh);
  }
}

TEST(MeshFromCells, RejectsInvalidInput) {
  const auto tagger = [](const Eigen::Vector2d&, const Eigen::Vector2d&) {
    return std::string("b");
  };
  std::vector<Eigen::Vector2d> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  // Clockwise.
  EXPECT_THROW(Mesh::from_cells(2, pts, {{0, 2, 1}}, tagger), std::invalid_argument);
  // Degenerate.
  EXPECT_THROW(Mesh::from_cells(2, {{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, tagger),
               std::invalid_argument);
  // Out of range.
  EXPECT_THROW(Mesh::from_cells(2, pts, {{0, 1, 7}}, tagger), std::invalid_argument);
  // An edge shared by three triangles.
  std::vector<Eigen::Vector2d> fan{{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {0.5, 2}};
  EXPECT_THROW(Mesh::from_cells(2, fan, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}, tagger),
               std::invalid_argument);
  EXPECT_THROW(Mesh::from_cells(2, pts, {}, tagger), std::invalid_argument);
  EXPECT_THROW(Mesh::from_cells(3, pts, {{0, 1, 2}}, tagger), std::invalid_argument);
  const auto untagged = [](const Eigen::Vector2d&, const Eigen::Vector2d&) { return std::string(); };
  EXPECT_THROW(Mesh::from_cells(2, pts, {{0, 1, 2}}, untagged), std::invalid_argument);
}

TEST(MeshFromCells, TagLookup) {
  const Mesh mesh = build_interval_mesh(3);
  EXPECT_GE(mesh.tag_id("inflow"), 0);
  EXPECT_EQ(mesh.tag_id("nope"), -1);
  EXPECT_EQ(mesh.tag_names().size(), 2u);
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f)
    if (!mesh.face(f).is_boundary()) EXPECT_EQ(mesh.face_tag(f), "");
}

TEST(BuildMesh, DispatchesOnSpec) {
  EXPECT_EQ(build_mesh(IntervalSpec{7}).num_cells(), 7u);
  CorridorSpec c;
  c.nx = 4;
  c.ny = 2;
  EXPECT_EQ(build_mesh(c).num_cells(), 16u);
  c.nx = 20;
  c.ny = 10;
  EXPECT_LT(build_mesh(CorridorWithObstacleSpec{c, {{1.0, 0.5}, 0.2}}).num_cells(), 400u);
}
