#pragma once

#include "crowdflow/mesh.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowdflow {

/// Malformed mesh file. `line()` is 1-based, 0 when the problem is not tied
/// to a single line (e.g. a missing section).
class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Plain-text format, whitespace separated, '#' starts a comment:
//
//   NODES
//   <index> <x> [<y>]
//   CELLS
//   <index> <v1> <v2> [<v3>]        (2 vertices: intervals, 3: triangles)
//   BOUNDARY
//   <v1> [<v2>] <tag>               (one line per boundary face)
//
// Indices must be 0-based and consecutive. Coordinates are written with 17
// significant digits so a write/read cycle is lossless.

void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// When `declared_tags` is given, BOUNDARY lines naming any other tag are
/// rejected.
Mesh read_mesh(std::istream& in,
               const std::optional<std::vector<std::string>>& declared_tags = std::nullopt);
Mesh read_mesh(const std::filesystem::path& path,
               const std::optional<std::vector<std::string>>& declared_tags = std::nullopt);

}  // namespace crowdflow
