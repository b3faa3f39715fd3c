#include "crowdflow/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace crowdflow {

MeshParseError::MeshParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Section { None, Nodes, Cells, Boundary };

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line.substr(0, line.find('#')));
  for (std::string t; ss >> t;) tokens.push_back(t);
  return tokens;
}

long parse_int(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw MeshParseError(line, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) throw MeshParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw MeshParseError(line, "expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw MeshParseError(line, "expected a number, got '" + s + "'");
  return v;
}

}  // namespace

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "# crowdflow mesh, dim " << mesh.dim() << "\n";
  out << "NODES\n";
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto& p = mesh.vertex(static_cast<int>(v));
    out << v << ' ' << format_coord(p.x());
    if (mesh.dim() == 2) out << ' ' << format_coord(p.y());
    out << '\n';
  }
  out << "CELLS\n";
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    out << c;
    for (int v : mesh.cell(static_cast<int>(c))) out << ' ' << v;
    out << '\n';
  }
  out << "BOUNDARY\n";
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(static_cast<int>(f));
    if (!face.is_boundary()) continue;
    for (int k = 0; k < face.num_vertices; ++k) out << face.vertices[k] << ' ';
    out << mesh.face_tag(static_cast<int>(f)) << '\n';
  }
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_mesh(mesh, out);
}

Mesh read_mesh(std::istream& in, const std::optional<std::vector<std::string>>& declared_tags) {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<Mesh::Cell> cells;
  std::map<std::array<int, 2>, std::pair<std::string, std::size_t>> boundary;
  int cell_arity = 0;
  bool seen_nodes = false, seen_cells = false, seen_boundary = false;
  Section section = Section::None;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (tok.size() == 1 && (tok[0] == "NODES" || tok[0] == "CELLS" || tok[0] == "BOUNDARY")) {
      if (tok[0] == "NODES") {
        if (seen_nodes) throw MeshParseError(lineno, "duplicate NODES section");
        section = Section::Nodes;
        seen_nodes = true;
      } else if (tok[0] == "CELLS") {
        if (seen_cells) throw MeshParseError(lineno, "duplicate CELLS section");
        if (nodes.empty()) throw MeshParseError(lineno, "NODES section is empty or missing");
        section = Section::Cells;
        seen_cells = true;
      } else {
        if (seen_boundary) throw MeshParseError(lineno, "duplicate BOUNDARY section");
        if (cells.empty()) throw MeshParseError(lineno, "CELLS section is empty or missing");
        section = Section::Boundary;
        seen_boundary = true;
      }
      continue;
    }
    switch (section) {
      case Section::None:
        throw MeshParseError(lineno, "data before the first section header");
      case Section::Nodes: {
        if (tok.size() != 2 && tok.size() != 3)
          throw MeshParseError(lineno, "node line needs 'index x [y]'");
        const long idx = parse_int(tok[0], lineno);
        if (idx != static_cast<long>(nodes.size()))
          throw MeshParseError(lineno, "node index " + tok[0] + " out of sequence");
        nodes.emplace_back(parse_real(tok[1], lineno),
                           tok.size() == 3 ? parse_real(tok[2], lineno) : 0.0);
        break;
      }
      case Section::Cells: {
        if (tok.size() != 3 && tok.size() != 4)
          throw MeshParseError(lineno, "cell line needs 'index v1 v2 [v3]'");
        const int arity = static_cast<int>(tok.size()) - 1;
        if (cell_arity == 0) cell_arity = arity;
        if (arity != cell_arity) throw MeshParseError(lineno, "mixed cell types");
        const long idx = parse_int(tok[0], lineno);
        if (idx != static_cast<long>(cells.size()))
          throw MeshParseError(lineno, "cell index " + tok[0] + " out of sequence");
        Mesh::Cell cell{-1, -1, -1};
        for (int k = 0; k < arity; ++k) {
          const long v = parse_int(tok[k + 1], lineno);
          if (v < 0 || v >= static_cast<long>(nodes.size()))
            throw MeshParseError(lineno, "vertex index " + tok[k + 1] + " out of range");
          cell[k] = static_cast<int>(v);
        }
        cells.push_back(cell);
        break;
      }
      case Section::Boundary: {
        const std::size_t nfv = static_cast<std::size_t>(cell_arity - 1);
        if (tok.size() != nfv + 1)
          throw MeshParseError(lineno, "boundary line needs " + std::to_string(nfv) +
                                           " vertex index(es) and a tag");
        std::array<int, 2> key{-1, -1};
        for (std::size_t k = 0; k < nfv; ++k) {
          const long v = parse_int(tok[k], lineno);
          if (v < 0 || v >= static_cast<long>(nodes.size()))
            throw MeshParseError(lineno, "vertex index " + tok[k] + " out of range");
          key[k] = static_cast<int>(v);
        }
        if (nfv == 2 && key[0] > key[1]) std::swap(key[0], key[1]);
        const std::string& tag = tok.back();
        if (declared_tags &&
            std::find(declared_tags->begin(), declared_tags->end(), tag) == declared_tags->end())
          throw MeshParseError(lineno, "tag '" + tag + "' is not a declared boundary segment");
        if (!boundary.try_emplace(key, tag, lineno).second)
          throw MeshParseError(lineno, "boundary face listed twice");
        break;
      }
    }
  }
  if (nodes.empty()) throw MeshParseError(0, "NODES section is empty or missing");
  if (cells.empty()) throw MeshParseError(0, "CELLS section is empty or missing");
  if (!seen_boundary) throw MeshParseError(0, "BOUNDARY section missing");

  const int dim = cell_arity - 1;
  if (dim == 1) {
    // Intervals are stored left to right.
    for (auto& c : cells)
      if (nodes[c[0]].x() > nodes[c[1]].x()) std::swap(c[0], c[1]);
  }

  // Tag by vertex tuple; the tagger receives geometry only, so resolve the
  // boundary face through its midpoint.
  std::map<std::pair<long long, long long>, std::string> by_midpoint;
  const auto mid_key = [](const Eigen::Vector2d& m) {
    return std::make_pair(std::llround(m.x() * 1e9), std::llround(m.y() * 1e9));
  };
  for (const auto& [key, entry] : boundary) {
    Eigen::Vector2d mid = nodes[key[0]];
    if (key[1] >= 0) mid = 0.5 * (nodes[key[0]] + nodes[key[1]]);
    by_midpoint[mid_key(mid)] = entry.first;
  }
  std::size_t used = 0;
  Mesh mesh = [&] {
    try {
      return Mesh::from_cells(dim, nodes, cells,
                              [&](const Eigen::Vector2d& mid, const Eigen::Vector2d&) {
                                auto it = by_midpoint.find(mid_key(mid));
                                if (it == by_midpoint.end()) return std::string{};
                                ++used;
                                return it->second;
                              });
    } catch (const std::invalid_argument& e) {
      throw MeshParseError(0, e.what());
    }
  }();
  if (used != boundary.size())
    throw MeshParseError(0, "BOUNDARY lists faces that are not on the mesh boundary");
  return mesh;
}

Mesh read_mesh(const std::filesystem::path& path,
               const std::optional<std::vector<std::string>>& declared_tags) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_mesh(in, declared_tags);
}

}  // namespace crowdflow
