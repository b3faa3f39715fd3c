#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crowdflow::cli {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_profile_csv(const DgFunction& rho, const std::vector<double>& cell_flux,
                       std::ostream& out) {
  const Mesh& mesh = rho.mesh();
  if (mesh.dim() != 1) throw std::invalid_argument("profile CSV needs a 1D mesh");
  out << "x,rho,j\n";
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto cell = mesh.cell(c);
    // Left endpoint first, independent of the stored orientation.
    const int first = mesh.vertex(cell[0]).x() <= mesh.vertex(cell[1]).x() ? 0 : 1;
    for (int k : {first, 1 - first})
      out << format_number(mesh.vertex(cell[k]).x()) << ',' << format_number(rho(c, k)) << ','
          << format_number(cell_flux[c]) << '\n';
  }
}

void write_samples_csv(const std::vector<double>& x, const std::vector<double>& rho, double j,
                       std::ostream& out) {
  out << "x,rho,j\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_number(x[i]) << ',' << format_number(rho[i]) << ',' << format_number(j) << '\n';
}

void write_nodal_csv(const DgFunction& rho, std::ostream& out) {
  const Mesh& mesh = rho.mesh();
  out << "x,y,rho\n";
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto cell = mesh.cell(c);
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      const auto& p = mesh.vertex(cell[k]);
      out << format_number(p.x()) << ',' << format_number(p.y()) << ','
          << format_number(rho(c, k)) << '\n';
    }
  }
}

void write_vtk(const DgFunction& rho, const VelocityField& velocity, std::ostream& out) {
  const Mesh& mesh = rho.mesh();
  const int nc = static_cast<int>(mesh.num_cells());
  const int nv = mesh.vertices_per_cell();
  out << "# vtk DataFile Version 3.0\ncrowdflow density\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nc * nv << " double\n";
  for (int c = 0; c < nc; ++c)
    for (int v : mesh.cell(c)) {
      const auto& p = mesh.vertex(v);
      out << format_number(p.x()) << ' ' << format_number(p.y()) << " 0\n";
    }
  out << "CELLS " << nc << ' ' << nc * (nv + 1) << '\n';
  for (int c = 0; c < nc; ++c) {
    out << nv;
    for (int k = 0; k < nv; ++k) out << ' ' << nv * c + k;
    out << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  const char* type = nv == 3 ? "5\n" : "3\n";
  for (int c = 0; c < nc; ++c) out << type;

  out << "POINT_DATA " << nc * nv << "\nSCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < rho.size(); ++i) out << format_number(rho.coefficients()[i]) << '\n';
  if (velocity.potential) {
    out << "SCALARS potential double 1\nLOOKUP_TABLE default\n";
    const auto& v = velocity.potential->coefficients();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << format_number(v[i]) << '\n';
  }
  out << "CELL_DATA " << nc << "\nVECTORS velocity double\n";
  for (int c = 0; c < nc; ++c)
    out << format_number(velocity[c].x()) << ' ' << format_number(velocity[c].y()) << " 0\n";
}

void write_contour_csv(const std::vector<Polyline>& lines, std::ostream& out) {
  out << "line,alpha,beta\n";
  for (std::size_t l = 0; l < lines.size(); ++l)
    for (const auto& p : lines[l])
      out << l << ',' << format_number(p.x()) << ',' << format_number(p.y()) << '\n';
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json check(const EstimateCheck& c) {
  if (!c.applicable) return {{"applicable", false}};
  return {{"applicable", true}, {"lhs", number(c.lhs)}, {"bound", number(c.bound)}, {"pass", c.pass}};
}

}  // namespace

json to_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"final_update_norm", number(r.final_update_norm)},
          {"max_linear_residual", number(r.max_linear_residual)},
          {"flux",
           {{"mean", number(r.flux.mean_flux)},
            {"stddev", number(r.flux.flux_stddev)},
            {"inflow_total", number(r.flux.inflow_total)},
            {"outflow_total", number(r.flux.outflow_total)},
            {"balance_residual", number(r.flux.balance_residual)}}}};
}

json to_json(const EstimateReport& r) {
  json bounds = {{"applicable", r.bounds_applicable},
                 {"rho_min", number(r.rho_min)},
                 {"rho_max", number(r.rho_max)}};
  if (r.bounds_applicable) {
    bounds["lower"] = number(r.bounds_min);
    bounds["upper"] = number(r.bounds_max);
    bounds["pass"] = r.bounds_pass;
  }
  return {{"energy_bound", check(r.energy)},
          {"maximal_current_deviation", check(r.maximal_current)},
          {"maximal_current_flux", check(r.maximal_flux)},
          {"boundary_layer", check(r.boundary_layer)},
          {"density_bounds", bounds},
          {"all_pass", r.all_pass()}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << contents;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace crowdflow::cli
