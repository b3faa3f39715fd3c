#pragma once

#include "crowdflow/analysis.hpp"
#include "crowdflow/contour.hpp"
#include "crowdflow/dg_function.hpp"
#include "crowdflow/dg_solver.hpp"
#include "crowdflow/velocity.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace crowdflow::cli {

/// "%.15g"; every number written to CSV or VTK goes through here.
std::string format_number(double v);

/// Two rows per cell (left and right endpoint) with columns x, rho, j where
/// j is the discrete flux of that cell. 1D only.
void write_profile_csv(const DgFunction& rho, const std::vector<double>& cell_flux,
                       std::ostream& out);

/// Sampled closed-form or shooting profile.
void write_samples_csv(const std::vector<double>& x, const std::vector<double>& rho, double j,
                       std::ostream& out);

/// Nodal values with duplicated vertices, columns x, y, rho.
void write_nodal_csv(const DgFunction& rho, std::ostream& out);

/// Legacy VTK 3.0 ASCII unstructured grid. Each cell owns its points, so
/// the broken P1 field is represented exactly. Point data "rho" and, when
/// the field has one, "potential"; cell data vector "velocity".
void write_vtk(const DgFunction& rho, const VelocityField& velocity, std::ostream& out);

/// Columns line, alpha, beta.
void write_contour_csv(const std::vector<Polyline>& lines, std::ostream& out);

nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const EstimateReport& report);

/// Writes through a temporary and renames, so readers never see a partial
/// file. Throws std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace crowdflow::cli
