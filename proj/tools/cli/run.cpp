#include "run.hpp"

#include "output.hpp"

#include "crowdflow/analytic1d.hpp"
#include "crowdflow/mesh_io.hpp"
#include "crowdflow/phase_scan.hpp"
#include "crowdflow/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crowdflow::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kBoundarySamples = 200;
constexpr int kProfileSamples = 1000;

bool wants(const RunConfig& cfg, const std::string& format, bool by_default) {
  const auto& f = cfg.output.formats;
  if (f.empty()) return by_default;
  return std::find(f.begin(), f.end(), format) != f.end();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json model_json(const RunConfig& cfg) {
  json segs = json::array();
  for (const auto& s : cfg.model.segments) {
    const char* kind = s.kind == SegmentKind::Inflow    ? "inflow"
                       : s.kind == SegmentKind::Outflow ? "outflow"
                                                        : "wall";
    json e = {{"tag", s.tag}, {"kind", kind}};
    if (s.kind != SegmentKind::Wall) e["rate"] = s.rate;
    segs.push_back(e);
  }
  return {{"epsilon", cfg.model.epsilon},
          {"tau", cfg.model.tau},
          {"initial_density", cfg.model.initial_density},
          {"eta", cfg.solver.penalty.eta},
          {"tol", cfg.solver.tol},
          {"max_iter", cfg.solver.max_iter},
          {"segments", segs}};
}

std::pair<DgFunction, SolveReport> solve(const RunConfig& cfg, const Mesh& mesh,
                                         const VelocityField& velocity, std::ostream& log) {
  DgSolver solver(mesh, cfg.model, velocity, cfg.solver);
  solver.set_observer([&log](int it, double update) {
    if (it % 5000 == 0) log << "  iteration " << it << "  update " << format_number(update) << '\n';
  });
  auto result = solver.solve_stationary();
  const auto& r = result.second;
  log << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations
      << " iterations, j = " << format_number(r.flux.mean_flux) << '\n';
  return result;
}

int run_solve1d(const RunConfig& cfg, std::ostream& log) {
  const Mesh mesh = build_mesh(cfg.geometry);
  const VelocityField velocity = resolve_velocity(mesh, cfg.model);
  auto [rho, report] = solve(cfg, mesh, velocity, log);
  const fs::path dir = cfg.output.path;

  if (wants(cfg, "csv", true)) {
    std::ostringstream out;
    write_profile_csv(rho, cell_fluxes(rho, cfg.model, velocity), out);
    write_file(dir / "profile.csv", out.str());
  }
  if (wants(cfg, "vtk", false)) {
    std::ostringstream out;
    write_vtk(rho, velocity, out);
    write_file(dir / "solution.vtk", out.str());
  }
  if (wants(cfg, "json", true)) {
    json doc = {{"mode", "solve1d"},
                {"model", model_json(cfg)},
                {"cells", mesh.num_cells()},
                {"solve", to_json(report)},
                {"estimates", to_json(check_phase_estimates(rho, cfg.model, velocity))},
                {"phase", phase_name(classify(report.flux.mean_flux, integrate(rho)))}};
    write_file(dir / "report.json", dump(doc));
  }
  return report.converged ? kExitConverged : kExitNotConverged;
}

int run_solve2d(const RunConfig& cfg, std::ostream& log) {
  const Mesh mesh = build_mesh(cfg.geometry);
  log << "mesh: " << mesh.num_cells() << " cells, " << mesh.num_faces() << " faces\n";
  const VelocityField velocity = resolve_velocity(mesh, cfg.model);
  auto [rho, report] = solve(cfg, mesh, velocity, log);
  const fs::path dir = cfg.output.path;

  if (wants(cfg, "vtk", true)) {
    std::ostringstream out;
    write_vtk(rho, velocity, out);
    write_file(dir / "solution.vtk", out.str());
  }
  if (wants(cfg, "csv", false)) {
    std::ostringstream out;
    write_nodal_csv(rho, out);
    write_file(dir / "solution.csv", out.str());
  }
  if (wants(cfg, "json", true)) {
    const auto balance = boundary_flux_balance(mesh, velocity, cfg.model.segments);
    json doc = {{"mode", "solve2d"},
                {"model", model_json(cfg)},
                {"cells", mesh.num_cells()},
                {"solve", to_json(report)},
                {"estimates", to_json(check_phase_estimates(rho, cfg.model, velocity))},
                {"velocity",
                 {{"divergence_residual", divergence_residual(mesh, velocity)},
                  {"boundary_flux",
                   {{"inflow", balance.inflow},
                    {"outflow", balance.outflow},
                    {"wall", balance.wall},
                    {"total", balance.total()}}}}}};
    write_file(dir / "report.json", dump(doc));
  }
  return report.converged ? kExitConverged : kExitNotConverged;
}

std::vector<Polyline> analytic_boundary(double epsilon) {
  std::vector<Polyline> lines(1);
  for (const auto& s : phase_boundary_curve(epsilon, kBoundarySamples))
    lines[0].emplace_back(s.alpha, s.beta);
  return lines;
}

std::string boundary_csv(double epsilon) {
  std::ostringstream out;
  out << "alpha,beta,side\n";
  for (const auto& s : phase_boundary_curve(epsilon, kBoundarySamples))
    out << format_number(s.alpha) << ',' << format_number(s.beta) << ','
        << (s.side == BoundarySide::AlphaLimited ? "alpha_limited" : "beta_limited") << '\n';
  return out.str();
}

int run_phase(const RunConfig& cfg, std::ostream& log) {
  PhaseScanConfig scan;
  scan.step = cfg.step;
  scan.tau = cfg.model.tau;
  scan.solver = cfg.solver;
  scan.jobs = cfg.jobs;
  if (const auto* iv = std::get_if<IntervalSpec>(&cfg.geometry)) scan.cells = iv->cells;
  const PhaseGrid grid = scan_phase_diagram(cfg.model.epsilon, scan, [&log](int done, int rows) {
    log << "  row " << done << '/' << rows << '\n';
  });
  const fs::path dir = cfg.output.path;
  const auto contour = extract_contour(grid.alphas, grid.betas, grid.flux, 0.25);
  const auto reference = analytic_boundary(cfg.model.epsilon);
  int failed = 0;
  for (Eigen::Index i = 0; i < grid.converged.size(); ++i) failed += !grid.converged(i);
  log << failed << " of " << grid.converged.size() << " grid points did not converge\n";

  if (wants(cfg, "csv", true)) {
    std::ostringstream out;
    write_phase_csv(grid, out);
    write_file(dir / "phase.csv", out.str());
    std::ostringstream lines;
    write_contour_csv(contour, lines);
    write_file(dir / "contour.csv", lines.str());
    write_file(dir / "boundary.csv", boundary_csv(cfg.model.epsilon));
  }
  if (wants(cfg, "json", true)) {
    json doc = {{"mode", "phase"},
                {"epsilon", cfg.model.epsilon},
                {"step", cfg.step},
                {"cells", scan.cells},
                {"points", grid.converged.size()},
                {"not_converged", failed},
                {"contour_lines", contour.size()}};
    doc["hausdorff_to_analytic"] =
        contour.empty() ? json(nullptr) : json(hausdorff_distance(contour, reference));
    write_file(dir / "report.json", dump(doc));
  }
  return failed == 0 ? kExitConverged : kExitNotConverged;
}

// Closed form where one exists, otherwise the shooting flux fed into the
// hyperbolic family through the inflow condition.
struct AnalyticProfile {
  std::string branch;
  double j = 0.0;
  std::vector<double> x;
  std::vector<double> rho;
  double outflow_residual = 0.0;
};

AnalyticProfile sample(const std::string& branch, const ExplicitSolution1D& s) {
  AnalyticProfile p{branch, s.flux(), {}, {}, 0.0};
  for (int i = 0; i <= kProfileSamples; ++i) {
    const double x = static_cast<double>(i) / kProfileSamples;
    p.x.push_back(x);
    p.rho.push_back(s(x));
  }
  return p;
}

// The j = 1/4 profile exists only where both boundary conditions fix the
// same admissible constant, i.e. on the phase boundary itself.
std::optional<double> quarter_flux_constant(double alpha, double beta, double eps) {
  if (alpha == 0.5 || beta == 0.5) return std::nullopt;
  const auto [c1, c2] = quarterflux_constants(eps, alpha, beta);
  if (std::abs(c1 - c2) > 1e-12 * std::max(1.0, std::abs(c1))) return std::nullopt;
  if (!(c1 > 0.0 || c1 < -1.0)) return std::nullopt;
  return c1;
}

AnalyticProfile analytic_profile(double eps, double alpha, double beta) {
  AnalyticProfile p;
  if (const auto c = constant_solution(alpha, beta)) {
    p = sample("constant", ExplicitSolution1D::constant(eps, c->first));
  } else if (const auto n = solve_flux_newton(eps, alpha, beta)) {
    p = sample("trigonometric", ExplicitSolution1D::trig(eps, n->j, n->c));
  } else if (const auto c = quarter_flux_constant(alpha, beta, eps)) {
    p = sample("quarter_flux", ExplicitSolution1D::quarter_flux(eps, *c));
  } else {
    if (!(alpha > 0.0 && beta > 0.0))
      throw std::invalid_argument("a profile needs positive alpha and beta");
    const ShootingResult shot = shooting_solve(eps, alpha, beta);
    try {
      p = sample("hyperbolic", ExplicitSolution1D::from_inflow(eps, shot.j, 1.0 - shot.j / alpha));
    } catch (const std::exception&) {
      p = {"shooting", shot.j, shot.x, shot.rho, 0.0};
    }
  }
  p.outflow_residual = std::abs(p.j - beta * p.rho.back());
  return p;
}

int run_analytic(const RunConfig& cfg, std::ostream& log) {
  const double eps = cfg.model.epsilon;
  const fs::path dir = cfg.output.path;
  json doc = {{"mode", "analytic"},
              {"epsilon", eps},
              {"alpha_min", phase_boundary_alpha_min(eps)}};
  if (wants(cfg, "csv", true)) write_file(dir / "boundary.csv", boundary_csv(eps));
  if (cfg.alpha && cfg.beta) {
    const auto p = analytic_profile(eps, *cfg.alpha, *cfg.beta);
    log << p.branch << " profile, j = " << format_number(p.j) << '\n';
    if (wants(cfg, "csv", true)) {
      std::ostringstream out;
      write_samples_csv(p.x, p.rho, p.j, out);
      write_file(dir / "profile.csv", out.str());
    }
    doc["alpha"] = *cfg.alpha;
    doc["beta"] = *cfg.beta;
    doc["profile"] = {{"branch", p.branch},
                      {"j", p.j},
                      {"inflow_residual", std::abs(p.j - *cfg.alpha * (1.0 - p.rho.front()))},
                      {"outflow_residual", p.outflow_residual}};
  }
  if (wants(cfg, "json", true)) write_file(dir / "report.json", dump(doc));
  return kExitConverged;
}

int run_mesh(const RunConfig& cfg, std::ostream& log) {
  const Mesh mesh = build_mesh(cfg.geometry);
  std::ostringstream out;
  write_mesh(mesh, out);
  write_file(cfg.output.path, out.str());
  log << "wrote " << mesh.num_cells() << " cells to " << cfg.output.path << '\n';
  return kExitConverged;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  switch (config.mode) {
    case Mode::Solve1D: return run_solve1d(config, log);
    case Mode::Solve2D: return run_solve2d(config, log);
    case Mode::Phase: return run_phase(config, log);
    case Mode::Analytic: return run_analytic(config, log);
    case Mode::MeshGen: return run_mesh(config, log);
  }
  return kExitUsage;
}

}  // namespace crowdflow::cli
