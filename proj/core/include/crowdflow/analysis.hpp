#pragma once

#include "crowdflow/dg_function.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"
#include "crowdflow/velocity.hpp"

#include <optional>
#include <vector>

namespace crowdflow {

struct FluxReport {
  /// Mean over cells of the cell flux (1D), or the outflow total per unit
  /// outflow measure (2D).
  double mean_flux = 0.0;
  double flux_stddev = 0.0;
  /// Integral of alpha (1 - rho) over inflow faces.
  double inflow_total = 0.0;
  /// Integral of beta rho over outflow faces.
  double outflow_total = 0.0;
  double balance_residual = 0.0;
};

FluxReport compute_flux(const DgFunction& rho, const ModelParams& params,
                        const VelocityField& velocity);

/// 1D only: -eps rho' + cell mean of rho (1 - rho) u, per cell.
std::vector<double> cell_fluxes(const DgFunction& rho, const ModelParams& params,
                                const VelocityField& velocity);

/// 1D only: the numerical flux of the discrete scheme at each interior face,
/// -eps {rho'} + eta eps / h [rho] + w {rho} + |w| [rho] / 2 with
/// w = (1 - {rho}) u. Exactly constant at a discrete steady state.
std::vector<double> interface_fluxes(const DgFunction& rho, const ModelParams& params,
                                     const VelocityField& velocity, double eta);

/// One inequality: lhs <= bound, with `applicable` false when the
/// hypotheses of the estimate do not hold.
struct EstimateCheck {
  bool applicable = false;
  double lhs = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct EstimateReport {
  /// integral (rho - 1/2)^2 + beta rho(1) - 1/4 <= eps |1 - alpha - beta|
  EstimateCheck energy;
  /// min(alpha, beta) >= 1/2: integral (rho - 1/2)^2 <= eps |1 - alpha - beta|
  EstimateCheck maximal_current;
  /// ... and j >= 1/4 - 1e-3
  EstimateCheck maximal_flux;
  /// max(alpha, beta) < 1/2, alpha != beta: integral |rho - alpha| (alpha < beta)
  /// or |rho - (1 - beta)| (alpha > beta) <= eps (1 - alpha - beta) / |beta - alpha|
  EstimateCheck boundary_layer;
  /// min over rates of {alpha_i, 1 - beta_i} <= rho <= max of the same.
  double bounds_min = 0.0;
  double bounds_max = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  bool bounds_applicable = false;
  bool bounds_pass = true;

  bool all_pass() const;
};

struct EstimateOptions {
  double slack = 0.1;
  double bounds_slack = 1e-3;
  double flux_tol = 1e-3;
  /// Added to every bound; absorbs round-off where both sides vanish.
  double absolute_floor = 1e-8;
};

/// Phase estimate checks on a converged solution. The 1D estimates need the
/// interval problem with u = 1 and one inflow and one outflow segment; the
/// density bounds are checked in any dimension when the velocity is a
/// harmonic field (u.n = 0 on walls) or the mesh is 1D.
EstimateReport check_phase_estimates(const DgFunction& rho, const ModelParams& params,
                                     const VelocityField& velocity,
                                     const EstimateOptions& options = {});

enum class Phase { InfluxLimited, OutfluxLimited, MaximalCurrent };

inline constexpr double kClassificationTol = 1e-3;

/// MaximalCurrent iff j >= 1/4 - tol; otherwise by the mean density.
Phase classify(double j, double mean_density, double tol = kClassificationTol);

const char* phase_name(Phase p);

}  // namespace crowdflow
