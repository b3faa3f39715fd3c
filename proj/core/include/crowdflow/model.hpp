#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace crowdflow {

class DgFunction;
class Mesh;

enum class SegmentKind { Inflow, Outflow, Wall };

/// A tagged part of the boundary. Inflow faces carry the entrance rate
/// (particles enter with flux rate*(1-rho)), Outflow faces the exit rate
/// (flux rate*rho). Wall faces are impermeable and ignore `rate`.
struct BoundarySegment {
  std::string tag;
  SegmentKind kind = SegmentKind::Wall;
  double rate = 0.0;

  static BoundarySegment inflow(std::string tag, double alpha);
  static BoundarySegment outflow(std::string tag, double beta);
  static BoundarySegment wall(std::string tag);
};

/// Spatially uniform velocity.
struct ConstantVelocity {
  Eigen::Vector2d value{1.0, 0.0};
};

/// u = grad V for a linear potential V(x) = direction . x.
struct LinearPotentialVelocity {
  Eigen::Vector2d direction{1.0, 0.0};
};

/// u = grad V_m where V_m is harmonic with unit inward flux on inflow
/// segments, unit outward flux on outflow segments and no flux on walls.
struct HarmonicPotentialVelocity {};

using VelocitySpec =
    std::variant<ConstantVelocity, LinearPotentialVelocity, HarmonicPotentialVelocity>;

struct ModelParams {
  double epsilon = 0.1;
  VelocitySpec velocity = ConstantVelocity{};
  std::vector<BoundarySegment> segments;
  double tau = 0.01;
  double initial_density = 0.5;

  /// Throws std::invalid_argument when a field is out of range or two
  /// segments share a tag.
  void validate() const;

  /// Segment for `tag`, or nullptr.
  const BoundarySegment* find_segment(const std::string& tag) const;

  /// Bounds min/max over {alpha_i} and {1 - beta_i} of all inflow and
  /// outflow segments; the density range guaranteed by the maximum
  /// principle for divergence-free fields with u.n = -1 / +1 on the doors.
  std::pair<double, double> density_bounds() const;
};

/// 1D unit-interval parameters: inflow "inflow" at x=0, outflow "outflow"
/// at x=1, u = 1.
ModelParams make_interval_params(double epsilon, double alpha, double beta);

/// Entropy-variable triple; rho = logistic(psi + V).
struct EntropyState {
  double rho;
  double psi;
  double potential;

  static EntropyState from_density(double rho, double potential);
  static EntropyState from_entropy_variable(double psi, double potential);
};

/// log(rho) - log(1 - rho) - V. Throws std::domain_error unless 0 < rho < 1.
double rho_to_psi(double rho, double potential);

/// Inverse of rho_to_psi, evaluated without overflow for any finite input.
double psi_to_rho(double psi, double potential);

/// A(psi, V) = e^{psi+V} / (1 + e^{psi+V})^2, in (0, 1/4].
double mobility(double psi, double potential);

/// Same quantity through 1 / (2 (1 + cosh(psi + V))).
double mobility_cosh(double psi, double potential);

/// Values of rho are clipped to [kEntropyClip, 1 - kEntropyClip] before
/// taking logarithms.
inline constexpr double kEntropyClip = 1e-12;

/// Integral of rho log rho - rho V + (1 - rho) log(1 - rho) over the mesh.
double entropy(const DgFunction& rho, const DgFunction& potential, const Mesh& mesh);

}  // namespace crowdflow
