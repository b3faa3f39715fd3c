#include "crowdflow/analytic1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace crowdflow {

namespace {

constexpr double kPi = std::numbers::pi;

double half_root(double q) { return 0.5 * std::sqrt(q); }

}  // namespace

ExplicitSolution1D ExplicitSolution1D::constant(double epsilon, double rho) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  return {epsilon, ConstantBranch{rho, rho * (1.0 - rho)}};
}

ExplicitSolution1D ExplicitSolution1D::quarter_flux(double epsilon, double c) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(c > 0.0 || c < -1.0))
    throw std::domain_error("quarter-flux profile has a pole in [0, 1] (c = " +
                            std::to_string(c) + ")");
  return {epsilon, QuarterFluxBranch{c}};
}

ExplicitSolution1D ExplicitSolution1D::trig(double epsilon, double j, double c) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(j > 0.25)) throw std::domain_error("tan profile needs j > 1/4");
  const double k = half_root(4.0 * j - 1.0);
  const double t0 = k * c / epsilon;
  const double t1 = k * (1.0 + c) / epsilon;
  // Poles sit at pi/2 + m pi; both ends must fall between the same pair.
  const double m0 = std::floor((t0 - kPi / 2) / kPi);
  const double m1 = std::floor((t1 - kPi / 2) / kPi);
  if (m0 != m1 || std::fmod(t0 - kPi / 2, kPi) == 0.0)
    throw std::domain_error("tan profile has a pole in [0, 1]");
  return {epsilon, TrigBranch{j, c}};
}

ExplicitSolution1D ExplicitSolution1D::hyperbolic(double epsilon, double j, double c,
                                                  HyperbolicKind kind) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(j < 0.25)) throw std::domain_error("hyperbolic profile needs j < 1/4");
  if (kind == HyperbolicKind::Coth && c >= -1.0 && c <= 0.0)
    throw std::domain_error("coth profile has a pole in [0, 1]");
  return {epsilon, HyperbolicBranch{j, c, kind}};
}

ExplicitSolution1D ExplicitSolution1D::from_inflow(double epsilon, double j, double rho0) {
  if (j > 0.25) {
    const double k = half_root(4.0 * j - 1.0);
    const double t0 = std::atan((0.5 - rho0) / k);
    return trig(epsilon, j, epsilon * t0 / k);
  }
  if (j == 0.25) {
    if (rho0 == 0.5) return constant(epsilon, 0.5);
    return quarter_flux(epsilon, epsilon / (rho0 - 0.5));
  }
  const double kappa = half_root(1.0 - 4.0 * j);
  const double w0 = (rho0 - 0.5) / kappa;
  if (std::abs(std::abs(w0) - 1.0) <= 1e-14) return {epsilon, ConstantBranch{rho0, j}};
  if (std::abs(w0) < 1.0)
    return hyperbolic(epsilon, j, epsilon * std::atanh(w0) / kappa, HyperbolicKind::Tanh);
  return hyperbolic(epsilon, j, epsilon * std::atanh(1.0 / w0) / kappa, HyperbolicKind::Coth);
}

double ExplicitSolution1D::flux() const {
  return std::visit(
      [](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuarterFluxBranch>)
          return 0.25;
        else
          return b.j;
      },
      branch_);
}

double ExplicitSolution1D::operator()(double x) const {
  const double eps = epsilon_;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConstantBranch>) {
          return b.rho;
        } else if constexpr (std::is_same_v<T, QuarterFluxBranch>) {
          return 0.5 + eps / (x + b.c);
        } else if constexpr (std::is_same_v<T, TrigBranch>) {
          const double k = half_root(4.0 * b.j - 1.0);
          return 0.5 - k * std::tan(k * (x + b.c) / eps);
        } else {
          const double kappa = half_root(1.0 - 4.0 * b.j);
          const double t = std::tanh(kappa * (x + b.c) / eps);
          return 0.5 + kappa * (b.kind == HyperbolicKind::Tanh ? t : 1.0 / t);
        }
      },
      branch_);
}

double ExplicitSolution1D::derivative(double x) const {
  const double eps = epsilon_;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConstantBranch>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, QuarterFluxBranch>) {
          return -eps / ((x + b.c) * (x + b.c));
        } else if constexpr (std::is_same_v<T, TrigBranch>) {
          const double k = half_root(4.0 * b.j - 1.0);
          const double t = std::tan(k * (x + b.c) / eps);
          return -k * k / eps * (1.0 + t * t);
        } else {
          const double kappa = half_root(1.0 - 4.0 * b.j);
          double t = std::tanh(kappa * (x + b.c) / eps);
          if (b.kind == HyperbolicKind::Coth) t = 1.0 / t;
          return kappa * kappa / eps * (1.0 - t * t);
        }
      },
      branch_);
}

std::optional<std::pair<double, double>> constant_solution(double alpha, double beta) {
  if (std::abs(alpha + beta - 1.0) > 1e-12) return std::nullopt;
  return std::make_pair(alpha, alpha * (1.0 - alpha));
}

std::pair<double, double> quarterflux_constants(double epsilon, double alpha, double beta) {
  if (alpha == 0.5 || beta == 0.5)
    throw std::domain_error("quarter-flux constants are singular at rate 1/2");
  // 1/4 = alpha (1/2 - eps / c1) and 1/4 = beta (1/2 + eps / (1 + c2)).
  const double c1 = 4.0 * alpha * epsilon / (2.0 * alpha - 1.0);
  const double c2 = 4.0 * beta * epsilon / (1.0 - 2.0 * beta) - 1.0;
  return {c1, c2};
}

double phase_boundary_alpha_min(double epsilon) {
  return (1.0 + 2.0 * epsilon) / (2.0 * (4.0 * epsilon + 1.0));
}

namespace {

double mirrored_rate(double epsilon, double a) {
  return 0.5 * (4.0 * a * epsilon + 2.0 * a - 1.0) /
         (8.0 * a * epsilon + 2.0 * a - 2.0 * epsilon - 1.0);
}

}  // namespace

double phase_boundary_beta(double epsilon, double alpha) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(alpha > phase_boundary_alpha_min(epsilon) && alpha <= 0.5))
    throw std::domain_error("alpha outside the interval where the j = 1/4 boundary exists");
  return mirrored_rate(epsilon, alpha);
}

double phase_boundary_alpha(double epsilon, double beta) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(beta > phase_boundary_alpha_min(epsilon) && beta <= 0.5))
    throw std::domain_error("beta outside the interval where the j = 1/4 boundary exists");
  return mirrored_rate(epsilon, beta);
}

namespace {

// tan of theta = k (x + c) / eps at x = 1 (from the outflow condition) and
// at x = 0 (from the inflow condition), with s = sqrt(4j - 1).
struct FluxAngles {
  double s;
  double a;
  double b;
};

FluxAngles flux_angles(double alpha, double beta, double j) {
  const double s = std::sqrt(4.0 * j - 1.0);
  return {s, (beta - 2.0 * j) / (beta * s), (2.0 * j - alpha) / (alpha * s)};
}

double flux_equation_derivative(double epsilon, double alpha, double beta, double j) {
  const auto [s, a, b] = flux_angles(alpha, beta, j);
  const double s3 = s * s * s;
  const double da = -2.0 * (2.0 * j - 1.0 + beta) / (beta * s3);
  const double db = 2.0 * (2.0 * j - 1.0 + alpha) / (alpha * s3);
  return da / (1.0 + a * a) - db / (1.0 + b * b) - 1.0 / (epsilon * s);
}

}  // namespace

double flux_equation(double epsilon, double alpha, double beta, double j) {
  const auto [s, a, b] = flux_angles(alpha, beta, j);
  return std::atan(a) - std::atan(b) - s / (2.0 * epsilon);
}

std::optional<FluxSolution> solve_flux_newton(double epsilon, double alpha, double beta,
                                              double j_init) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(alpha > 0.0 && beta > 0.0)) throw std::domain_error("rates must be positive");
  const auto g = [&](double j) { return flux_equation(epsilon, alpha, beta, j); };

  double lo = 0.25 + 1e-8;
  if (!(g(lo) > 0.0)) return std::nullopt;
  double delta = 1e-8, hi = lo;
  for (;;) {
    delta *= 4.0;
    hi = 0.25 + delta;
    if (g(hi) < 0.0) break;
    lo = hi;
    if (delta > 1e3) return std::nullopt;
  }

  double x = (j_init > lo && j_init < hi) ? j_init : 0.5 * (lo + hi);
  int it = 0;
  for (; it < 200; ++it) {
    const double f = g(x);
    if (f == 0.0) break;
    if (f > 0.0)
      lo = x;
    else
      hi = x;
    double next = x - f / flux_equation_derivative(epsilon, alpha, beta, x);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - x) <= 1e-16 * x || hi - lo <= 4e-16 * hi;
    x = next;
    if (done) break;
  }
  const double s = std::sqrt(4.0 * x - 1.0);
  const double k = 0.5 * s;
  const double theta1 = std::atan((beta - 2.0 * x) / (beta * s));
  return FluxSolution{x, epsilon * theta1 / k - 1.0, it + 1};
}

std::vector<PhaseBoundarySample> phase_boundary_curve(double epsilon, int n_samples) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (n_samples < 2) throw std::invalid_argument("phase_boundary_curve needs n_samples >= 2");
  // Rate at which the branch reaches 1 on the other axis.
  const double start = (1.0 + 4.0 * epsilon) / (2.0 * (1.0 + 6.0 * epsilon));
  std::vector<double> rates(n_samples);
  for (int i = 0; i < n_samples; ++i)
    rates[i] = start + (0.5 - start) * static_cast<double>(i) / (n_samples - 1);
  rates.back() = 0.5;

  std::vector<PhaseBoundarySample> out;
  out.reserve(2 * n_samples - 1);
  for (double a : rates)
    out.push_back({a, std::min(1.0, mirrored_rate(epsilon, a)), epsilon, BoundarySide::AlphaLimited});
  for (int i = n_samples - 2; i >= 0; --i) {
    const double b = rates[i];
    out.push_back({std::min(1.0, mirrored_rate(epsilon, b)), b, epsilon, BoundarySide::BetaLimited});
  }
  return out;
}

}  // namespace crowdflow
