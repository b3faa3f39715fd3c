#include "crowdflow/model.hpp"

#include "crowdflow/dg_function.hpp"
#include "crowdflow/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace crowdflow {

BoundarySegment BoundarySegment::inflow(std::string tag, double alpha) {
  return {std::move(tag), SegmentKind::Inflow, alpha};
}

BoundarySegment BoundarySegment::outflow(std::string tag, double beta) {
  return {std::move(tag), SegmentKind::Outflow, beta};
}

BoundarySegment BoundarySegment::wall(std::string tag) {
  return {std::move(tag), SegmentKind::Wall, 0.0};
}

void ModelParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (!(initial_density >= 0.0 && initial_density <= 1.0))
    throw std::invalid_argument("initial_density must lie in [0, 1]");
  std::set<std::string> tags;
  for (const auto& s : segments) {
    if (s.tag.empty()) throw std::invalid_argument("boundary segment without a tag");
    if (!tags.insert(s.tag).second)
      throw std::invalid_argument("duplicate boundary segment '" + s.tag + "'");
    if (s.kind != SegmentKind::Wall && !(s.rate >= 0.0 && s.rate <= 1.0))
      throw std::invalid_argument("rate of segment '" + s.tag + "' must lie in [0, 1]");
  }
  if (const auto* c = std::get_if<ConstantVelocity>(&velocity); c && !c->value.allFinite())
    throw std::invalid_argument("velocity must be finite");
  if (const auto* l = std::get_if<LinearPotentialVelocity>(&velocity); l && !l->direction.allFinite())
    throw std::invalid_argument("velocity direction must be finite");
}

const BoundarySegment* ModelParams::find_segment(const std::string& tag) const {
  for (const auto& s : segments)
    if (s.tag == tag) return &s;
  return nullptr;
}

std::pair<double, double> ModelParams::density_bounds() const {
  double lo = 1.0, hi = 0.0;
  for (const auto& s : segments) {
    double v;
    if (s.kind == SegmentKind::Inflow)
      v = s.rate;
    else if (s.kind == SegmentKind::Outflow)
      v = 1.0 - s.rate;
    else
      continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) return {0.0, 1.0};
  return {lo, hi};
}

ModelParams make_interval_params(double epsilon, double alpha, double beta) {
  ModelParams p;
  p.epsilon = epsilon;
  p.velocity = ConstantVelocity{{1.0, 0.0}};
  p.segments = {BoundarySegment::inflow(std::string(kInflowTag), alpha),
                BoundarySegment::outflow(std::string(kOutflowTag), beta)};
  return p;
}

EntropyState EntropyState::from_density(double rho, double potential) {
  return {rho, rho_to_psi(rho, potential), potential};
}

EntropyState EntropyState::from_entropy_variable(double psi, double potential) {
  return {psi_to_rho(psi, potential), psi, potential};
}

double rho_to_psi(double rho, double potential) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("density must lie in (0, 1)");
  return std::log(rho) - std::log1p(-rho) - potential;
}

double psi_to_rho(double psi, double potential) {
  const double z = psi + potential;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double mobility(double psi, double potential) {
  // Written in e^{-|z|} so that neither branch overflows.
  const double e = std::exp(-std::abs(psi + potential));
  return e / ((1.0 + e) * (1.0 + e));
}

double mobility_cosh(double psi, double potential) {
  return 1.0 / (2.0 * (1.0 + std::cosh(psi + potential)));
}

namespace {

double entropy_density(double rho, double v) {
  const double r = std::clamp(rho, kEntropyClip, 1.0 - kEntropyClip);
  return r * std::log(r) - r * v + (1.0 - r) * std::log1p(-r);
}

// 3-point Gauss rule on [0, 1].
constexpr std::array<double, 3> kGaussX{0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> kGaussW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// The integrand has unbounded derivatives where rho touches 0 or 1, so each
// cell is split into sub-cells before applying a low-order rule.
constexpr int kSubdivisions = 32;

}  // namespace

double entropy(const DgFunction& rho, const DgFunction& potential, const Mesh& mesh) {
  if (&rho.mesh() != &mesh || &potential.mesh() != &mesh)
    throw std::invalid_argument("entropy: fields must live on the given mesh");
  double total = 0.0;
  const int nc = static_cast<int>(mesh.num_cells());
  if (mesh.dim() == 1) {
    for (int c = 0; c < nc; ++c) {
      double s = 0.0;
      for (int m = 0; m < kSubdivisions; ++m) {
        for (int q = 0; q < 3; ++q) {
          const double t = (m + kGaussX[q]) / kSubdivisions;
          const std::array<double, 3> b{1.0 - t, t, 0.0};
          s += kGaussW[q] * entropy_density(rho.value(c, b), potential.value(c, b));
        }
      }
      total += s * mesh.cell_measure(c) / kSubdivisions;
    }
    return total;
  }
  // Triangles: regular split into n^2 sub-triangles, each integrated with
  // the interior 3-point rule (weights 1/3 at (2/3, 1/6, 1/6) and permutations).
  constexpr int n = 8;
  const auto sub_rule = [&](int c, const std::array<std::array<double, 3>, 3>& corners) {
    double s = 0.0;
    for (int q = 0; q < 3; ++q) {
      std::array<double, 3> b{};
      for (int k = 0; k < 3; ++k) {
        const double w = k == q ? 2.0 / 3.0 : 1.0 / 6.0;
        for (int d = 0; d < 3; ++d) b[d] += w * corners[k][d];
      }
      s += entropy_density(rho.value(c, b), potential.value(c, b)) / 3.0;
    }
    return s;
  };
  for (int c = 0; c < nc; ++c) {
    double s = 0.0;
    const auto node = [](int i, int j) {
      return std::array<double, 3>{1.0 - static_cast<double>(i + j) / n,
                                   static_cast<double>(i) / n, static_cast<double>(j) / n};
    };
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i + j < n; ++i) {
        s += sub_rule(c, {node(i, j), node(i + 1, j), node(i, j + 1)});
        if (i + j + 1 < n) s += sub_rule(c, {node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
      }
    }
    total += s * mesh.cell_measure(c) / (n * n);
  }
  return total;
}

}  // namespace crowdflow
