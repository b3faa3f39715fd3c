#include "crowdflow/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crowdflow {

namespace {

constexpr double kBlowUp = 10.0;

struct Trajectory {
  double end;
  bool blew_up;
};

// Classical RK4 for eps rho' = rho (1 - rho) - j, over [0, 1] forward
// (sign = +1) or from 1 back to 0 (sign = -1).
Trajectory integrate(double epsilon, double j, double rho_start, int steps, double sign,
                     std::vector<double>* path) {
  const double h = sign / steps;
  const auto f = [&](double r) { return (r * (1.0 - r) - j) / epsilon; };
  double r = rho_start;
  if (path) {
    path->assign(1, r);
    path->reserve(steps + 1);
  }
  for (int n = 0; n < steps; ++n) {
    const double k1 = f(r);
    const double k2 = f(r + 0.5 * h * k1);
    const double k3 = f(r + 0.5 * h * k2);
    const double k4 = f(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(r) <= kBlowUp)) return {r, true};
    if (path) path->push_back(r);
  }
  return {r, false};
}

// Forward: residual rho(1) - j / beta, decreasing in j, -inf on blow-up.
// Backward: residual rho(0) - (1 - j / alpha), increasing in j, +inf on blow-up.
double residual(double epsilon, double alpha, double beta, double j, int steps,
                ShootingDirection dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (dir == ShootingDirection::Forward) {
    const auto t = integrate(epsilon, j, 1.0 - j / alpha, steps, 1.0, nullptr);
    return t.blew_up ? -inf : t.end - j / beta;
  }
  const auto t = integrate(epsilon, j, j / beta, steps, -1.0, nullptr);
  return t.blew_up ? inf : t.end - (1.0 - j / alpha);
}

struct Bisection {
  double j;
  double landing;
  bool bracketed;
};

Bisection bisect(double epsilon, double alpha, double beta, const ShootingOptions& opt,
                 ShootingDirection dir) {
  const double sign = dir == ShootingDirection::Forward ? 1.0 : -1.0;
  // g(j) = sign * residual is decreasing in j for both directions.
  const auto g = [&](double j) {
    return sign * residual(epsilon, alpha, beta, j, opt.steps, dir);
  };
  const double j_cap = std::min(alpha, beta);
  double lo = std::min(opt.j_min, 0.5 * j_cap);
  double hi = std::min(j_cap, 0.3);
  double glo = g(lo);
  double ghi = g(hi);
  if (glo > 0.0 && ghi > 0.0 && hi < j_cap) {
    hi = j_cap;
    ghi = g(hi);
  }
  if (glo == 0.0) return {lo, 0.0, true};
  if (ghi == 0.0) return {hi, 0.0, true};
  if (!(glo > 0.0 && ghi < 0.0)) return {0.0, std::numeric_limits<double>::infinity(), false};

  for (int it = 0; it < opt.max_bisections && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    (gm > 0.0 ? lo : hi) = mid;
  }
  // Report whichever end of the final bracket lands closer.
  const double rl = std::abs(g(lo));
  const double rh = std::abs(g(hi));
  return rl <= rh ? Bisection{lo, rl, true} : Bisection{hi, rh, true};
}

}  // namespace

ShootingResult shooting_solve(double epsilon, double alpha, double beta,
                              const ShootingOptions& options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("shooting needs rates in (0, 1]");
  if (options.steps < 2) throw std::invalid_argument("shooting needs at least two steps");

  const auto fwd = bisect(epsilon, alpha, beta, options, ShootingDirection::Forward);
  const auto bwd = bisect(epsilon, alpha, beta, options, ShootingDirection::Backward);
  if (!fwd.bracketed && !bwd.bracketed)
    throw NonBracketingError("landing residual does not change sign over the flux bracket");

  ShootingResult out;
  const bool forward = fwd.bracketed && (!bwd.bracketed || fwd.landing <= bwd.landing);
  out.direction = forward ? ShootingDirection::Forward : ShootingDirection::Backward;
  out.j = forward ? fwd.j : bwd.j;
  out.landing_residual = forward ? fwd.landing : bwd.landing;

  const double sign = forward ? 1.0 : -1.0;
  const double start = forward ? 1.0 - out.j / alpha : out.j / beta;
  std::vector<double> path;
  const auto coarse = integrate(epsilon, out.j, start, options.steps, sign, &path);
  const auto fine = integrate(epsilon, out.j, start, 2 * options.steps, sign, nullptr);
  out.richardson_error = coarse.blew_up || fine.blew_up
                             ? std::numeric_limits<double>::infinity()
                             : std::abs(coarse.end - fine.end);
  path.resize(options.steps + 1, path.empty() ? start : path.back());
  if (!forward) std::reverse(path.begin(), path.end());
  out.rho = std::move(path);
  out.x.resize(options.steps + 1);
  for (int n = 0; n <= options.steps; ++n)
    out.x[n] = static_cast<double>(n) / options.steps;
  return out;
}

}  // namespace crowdflow
