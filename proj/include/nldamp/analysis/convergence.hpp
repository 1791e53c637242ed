// Attractor slope near the origin and the finite-time convergence region
// defined by dV/dt + alpha * sqrt(V) <= 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nldamp/analysis/grid.hpp"
#include "nldamp/analysis/lyapunov.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

/// Slope of the line x2 + sqrt(k)*x1 = 0.
inline double attractor_slope(double k) {
  if (!(k > 0.0)) throw DomainError("attractor_slope: k must be > 0");
  return -std::sqrt(k);
}

/// |x2|^3 / |x1| >= alpha * (sqrt(2)/2) * sqrt(x2^2 + k*x1^2).
/// The origin itself is excluded (returns false).
inline bool finite_time_condition(const State& s, double k, double alpha,
                                  double epsilon_reg = kDefaultEpsilonReg) {
  if (!(alpha > 0.0)) throw DomainError("finite_time_condition: alpha must be > 0");
  if (s.is_origin()) return false;
  const double a = std::abs(s.x2);
  const double lhs = a * a * a / std::max(std::abs(s.x1), epsilon_reg);
  const double rhs = alpha * (std::numbers::sqrt2 / 2.0) * std::sqrt(s.x2 * s.x2 + k * s.x1 * s.x1);
  return lhs >= rhs;
}

struct FiniteTimeRegion {
  RegionMask mask;
  GridField<double> vdot_magnitude;  // |dV/dt|
  GridField<double> alpha_sqrt_v;    // alpha * sqrt(V)
};

inline FiniteTimeRegion finite_time_region(const GridSpec& grid, double k, double alpha,
                                           double epsilon_reg = kDefaultEpsilonReg) {
  if (!(alpha > 0.0)) throw DomainError("finite_time_region: alpha must be > 0");
  FiniteTimeRegion r{RegionMask(grid, false), GridField<double>(grid, 0.0), GridField<double>(grid, 0.0)};
  r.mask.fill_with([&](std::size_t, std::size_t, const State& c) { return finite_time_condition(c, k, alpha, epsilon_reg); });
  r.vdot_magnitude.fill_with([&](std::size_t, std::size_t, const State& c) { return std::abs(lyapunov_rate(c, epsilon_reg)); });
  r.alpha_sqrt_v.fill_with([&](std::size_t, std::size_t, const State& c) { return alpha * std::sqrt(lyapunov(c, k)); });
  return r;
}

/// Upper bound 2*sqrt(V0)/alpha on the convergence time when the
/// finite-time inequality holds along the whole trajectory.
inline double convergence_time_bound(double V0, double alpha) {
  if (!(V0 >= 0.0)) throw DomainError("convergence_time_bound: V0 must be >= 0");
  if (!(alpha > 0.0)) throw DomainError("convergence_time_bound: alpha must be > 0");
  return 2.0 * std::sqrt(V0) / alpha;
}

}  // namespace nldamp
