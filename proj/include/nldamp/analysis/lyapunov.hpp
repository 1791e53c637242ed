// Energy function V = x2^2/2 + k*x1^2/2 and its rate along the closed loop.
#pragma once

#include <algorithm>
#include <cmath>

#include "nldamp/controllers.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

inline double lyapunov(const State& s, double k) { return 0.5 * s.x2 * s.x2 + 0.5 * k * s.x1 * s.x1; }

/// Rate of V along the unsaturated nonlinear-damping loop: -|x2|^3 / |x1|.
/// Independent of k; |x1| is floored at epsilon_reg.
inline double lyapunov_rate(const State& s, double epsilon_reg = kDefaultEpsilonReg) {
  const double a = std::abs(s.x2);
  if (a == 0.0) return 0.0;
  return -(a * a * a) / std::max(std::abs(s.x1), epsilon_reg);
}

namespace detail {

inline double applied_rate(const State& s, const ControllerSpec& spec, const ControlOutput& u) {
  if (u.saturated) return s.x2 * (u.v + spec.k() * s.x1);
  switch (spec.law()) {
    case Law::None:
      return 0.0;
    case Law::LinearDamping:
      return -spec.d() * s.x2 * s.x2;
    case Law::NonlinearDamping: {
      const double magnitude = s.x2 * s.x2 / std::max(std::abs(s.x1), spec.epsilon_reg());
      if (magnitude <= spec.damping_cap()) return lyapunov_rate(s, spec.epsilon_reg());
      return -std::abs(s.x2) * spec.damping_cap();
    }
  }
  return 0.0;
}

}  // namespace detail

/// dV/dt = x2 * (x2' + k*x1) for whichever dynamics are actually applied.
/// A vanishing rate is reported as +0.
inline double closed_loop_lyapunov_rate(const State& s, const ControllerSpec& spec, const ControlOutput& u) {
  const double rate = detail::applied_rate(s, spec, u);
  return rate == 0.0 ? 0.0 : rate;
}

}  // namespace nldamp
