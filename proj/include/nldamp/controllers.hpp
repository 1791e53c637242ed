// Control laws for the double integrator: proportional feedback combined with
// either linear damping d*x2 or the nonlinear damping x2^2 / |x1| * sign(x2),
// followed by an optional amplitude clamp.
#pragma once

#include <algorithm>
#include <cmath>

#include "nldamp/model.hpp"

namespace nldamp {

/// sign(0) == 0.
template <typename T>
constexpr T sign(T x) {
  return static_cast<T>((T(0) < x) - (x < T(0)));
}

/// Linear damping that places a real double pole at -sqrt(k).
inline double critical_gain(double k) {
  if (!(k > 0.0)) throw DomainError("critical_gain: k must be > 0");
  return 2.0 * std::sqrt(k);
}

inline double linear_control(const State& s, double k, double d) { return -k * s.x1 - d * s.x2; }

/// Nonlinear damping term x2^2 / max(|x1|, eps), capped in magnitude, carrying
/// the sign of x2. Zero whenever x2 == 0.
inline double nonlinear_damping(const State& s, double epsilon_reg, double damping_cap) {
  if (s.x2 == 0.0) return 0.0;
  const double magnitude = std::min(s.x2 * s.x2 / std::max(std::abs(s.x1), epsilon_reg), damping_cap);
  return magnitude * sign(s.x2);
}

inline double nonlinear_control(const State& s, const ControllerSpec& spec) {
  return -spec.k() * s.x1 - nonlinear_damping(s, spec.epsilon_reg(), spec.damping_cap());
}

struct Saturated {
  double v;
  bool saturated;
};

/// Clamp to [-S, S]. Hitting the limit exactly does not count as saturated.
inline Saturated saturate(double v_raw, const Saturation& sat) {
  if (!sat.bounded()) return {v_raw, false};
  const double S = sat.limit();
  return {std::clamp(v_raw, -S, S), std::abs(v_raw) > S};
}

struct ControlOutput {
  double v;
  double v_raw;
  bool saturated;
};

/// Unclamped control for the active law. Law::None keeps the proportional term.
inline double raw_control(const State& s, const ControllerSpec& spec) {
  switch (spec.law()) {
    case Law::None:
      return -spec.k() * s.x1;
    case Law::LinearDamping:
      return linear_control(s, spec.k(), spec.d());
    case Law::NonlinearDamping:
      return nonlinear_control(s, spec);
  }
  return 0.0;
}

inline ControlOutput control(const State& s, const ControllerSpec& spec) {
  const double v_raw = raw_control(s, spec);
  const auto [v, saturated] = saturate(v_raw, spec.saturation());
  return {v, v_raw, saturated};
}

}  // namespace nldamp
