// Closed-loop integration of the double integrator under a ControllerSpec.
//
// The control law is re-evaluated at every Runge-Kutta stage. Steps are
// clipped so that every sample instant is hit exactly, and steps that cross
// the saturation boundary |v_raw| = S are shortened by bisection so that the
// entry/exit instant is recorded as its own sample.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "nldamp/analysis/lyapunov.hpp"
#include "nldamp/controllers.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

struct Derivative {
  double dx1;
  double dx2;
};

/// x1' = x2, x2' = applied (possibly clamped) control.
inline Derivative derivative(const State& s, const ControllerSpec& spec) { return {s.x2, control(s, spec).v}; }

struct StepResult {
  State next_state;
  double dt_used = 0.0;
  /// Embedded error in tolerance units (<= 1 for an accepted adaptive step);
  /// always 0 for fixed-step RK4.
  double error_estimate = 0.0;
  /// Suggested size of the next step.
  double dt_next = 0.0;
};

namespace detail {

inline State advance(const State& s, double h, std::initializer_list<std::pair<double, Derivative>> terms) {
  double d1 = 0.0;
  double d2 = 0.0;
  for (const auto& [c, k] : terms) {
    d1 += c * k.dx1;
    d2 += c * k.dx2;
  }
  return {s.x1 + h * d1, s.x2 + h * d2};
}

inline Derivative checked_derivative(const State& s, const ControllerSpec& spec, double t) {
  if (!s.finite()) throw IntegrationBlowup(t, s);
  const Derivative d = derivative(s, spec);
  if (!std::isfinite(d.dx1) || !std::isfinite(d.dx2)) throw IntegrationBlowup(t, s);
  return d;
}

struct DopriTrial {
  State y5;
  State err;  // y5 - y4
};

// Dormand-Prince 5(4) tableau.
inline DopriTrial dopri_trial(const State& y, const ControllerSpec& spec, double h, double t) {
  const Derivative k1 = checked_derivative(y, spec, t);
  const Derivative k2 = checked_derivative(advance(y, h, {{1.0 / 5.0, k1}}), spec, t);
  const Derivative k3 = checked_derivative(advance(y, h, {{3.0 / 40.0, k1}, {9.0 / 40.0, k2}}), spec, t);
  const Derivative k4 =
      checked_derivative(advance(y, h, {{44.0 / 45.0, k1}, {-56.0 / 15.0, k2}, {32.0 / 9.0, k3}}), spec, t);
  const Derivative k5 = checked_derivative(
      advance(y, h, {{19372.0 / 6561.0, k1}, {-25360.0 / 2187.0, k2}, {64448.0 / 6561.0, k3}, {-212.0 / 729.0, k4}}),
      spec, t);
  const Derivative k6 = checked_derivative(advance(y, h,
                                                   {{9017.0 / 3168.0, k1},
                                                    {-355.0 / 33.0, k2},
                                                    {46732.0 / 5247.0, k3},
                                                    {49.0 / 176.0, k4},
                                                    {-5103.0 / 18656.0, k5}}),
                                           spec, t);
  const State y5 = advance(
      y, h,
      {{35.0 / 384.0, k1}, {500.0 / 1113.0, k3}, {125.0 / 192.0, k4}, {-2187.0 / 6784.0, k5}, {11.0 / 84.0, k6}});
  const Derivative k7 = checked_derivative(y5, spec, t);
  const State err = advance(State{0.0, 0.0}, h,
                            {{71.0 / 57600.0, k1},
                             {-71.0 / 16695.0, k3},
                             {71.0 / 1920.0, k4},
                             {-17253.0 / 339200.0, k5},
                             {22.0 / 525.0, k6},
                             {-1.0 / 40.0, k7}});
  return {y5, err};
}

inline State rk4_state(const State& y, const ControllerSpec& spec, double h, double t) {
  const Derivative k1 = checked_derivative(y, spec, t);
  const Derivative k2 = checked_derivative(advance(y, h, {{0.5, k1}}), spec, t);
  const Derivative k3 = checked_derivative(advance(y, h, {{0.5, k2}}), spec, t);
  const Derivative k4 = checked_derivative(advance(y, h, {{1.0, k3}}), spec, t);
  const State next = advance(y, h, {{1.0 / 6.0, k1}, {1.0 / 3.0, k2}, {1.0 / 3.0, k3}, {1.0 / 6.0, k4}});
  if (!next.finite()) throw IntegrationBlowup(t + h, next);
  return next;
}

}  // namespace detail

/// One classical Runge-Kutta step. `t` is only used in diagnostics.
inline StepResult step_rk4(const State& s, const ControllerSpec& spec, double dt, double t = 0.0) {
  if (!(dt > 0.0)) throw DomainError("step_rk4: dt must be > 0");
  return {detail::rk4_state(s, spec, dt, t), dt, 0.0, dt};
}

/// One accepted Dormand-Prince step, retrying with smaller sizes until the
/// embedded error estimate is within tolerance. Throws SingularityStall if
/// the step would have to shrink below `min_step`.
inline StepResult step_rk45(const State& s, const ControllerSpec& spec, double dt_try, double rel_tol,
                            double abs_tol, double min_step = 1e-13, double t = 0.0) {
  if (!(dt_try > 0.0)) throw DomainError("step_rk45: dt_try must be > 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("step_rk45: tolerances must be > 0");
  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;

  double h = dt_try;
  for (;;) {
    const detail::DopriTrial trial = detail::dopri_trial(s, spec, h, t);
    if (!trial.y5.finite()) throw IntegrationBlowup(t + h, trial.y5);
    const double sc1 = abs_tol + rel_tol * std::max(std::abs(s.x1), std::abs(trial.y5.x1));
    const double sc2 = abs_tol + rel_tol * std::max(std::abs(s.x2), std::abs(trial.y5.x2));
    const double err = std::max(std::abs(trial.err.x1) / sc1, std::abs(trial.err.x2) / sc2);
    if (err <= 1.0) {
      const double factor = err == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      return {trial.y5, h, err, h * factor};
    }
    h *= std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, 1.0);
    if (h < min_step) throw SingularityStall(t, s, h);
  }
}

/// Saturated-mode state from (X1, X2) after time t under x2' = sign_v * S.
inline State simulate_saturated_closed_form(double X1, double X2, double S, int sign_v, double t) {
  if (!(S > 0.0)) throw DomainError("simulate_saturated_closed_form: S must be > 0");
  if (!(t >= 0.0)) throw DomainError("simulate_saturated_closed_form: t must be >= 0");
  const double a = sign_v >= 0 ? S : -S;
  return {X1 + X2 * t + 0.5 * a * t * t, X2 + a * t};
}

inline Sample make_sample(double t, const State& s, const ControllerSpec& spec) {
  const ControlOutput u = control(s, spec);
  return {t, s, u.v_raw, u.v, u.saturated, lyapunov(s, spec.k()), closed_loop_lyapunov_rate(s, spec, u)};
}

/// Called after every accepted internal step with (t, state).
using StepObserver = std::function<void(double, const State&)>;

/// Bisection resolution for saturation entry/exit instants.
inline constexpr double kSwitchTimeTolerance = 1e-12;

inline Trajectory simulate(const ControllerSpec& spec, const SimulationConfig& cfg,
                           const StepObserver& on_step = {}) {
  cfg.validate();
  Trajectory traj{spec, cfg, {}};
  const bool adaptive = cfg.integrator == IntegratorKind::AdaptiveRK45;

  auto sample_time = [&](std::size_t i) {
    const double ti = static_cast<double>(i) * cfg.sample_interval;
    return (ti > cfg.t_end || cfg.t_end - ti <= 1e-9 * cfg.sample_interval) ? cfg.t_end : ti;
  };
  auto below_stop = [&](const State& s) { return cfg.v_stop > 0.0 && lyapunov(s, spec.k()) < cfg.v_stop; };
  // Plain step of exactly h from y (no error control), used while bisecting.
  auto substep = [&](const State& y, double h, double t) {
    return adaptive ? detail::dopri_trial(y, spec, h, t).y5 : detail::rk4_state(y, spec, h, t);
  };

  double t = 0.0;
  State y = cfg.initial;
  traj.samples.push_back(make_sample(t, y, spec));
  if (below_stop(y)) return traj;

  bool saturated = traj.samples.back().saturated;
  std::size_t next_index = 1;
  double h = adaptive ? std::min(1e-4, cfg.sample_interval) : cfg.dt;

  for (;;) {
    const double target = sample_time(next_index);
    const double to_target = target - t;
    const bool clipped = h >= to_target;
    const double h_try = clipped ? to_target : h;

    const StepResult step = adaptive ? step_rk45(y, spec, h_try, cfg.rel_tol, cfg.abs_tol, cfg.min_step, t)
                                     : step_rk4(y, spec, h_try, t);
    double h_used = step.dt_used;
    State y_new = step.next_state;

    bool event = false;
    if (spec.saturation().bounded() && control(y_new, spec).saturated != saturated) {
      double lo = 0.0;
      double hi = h_used;
      while (hi - lo > kSwitchTimeTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (control(substep(y, mid, t), spec).saturated == saturated) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (hi < h_used) {
        h_used = hi;
        y_new = substep(y, hi, t);
      }
      event = true;
    }

    const bool landed = h_used == to_target;
    const double t_new = landed ? target : t + h_used;
    if (!(t_new > t)) throw SingularityStall(t, y, h_used);
    t = t_new;
    y = y_new;
    if (on_step) on_step(t, y);

    const bool stop = below_stop(y);
    if (landed || event || stop) {
      traj.samples.push_back(make_sample(t, y, spec));
      saturated = traj.samples.back().saturated;
    }
    if (landed) {
      if (target == cfg.t_end) break;
      ++next_index;
    }
    if (stop) break;

    if (adaptive) {
      const bool kept_proposal = clipped && step.dt_used == h_try && !event;
      h = kept_proposal ? std::max(h, step.dt_next) : step.dt_next;
    }
  }
  return traj;
}

}  // namespace nldamp
