// Saturated episodes of a trajectory and the threshold-crossing bound on
// when a saturated episode has to end.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nldamp/controllers.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

/// Time after which both terms of the positive-saturation exit inequality
/// are non-positive: max(0, -X2/S, sqrt(max(0, -2*X1/S))). For negative
/// saturation (sign < 0) the start state is negated first.
inline double saturation_exit_bound(double X1, double X2, double S, int sign = +1) {
  if (!(S > 0.0)) throw DomainError("saturation_exit_bound: S must be > 0");
  if (sign < 0) {
    X1 = -X1;
    X2 = -X2;
  }
  return std::max({0.0, -X2 / S, std::sqrt(std::max(0.0, -2.0 * X1 / S))});
}

/// A maximal run of saturated samples with a constant clamp sign.
struct SaturationEpisode {
  int sign = 0;  // sign of the clamped control
  double t_start = 0.0;
  State start;
  /// Time of the first unsaturated sample after the run; NotReached when the
  /// trajectory ends saturated or the clamp sign flips without leaving saturation.
  Metric t_exit;
  double exit_bound = 0.0;  // saturation_exit_bound from `start`
};

inline std::vector<SaturationEpisode> saturation_episodes(const Trajectory& traj) {
  std::vector<SaturationEpisode> episodes;
  if (!traj.controller.saturation().bounded()) return episodes;
  const double S = traj.controller.saturation().limit();
  bool open = false;
  for (const Sample& s : traj.samples) {
    const int sgn = static_cast<int>(sign(s.v));
    if (open && (!s.saturated || sgn != episodes.back().sign)) {
      if (!s.saturated) episodes.back().t_exit = Metric::of(s.t);
      open = false;
    }
    if (s.saturated && !open) {
      SaturationEpisode e;
      e.sign = sgn;
      e.t_start = s.t;
      e.start = s.state;
      e.t_exit = Metric::not_reached();
      e.exit_bound = saturation_exit_bound(s.state.x1, s.state.x2, S, sgn);
      episodes.push_back(e);
      open = true;
    }
  }
  return episodes;
}

}  // namespace nldamp
