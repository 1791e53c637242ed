// Trajectory metrics: overshoot, settling, attractor slope, log-decay fits.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "nldamp/analysis/convergence.hpp"
#include "nldamp/analysis/saturation.hpp"
#include "nldamp/model.hpp"

namespace nldamp {

struct TimeWindow {
  double t_begin;
  double t_end;

  [[nodiscard]] bool contains(double t) const { return t >= t_begin && t <= t_end; }
};

/// Strict sign changes of x1; exact zeros are skipped.
inline int overshoot_count(const std::vector<Sample>& samples) {
  int count = 0;
  int last = 0;
  for (const Sample& s : samples) {
    const int sg = static_cast<int>(sign(s.state.x1));
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

/// First sample time after which |x1| <= threshold for every later sample.
inline Metric settling_time(const std::vector<Sample>& samples, double threshold) {
  if (samples.empty() || std::abs(samples.back().state.x1) > threshold) return Metric::not_reached();
  std::size_t i = samples.size() - 1;
  while (i > 0 && std::abs(samples[i - 1].state.x1) <= threshold) --i;
  return Metric::of(samples[i].t);
}

/// Median relative deviation |x2/x1 + sqrt(k)| / sqrt(k) over samples with
/// |x1| inside [x1_min, x1_max].
inline Metric attractor_slope_error(const Trajectory& traj, double x1_min = 1e-6, double x1_max = 1e-4) {
  const double root_k = -attractor_slope(traj.controller.k());
  std::vector<double> errors;
  for (const Sample& s : traj.samples) {
    const double a = std::abs(s.state.x1);
    if (a >= x1_min && a <= x1_max) errors.push_back(std::abs(s.state.x2 / s.state.x1 + root_k) / root_k);
  }
  if (errors.empty()) return Metric::not_applicable();
  const std::size_t mid = errors.size() / 2;
  std::nth_element(errors.begin(), errors.begin() + static_cast<std::ptrdiff_t>(mid), errors.end());
  double median = errors[mid];
  if (errors.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(errors.begin(), errors.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return Metric::of(median);
}

namespace detail {

inline PolynomialFit polyfit(const std::vector<double>& t, const std::vector<double>& y, int degree) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      A(i, j) = p;
      p *= t[static_cast<std::size_t>(i)];
    }
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  const double ss_res = (A * c - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).matrix().squaredNorm();
  PolynomialFit fit;
  fit.coefficients.assign(c.data(), c.data() + c.size());
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace detail

/// Required r^2 gain for the quadratic model to be selected.
inline constexpr double kQuadraticImprovement = 0.01;

/// Fits log10|x1| over the window with degree-1 and degree-2 polynomials.
/// Throws DomainError if x1 is zero or changes sign inside the window, or if
/// fewer than three samples fall into it.
inline DecayFit fit_log_decay(const Trajectory& traj, TimeWindow window) {
  std::vector<double> t;
  std::vector<double> y;
  int sg = 0;
  for (const Sample& s : traj.samples) {
    if (!window.contains(s.t)) continue;
    const int cur = static_cast<int>(sign(s.state.x1));
    if (cur == 0 || (sg != 0 && cur != sg)) throw DomainError("fit_log_decay: x1 vanishes or changes sign in window");
    sg = cur;
    t.push_back(s.t);
    y.push_back(std::log10(std::abs(s.state.x1)));
  }
  if (t.size() < 3) throw DomainError("fit_log_decay: fewer than three samples in window");

  DecayFit fit;
  fit.linear = detail::polyfit(t, y, 1);
  fit.quadratic = detail::polyfit(t, y, 2);
  const bool quadratic = fit.quadratic.r_squared - fit.linear.r_squared > kQuadraticImprovement;
  fit.model = quadratic ? DecayFit::Model::Quadratic : DecayFit::Model::Linear;
  const PolynomialFit& chosen = quadratic ? fit.quadratic : fit.linear;
  fit.coefficients = chosen.coefficients;
  fit.r_squared = chosen.r_squared;
  return fit;
}

struct AnalysisOptions {
  /// <= 0 selects 1e-6 * max(1, |x1(0)|).
  double settle_threshold = 0.0;
  double slope_x1_min = 1e-6;
  double slope_x1_max = 1e-4;
  /// Whole trajectory when empty.
  std::optional<TimeWindow> decay_window;
};

inline double default_settle_threshold(const Trajectory& traj) {
  return 1e-6 * std::max(1.0, std::abs(traj.config.initial.x1));
}

inline AnalysisReport analyze(const Trajectory& traj, const AnalysisOptions& opts = {}) {
  if (traj.empty()) throw DomainError("analyze: empty trajectory");
  AnalysisReport r;
  r.overshoot_count = overshoot_count(traj.samples);
  const double threshold = opts.settle_threshold > 0.0 ? opts.settle_threshold : default_settle_threshold(traj);
  r.settling_time = settling_time(traj.samples, threshold);
  r.final_V = traj.back().V;
  const TimeWindow window = opts.decay_window.value_or(TimeWindow{traj.front().t, traj.back().t});
  try {
    r.decay_fit = fit_log_decay(traj, window);
  } catch (const DomainError&) {
    r.decay_fit.reset();
  }
  r.attractor_slope_error = attractor_slope_error(traj, opts.slope_x1_min, opts.slope_x1_max);

  r.saturation_exit_time = Metric::not_applicable();
  bool ever = false;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    ever = ever || traj.samples[i].saturated;
    if (i > 0 && traj.samples[i - 1].saturated && !traj.samples[i].saturated) {
      r.saturation_exit_time = Metric::of(traj.samples[i].t);
    }
  }
  if (ever && traj.back().saturated) r.saturation_exit_time = Metric::not_reached();
  return r;
}

inline AnalysisReport analyze(const Trajectory& traj, double settle_threshold) {
  AnalysisOptions opts;
  opts.settle_threshold = settle_threshold;
  return analyze(traj, opts);
}

}  // namespace nldamp
