// Comparative experiments: linear vs nonlinear damping, gain sweeps, the
// saturation study, and phase portraits. Each runner returns plain data;
// writing files is left to the caller.
#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nldamp/analysis.hpp"
#include "nldamp/controllers.hpp"
#include "nldamp/integrator.hpp"
#include "nldamp/model.hpp"

namespace nldamp::experiments {

struct Run {
  Trajectory trajectory;
  AnalysisReport report;
};

/// Simulates every (spec, config) pair concurrently; results keep input order.
inline std::vector<Trajectory> simulate_all(const std::vector<ControllerSpec>& specs,
                                            const std::vector<SimulationConfig>& configs) {
  std::vector<std::future<Trajectory>> pending;
  pending.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&, i] { return simulate(specs[i], configs[i]); }));
  }
  std::vector<Trajectory> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

inline std::vector<Trajectory> simulate_all(const std::vector<ControllerSpec>& specs, const SimulationConfig& cfg) {
  return simulate_all(specs, std::vector<SimulationConfig>(specs.size(), cfg));
}

// ---------------------------------------------------------------------------
// Linear vs nonlinear damping
// ---------------------------------------------------------------------------

/// Fit windows for the log-decay comparison at the default horizon.
inline constexpr TimeWindow kLinearDecayWindow{0.5, 1.5};
inline constexpr TimeWindow kNonlinearDecayWindow{0.05, 0.8};

struct Comparison {
  Run linear;
  Run nonlinear;
};

/// `base` supplies k, saturation and numerical guards; its law is ignored.
inline Comparison compare(const ControllerSpec& base, double d, const SimulationConfig& cfg) {
  const ControllerSpec lin(Law::LinearDamping, base.k(), d, base.saturation(), base.epsilon_reg(), base.damping_cap());
  const ControllerSpec nl(Law::NonlinearDamping, base.k(), 0.0, base.saturation(), base.epsilon_reg(),
                          base.damping_cap());
  auto trajs = simulate_all({lin, nl}, cfg);
  AnalysisOptions lin_opts;
  lin_opts.decay_window = kLinearDecayWindow;
  AnalysisOptions nl_opts;
  nl_opts.decay_window = kNonlinearDecayWindow;
  Comparison c{{std::move(trajs[0]), {}}, {std::move(trajs[1]), {}}};
  c.linear.report = analyze(c.linear.trajectory, lin_opts);
  c.nonlinear.report = analyze(c.nonlinear.trajectory, nl_opts);
  return c;
}

// ---------------------------------------------------------------------------
// Gain sweep
// ---------------------------------------------------------------------------

inline const std::vector<double> kDefaultSweepGains{10.0, 100.0, 1000.0};

inline std::vector<Run> sweep_k(const ControllerSpec& base, const std::vector<double>& gains,
                                const SimulationConfig& cfg) {
  std::vector<ControllerSpec> specs;
  for (double k : gains) {
    specs.emplace_back(base.law(), k, base.d(), base.saturation(), base.epsilon_reg(), base.damping_cap());
  }
  std::vector<Run> runs;
  for (auto& t : simulate_all(specs, cfg)) {
    AnalysisReport r = analyze(t);
    runs.push_back({std::move(t), r});
  }
  return runs;
}

/// Maps a gain-k trajectory onto gain-1 time: (tau, y1, y2) = (t*sqrt(k), x1, x2/sqrt(k)).
inline std::vector<Sample> rescale_to_unit_gain(const Trajectory& traj) {
  const double root_k = std::sqrt(traj.controller.k());
  std::vector<Sample> out;
  out.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) {
    Sample r = s;
    r.t = s.t * root_k;
    r.state = {s.state.x1, s.state.x2 / root_k};
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Saturation study
// ---------------------------------------------------------------------------

inline const std::vector<double> kDefaultSaturationGains{50.0, 100.0, 150.0, 200.0};
inline constexpr double kDefaultSaturationLimit = 25.0;

struct SaturationRun {
  Run run;
  std::vector<SaturationEpisode> episodes;
};

/// One run per gain at the given limit, plus an unbounded run at the largest gain.
inline std::vector<SaturationRun> saturation_study(const ControllerSpec& base, const std::vector<double>& gains,
                                                   Saturation limit, const SimulationConfig& cfg) {
  std::vector<ControllerSpec> specs;
  for (double k : gains) specs.emplace_back(base.law(), k, base.d(), limit, base.epsilon_reg(), base.damping_cap());
  if (!gains.empty() && limit.bounded()) {
    const double k_max = *std::max_element(gains.begin(), gains.end());
    specs.emplace_back(base.law(), k_max, base.d(), Saturation::unbounded(), base.epsilon_reg(), base.damping_cap());
  }
  std::vector<SaturationRun> out;
  for (auto& t : simulate_all(specs, cfg)) {
    AnalysisReport r = analyze(t);
    auto episodes = saturation_episodes(t);
    out.push_back({{std::move(t), r}, std::move(episodes)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phase portrait
// ---------------------------------------------------------------------------

struct PortraitLayout {
  std::vector<double> radii{1.0, 2.0};
  std::size_t rays = 16;
};

/// Initial states on concentric rings, ray j at angle 2*pi*j/rays.
/// Coordinates within 1e-15 of an axis are snapped onto it.
inline std::vector<State> ring_initial_states(const PortraitLayout& layout) {
  std::vector<State> out;
  for (double r : layout.radii) {
    for (std::size_t j = 0; j < layout.rays; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(layout.rays);
      double c = std::cos(a);
      double s = std::sin(a);
      if (std::abs(c) < 1e-15) c = 0.0;
      if (std::abs(s) < 1e-15) s = 0.0;
      out.push_back({r * c, r * s});
    }
  }
  return out;
}

inline std::string_view quadrant(const State& s) {
  if (s.x1 > 0 && s.x2 > 0) return "I";
  if (s.x1 < 0 && s.x2 > 0) return "II";
  if (s.x1 < 0 && s.x2 < 0) return "III";
  if (s.x1 > 0 && s.x2 < 0) return "IV";
  return "axis";
}

inline std::vector<Run> portrait(const ControllerSpec& spec, const std::vector<State>& initial_states,
                                 const SimulationConfig& cfg) {
  std::vector<SimulationConfig> configs;
  for (const State& s : initial_states) {
    SimulationConfig c = cfg;
    c.initial = s;
    configs.push_back(c);
  }
  std::vector<Run> runs;
  for (auto& t : simulate_all(std::vector<ControllerSpec>(initial_states.size(), spec), configs)) {
    AnalysisReport r = analyze(t);
    runs.push_back({std::move(t), r});
  }
  return runs;
}

}  // namespace nldamp::experiments
