// Command-line front end. Every command writes CSV files (plus optional SVG
// pictures and JSON reports) into --out. Exit codes: 0 success, 1 runtime
// failure, 2 usage error.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nldamp/analysis.hpp"
#include "nldamp/controllers.hpp"
#include "nldamp/experiments.hpp"
#include "nldamp/integrator.hpp"
#include "nldamp/io.hpp"
#include "nldamp/model.hpp"
#include "nldamp/svg.hpp"

namespace nldamp::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string law = "nonlinear";
  double k = 100.0;
  std::string d = "auto";
  double x1 = 1.0;
  double x2 = 0.0;
  std::string s;  // empty: command default
  double t_end = 2.0;
  std::string integrator = "rk45";
  double dt = 1e-5;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double min_step = 1e-13;
  double v_stop = 1e-20;
  double sample_interval = 1e-3;
  double epsilon_reg = kDefaultEpsilonReg;
  double damping_cap = kDefaultDampingCap;
  double alpha = 1.0;
  std::string out = ".";
  std::string format = "csv";
  std::string config;
  std::string k_list;  // comma separated
  // portrait
  std::string radii = "1,2";
  std::size_t rays = 16;
  // grid maps
  double x1_min = -2.0;
  double x1_max = 2.0;
  double x2_min = -2.0;
  double x2_max = 2.0;
  std::size_t n1 = 201;
  std::size_t n2 = 201;
};

// ---------------------------------------------------------------------------
// Option resolution
// ---------------------------------------------------------------------------

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (auto part : io::split(text, ',')) {
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (part.empty()) continue;
    try {
      out.push_back(io::parse_number(part));
    } catch (const DomainError&) {
      throw UsageError("invalid number '" + std::string(part) + "' in list");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

inline Saturation resolve_saturation(const std::string& text, Saturation fallback) {
  if (text.empty()) return fallback;
  if (text == "inf") return Saturation::unbounded();
  double S = 0.0;
  try {
    S = io::parse_number(text);
  } catch (const DomainError&) {
    throw UsageError("--s must be a positive number or 'inf'");
  }
  if (std::isinf(S) && S > 0) return Saturation::unbounded();
  if (!(S > 0.0)) throw UsageError("--s must be > 0");
  return Saturation::at(S);
}

/// "auto" selects the critical damping 2*sqrt(k).
inline double resolve_damping(const std::string& text, double k) {
  if (text == "auto") return critical_gain(k);
  try {
    return io::parse_number(text);
  } catch (const DomainError&) {
    throw UsageError("--d must be a number or 'auto'");
  }
}

inline ControllerSpec resolve_controller(const Options& o, Saturation default_saturation) {
  const Law law = parse_law(o.law);
  const double d = law == Law::LinearDamping ? resolve_damping(o.d, o.k) : 0.0;
  return {law, o.k, d, resolve_saturation(o.s, default_saturation), o.epsilon_reg, o.damping_cap};
}

inline SimulationConfig resolve_config(const Options& o) {
  SimulationConfig c;
  c.initial = {o.x1, o.x2};
  c.t_end = o.t_end;
  c.integrator = parse_integrator(o.integrator);
  c.dt = o.dt;
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  c.min_step = o.min_step;
  c.v_stop = o.v_stop;
  c.sample_interval = o.sample_interval;
  c.validate();
  return c;
}

inline GridSpec resolve_grid(const Options& o) {
  GridSpec g{{o.x1_min, o.x1_max, o.n1}, {o.x2_min, o.x2_max, o.n2}};
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + path + "': " + ec.message());
  }

  template <typename Writer>
  std::filesystem::path write(const std::string& name, Writer&& writer) {
    const auto path = root_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    writer(os);
    os.flush();
    if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
    written_.push_back(path);
    return path;
  }

  [[nodiscard]] const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::filesystem::path root_;
  std::vector<std::filesystem::path> written_;
};

inline void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

inline std::string metric_text(const Metric& m) {
  switch (m.status) {
    case Metric::Status::Value:
      return io::format_number(m.value);
    case Metric::Status::NotReached:
      return "not_reached";
    case Metric::Status::NotApplicable:
      return "not_applicable";
  }
  return "";
}

inline svg::Series x1_series(const Trajectory& t, std::string label) {
  svg::Series s{std::move(label), {}};
  for (const Sample& p : t.samples) s.points.emplace_back(p.t, p.state.x1);
  return s;
}

inline svg::Series phase_series(const Trajectory& t, std::string label) {
  svg::Series s{std::move(label), {}};
  for (const Sample& p : t.samples) s.points.emplace_back(p.state.x1, p.state.x2);
  return s;
}

inline svg::Series control_series(const Trajectory& t, std::string label) {
  svg::Series s{std::move(label), {}};
  for (const Sample& p : t.samples) s.points.emplace_back(p.t, p.v);
  return s;
}

inline std::string run_label(const ControllerSpec& spec) {
  std::string label = std::string(to_string(spec.law())) + " k=" + io::format_number(spec.k());
  if (spec.saturation().bounded()) label += " S=" + io::format_number(spec.saturation().limit());
  return label;
}

inline void write_trajectory_plots(OutputDir& dir, const std::string& name, const std::vector<const Trajectory*>& trajs,
                                   bool with_control = false) {
  std::vector<svg::Panel> panels(with_control ? 3 : 2);
  panels[0] = {"output", "t", "x1", {}};
  panels[1] = {"phase plane", "x1", "x2", {}};
  if (with_control) panels[2] = {"applied control", "t", "v", {}};
  for (const Trajectory* t : trajs) {
    panels[0].series.push_back(x1_series(*t, run_label(t->controller)));
    panels[1].series.push_back(phase_series(*t, ""));
    if (with_control) panels[2].series.push_back(control_series(*t, ""));
  }
  dir.write(name, [&](std::ostream& os) { svg::write_line_plot(os, panels); });
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_simulate(const Options& o, std::ostream& out) {
  const ControllerSpec spec = resolve_controller(o, Saturation::unbounded());
  const SimulationConfig cfg = resolve_config(o);
  const Trajectory traj = simulate(spec, cfg);
  OutputDir dir(o.out);
  dir.write("simulate.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });
  if (o.format == "svg") write_trajectory_plots(dir, "simulate.svg", {&traj});
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

/// Union of sample times; a run contributes empty cells where it has no sample.
inline void write_aligned_csv(std::ostream& os, const std::vector<std::pair<std::string, const Trajectory*>>& runs) {
  os << 't';
  for (const auto& [name, t] : runs) {
    for (const char* col : {"x1", "x2", "v_raw", "v", "saturated", "V", "Vdot"}) os << ',' << col << '_' << name;
  }
  os << '\n';
  std::vector<std::size_t> cursor(runs.size(), 0);
  for (;;) {
    double t_next = kInf;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& samples = runs[r].second->samples;
      if (cursor[r] < samples.size()) t_next = std::min(t_next, samples[cursor[r]].t);
    }
    if (std::isinf(t_next)) break;
    os << io::format_number(t_next);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& samples = runs[r].second->samples;
      if (cursor[r] < samples.size() && samples[cursor[r]].t == t_next) {
        const Sample& s = samples[cursor[r]++];
        os << ',' << io::format_number(s.state.x1) << ',' << io::format_number(s.state.x2) << ','
           << io::format_number(s.v_raw) << ',' << io::format_number(s.v) << ',' << (s.saturated ? 1 : 0) << ','
           << io::format_number(s.V) << ',' << io::format_number(s.V_dot);
      } else {
        os << ",,,,,,,";
      }
    }
    os << '\n';
  }
}

inline nlohmann::json run_json(const experiments::Run& run, std::optional<TimeWindow> window) {
  nlohmann::json j = io::to_json(run.report);
  j["controller"] = io::to_json(run.trajectory.controller);
  if (window) j["decay_window"] = {window->t_begin, window->t_end};
  j["t_final"] = run.trajectory.back().t;
  return j;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
  const Saturation sat = resolve_saturation(o.s, Saturation::unbounded());
  const double d = resolve_damping(o.d, o.k);
  const ControllerSpec base(Law::NonlinearDamping, o.k, 0.0, sat, o.epsilon_reg, o.damping_cap);
  const SimulationConfig cfg = resolve_config(o);
  const experiments::Comparison c = experiments::compare(base, d, cfg);

  OutputDir dir(o.out);
  dir.write("compare.csv", [&](std::ostream& os) {
    for (const auto& [key, value] : io::parameter_lines(c.linear.trajectory.controller, cfg)) {
      if (key != "law") os << "# " << key << '=' << value << '\n';
    }
    os << "# laws=linear,nonlinear\n";
    write_aligned_csv(os, {{"linear", &c.linear.trajectory}, {"nonlinear", &c.nonlinear.trajectory}});
  });
  dir.write("compare_report.json", [&](std::ostream& os) {
    write_json(os, {{"scenario", "compare"},
                    {"k", o.k},
                    {"d", d},
                    {"linear", run_json(c.linear, experiments::kLinearDecayWindow)},
                    {"nonlinear", run_json(c.nonlinear, experiments::kNonlinearDecayWindow)}});
  });
  if (o.format == "svg") {
    write_trajectory_plots(dir, "compare.svg", {&c.linear.trajectory, &c.nonlinear.trajectory});
  }
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

inline int cmd_sweep_k(const Options& o, std::ostream& out) {
  const ControllerSpec base = resolve_controller(o, Saturation::unbounded());
  const SimulationConfig cfg = resolve_config(o);
  const std::vector<double> gains = o.k_list.empty() ? experiments::kDefaultSweepGains : parse_list(o.k_list);
  for (double k : gains) {
    if (!(k > 0.0)) throw UsageError("--k-list entries must be > 0");
  }
  const auto runs = experiments::sweep_k(base, gains, cfg);

  OutputDir dir(o.out);
  for (const auto& r : runs) {
    dir.write("sweep_k" + io::format_number(r.trajectory.controller.k()) + ".csv",
              [&](std::ostream& os) { io::write_trajectory_csv(os, r.trajectory); });
  }
  dir.write("sweep_k_summary.csv", [&](std::ostream& os) {
    os << "k,settling_time,overshoot_count,attractor_slope_error,final_V,t_final\n";
    for (const auto& r : runs) {
      os << io::format_number(r.trajectory.controller.k()) << ',' << metric_text(r.report.settling_time) << ','
         << r.report.overshoot_count << ',' << metric_text(r.report.attractor_slope_error) << ','
         << io::format_number(r.report.final_V) << ',' << io::format_number(r.trajectory.back().t) << '\n';
    }
  });
  if (o.format == "svg") {
    std::vector<const Trajectory*> ts;
    for (const auto& r : runs) ts.push_back(&r.trajectory);
    write_trajectory_plots(dir, "sweep_k.svg", ts);
  }
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

inline int cmd_saturation_study(const Options& o, std::ostream& out) {
  const Saturation limit = resolve_saturation(o.s, Saturation::at(experiments::kDefaultSaturationLimit));
  const ControllerSpec base = resolve_controller(o, limit);
  const SimulationConfig cfg = resolve_config(o);
  const std::vector<double> gains = o.k_list.empty() ? experiments::kDefaultSaturationGains : parse_list(o.k_list);
  for (double k : gains) {
    if (!(k > 0.0)) throw UsageError("--k-list entries must be > 0");
  }
  const auto runs = experiments::saturation_study(base, gains, limit, cfg);

  auto file_name = [](const ControllerSpec& s) {
    return "sat_k" + io::format_number(s.k()) + "_S" + io::format_number(s.saturation().limit()) + ".csv";
  };
  OutputDir dir(o.out);
  for (const auto& r : runs) {
    dir.write(file_name(r.run.trajectory.controller),
              [&](std::ostream& os) { io::write_trajectory_csv(os, r.run.trajectory); });
  }
  dir.write("saturation_summary.csv", [&](std::ostream& os) {
    os << "k,S,overshoot_count,saturation_exit_time,episodes,final_V,t_final\n";
    for (const auto& r : runs) {
      const ControllerSpec& s = r.run.trajectory.controller;
      os << io::format_number(s.k()) << ',' << io::format_number(s.saturation().limit()) << ','
         << r.run.report.overshoot_count << ',' << metric_text(r.run.report.saturation_exit_time) << ','
         << r.episodes.size() << ',' << io::format_number(r.run.report.final_V) << ','
         << io::format_number(r.run.trajectory.back().t) << '\n';
    }
  });
  dir.write("saturation_episodes.csv", [&](std::ostream& os) {
    os << "k,S,episode,sign,t_start,X1,X2,t_exit,exit_bound,bound_time,within_bound\n";
    for (const auto& r : runs) {
      const ControllerSpec& s = r.run.trajectory.controller;
      for (std::size_t i = 0; i < r.episodes.size(); ++i) {
        const SaturationEpisode& e = r.episodes[i];
        const double bound_time = e.t_start + e.exit_bound;
        os << io::format_number(s.k()) << ',' << io::format_number(s.saturation().limit()) << ',' << i << ','
           << e.sign << ',' << io::format_number(e.t_start) << ',' << io::format_number(e.start.x1) << ','
           << io::format_number(e.start.x2) << ',' << metric_text(e.t_exit) << ',' << io::format_number(e.exit_bound)
           << ',' << io::format_number(bound_time) << ','
           << (e.t_exit.has_value() ? (*e.t_exit <= bound_time + 1e-9 ? "1" : "0") : "") << '\n';
      }
    }
  });
  if (o.format == "svg") {
    std::vector<const Trajectory*> ts;
    for (const auto& r : runs) ts.push_back(&r.run.trajectory);
    write_trajectory_plots(dir, "saturation_study.svg", ts, true);
  }
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

inline int cmd_portrait(const Options& o, std::ostream& out) {
  const ControllerSpec spec = resolve_controller(o, Saturation::unbounded());
  const SimulationConfig cfg = resolve_config(o);
  experiments::PortraitLayout layout;
  layout.radii = parse_list(o.radii);
  layout.rays = o.rays;
  if (layout.rays == 0) throw UsageError("--rays must be > 0");
  const auto initial = experiments::ring_initial_states(layout);
  const auto runs = experiments::portrait(spec, initial, cfg);

  OutputDir dir(o.out);
  dir.write("portrait.csv", [&](std::ostream& os) {
    for (const auto& [key, value] : io::parameter_lines(spec, cfg)) {
      if (key != "x1" && key != "x2") os << "# " << key << '=' << value << '\n';
    }
    os << "traj," << io::kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
      os << "# traj=" << i << " x1_0=" << io::format_number(initial[i].x1)
         << " x2_0=" << io::format_number(initial[i].x2) << '\n';
      for (const Sample& s : runs[i].trajectory.samples) {
        os << i << ',';
        io::write_sample_row(os, s);
      }
    }
  });
  dir.write("portrait_summary.csv", [&](std::ostream& os) {
    os << "traj,x1_0,x2_0,quadrant,overshoot_count,t_final,final_V,stopped_early\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Trajectory& t = runs[i].trajectory;
      os << i << ',' << io::format_number(initial[i].x1) << ',' << io::format_number(initial[i].x2) << ','
         << experiments::quadrant(initial[i]) << ',' << runs[i].report.overshoot_count << ','
         << io::format_number(t.back().t) << ',' << io::format_number(t.back().V) << ','
         << (t.back().t < cfg.t_end ? 1 : 0) << '\n';
    }
  });
  if (o.format == "svg") {
    std::vector<svg::Series> series;
    for (const auto& r : runs) series.push_back(phase_series(r.trajectory, ""));
    dir.write("portrait.svg",
              [&](std::ostream& os) { svg::write_line_plot(os, {{"phase portrait", "x1", "x2", series}}); });
  }
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

inline int cmd_passivity_map(const Options& o, std::ostream& out) {
  const PassivityMap map = passivity_map(resolve_grid(o));
  OutputDir dir(o.out);
  dir.write("passivity_map.csv", [&](std::ostream& os) { io::write_passivity_csv(os, map); });
  if (o.format == "svg") dir.write("passivity_map.svg", [&](std::ostream& os) { svg::write_passivity_map(os, map); });
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

inline int cmd_lyapunov_surface(const Options& o, std::ostream& out) {
  if (!(o.k > 0.0)) throw DomainError("k must be > 0");
  if (!(o.alpha > 0.0)) throw DomainError("alpha must be > 0");
  const FiniteTimeRegion region = finite_time_region(resolve_grid(o), o.k, o.alpha, o.epsilon_reg);
  OutputDir dir(o.out);
  dir.write("lyapunov_surface.csv", [&](std::ostream& os) {
    os << "# k=" << io::format_number(o.k) << "\n# alpha=" << io::format_number(o.alpha) << '\n';
    io::write_lyapunov_surface_csv(os, region);
  });
  if (o.format == "svg") {
    dir.write("lyapunov_surface.svg", [&](std::ostream& os) {
      svg::write_region_mask(os, region.mask, "finite-time condition holds (red)");
    });
  }
  for (const auto& p : dir.written()) out << "wrote " << p.string() << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// Parsing and dispatch
// ---------------------------------------------------------------------------

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

/// Inserts config-file entries right after the subcommand name so that
/// explicit flags, which come later, take precedence.
inline std::vector<std::string> expand_config(std::vector<std::string> args, const std::set<std::string>& commands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto sub = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return commands.count(a) > 0; });
  if (sub == args.end()) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config") continue;
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  args.insert(sub + 1, injected.begin(), injected.end());
  return args;
}

inline void add_common_options(CLI::App* app, Options& o) {
  app->add_option("--law", o.law, "Damping law")->check(CLI::IsMember({"none", "linear", "nonlinear"}));
  app->add_option("--k", o.k, "Proportional gain k > 0");
  app->add_option("--d", o.d, "Linear damping coefficient, or 'auto' for 2*sqrt(k)");
  app->add_option("--x1", o.x1, "Initial output");
  app->add_option("--x2", o.x2, "Initial output derivative");
  app->add_option("--s", o.s, "Control amplitude limit S, or 'inf'");
  app->add_option("--t-end", o.t_end, "Simulation horizon");
  app->add_option("--integrator", o.integrator, "Integrator")->check(CLI::IsMember({"rk45", "rk4"}));
  app->add_option("--dt", o.dt, "Fixed step (rk4)");
  app->add_option("--rel-tol", o.rel_tol, "Relative tolerance (rk45)");
  app->add_option("--abs-tol", o.abs_tol, "Absolute tolerance (rk45)");
  app->add_option("--min-step", o.min_step, "Smallest adaptive step before giving up");
  app->add_option("--v-stop", o.v_stop, "Stop once V drops below this (0 disables)");
  app->add_option("--sample-interval", o.sample_interval, "Output sampling period");
  app->add_option("--epsilon-reg", o.epsilon_reg, "Floor on |x1| in the nonlinear damping term");
  app->add_option("--damping-cap", o.damping_cap, "Cap on the nonlinear damping magnitude");
  app->add_option("--alpha", o.alpha, "Finite-time convergence rate constant");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "svg"}));
  app->add_option("--config", o.config, "Flat key = value file; flags override it");
}

inline void add_grid_options(CLI::App* app, Options& o) {
  app->add_option("--x1-min", o.x1_min);
  app->add_option("--x1-max", o.x1_max);
  app->add_option("--x2-min", o.x2_min);
  app->add_option("--x2-max", o.x2_max);
  app->add_option("--n1", o.n1, "Cells along x1");
  app->add_option("--n2", o.n2, "Cells along x2");
}

inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Double-integrator damping control experiments", "nldamp");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  using Command = std::function<int(const Options&, std::ostream&)>;
  std::map<CLI::App*, Command> commands;
  auto add = [&](const std::string& name, const std::string& description, Command cmd) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_common_options(sub, o);
    commands[sub] = std::move(cmd);
    return sub;
  };
  add("simulate", "Simulate one controller", cmd_simulate);
  add("compare", "Linear (critical) vs nonlinear damping", cmd_compare);
  add("sweep-k", "Nonlinear damping over several gains", cmd_sweep_k)
      ->add_option("--k-list", o.k_list, "Comma-separated gains (default 10,100,1000)");
  add("saturation-study", "Saturated control over several gains", cmd_saturation_study)
      ->add_option("--k-list", o.k_list, "Comma-separated gains (default 50,100,150,200)");
  CLI::App* portrait = add("portrait", "Phase portrait from rings of initial states", cmd_portrait);
  portrait->add_option("--radii", o.radii, "Comma-separated ring radii");
  portrait->add_option("--rays", o.rays, "Initial states per ring");
  add_grid_options(add("passivity-map", "Passivity classification over a grid", cmd_passivity_map), o);
  add_grid_options(add("lyapunov-surface", "Finite-time convergence surfaces over a grid", cmd_lyapunov_surface), o);

  std::set<std::string> names;
  for (const auto& [sub, cmd] : commands) names.insert(sub->get_name());

  try {
    std::vector<std::string> args = expand_config(raw_args, names);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  for (const auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    try {
      return cmd(o, out);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << '\n';
      return kUsageError;
    } catch (const DomainError& e) {
      err << "usage error: " << e.what() << '\n';
      return kUsageError;
    } catch (const IntegrationError& e) {
      err << "integration failed at t=" << io::format_number(e.t()) << ": " << e.what() << '\n';
      return kRuntimeFailure;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kRuntimeFailure;
    }
  }
  return kUsageError;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace nldamp::cli
