// Text serialization: trajectory CSV (with resolved parameters as `#`
// comments), grid CSVs, and JSON analysis reports.
#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "nldamp/analysis.hpp"
#include "nldamp/model.hpp"

namespace nldamp::io {

inline constexpr std::string_view kTrajectoryHeader = "t,x1,x2,v_raw,v,saturated,V,Vdot";

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DomainError("not a number: '" + std::string(s) + "'");
  }
  return x;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectory CSV
// ---------------------------------------------------------------------------

/// Resolved parameters in write order.
inline std::vector<std::pair<std::string, std::string>> parameter_lines(const ControllerSpec& spec,
                                                                        const SimulationConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> p;
  p.emplace_back("law", std::string(to_string(spec.law())));
  p.emplace_back("k", format_number(spec.k()));
  if (spec.law() == Law::LinearDamping) p.emplace_back("d", format_number(spec.d()));
  p.emplace_back("s", format_number(spec.saturation().limit()));
  p.emplace_back("epsilon_reg", format_number(spec.epsilon_reg()));
  p.emplace_back("damping_cap", format_number(spec.damping_cap()));
  p.emplace_back("x1", format_number(cfg.initial.x1));
  p.emplace_back("x2", format_number(cfg.initial.x2));
  p.emplace_back("t_end", format_number(cfg.t_end));
  p.emplace_back("integrator", std::string(to_string(cfg.integrator)));
  p.emplace_back("dt", format_number(cfg.dt));
  p.emplace_back("rel_tol", format_number(cfg.rel_tol));
  p.emplace_back("abs_tol", format_number(cfg.abs_tol));
  p.emplace_back("min_step", format_number(cfg.min_step));
  p.emplace_back("v_stop", format_number(cfg.v_stop));
  p.emplace_back("sample_interval", format_number(cfg.sample_interval));
  return p;
}

inline void write_sample_row(std::ostream& os, const Sample& s) {
  os << format_number(s.t) << ',' << format_number(s.state.x1) << ',' << format_number(s.state.x2) << ','
     << format_number(s.v_raw) << ',' << format_number(s.v) << ',' << (s.saturated ? 1 : 0) << ','
     << format_number(s.V) << ',' << format_number(s.V_dot) << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  for (const auto& [key, value] : parameter_lines(traj.controller, traj.config)) os << "# " << key << '=' << value << '\n';
  os << kTrajectoryHeader << '\n';
  for (const Sample& s : traj.samples) write_sample_row(os, s);
}

inline Sample parse_sample_row(std::string_view line) {
  const auto f = split(line);
  if (f.size() != 8) throw DomainError("trajectory row must have 8 fields: '" + std::string(line) + "'");
  Sample s;
  s.t = parse_number(f[0]);
  s.state = {parse_number(f[1]), parse_number(f[2])};
  s.v_raw = parse_number(f[3]);
  s.v = parse_number(f[4]);
  s.saturated = parse_number(f[5]) != 0.0;
  s.V = parse_number(f[6]);
  s.V_dot = parse_number(f[7]);
  return s;
}

/// Inverse of write_trajectory_csv. Missing parameter comments fall back to
/// defaults.
inline Trajectory read_trajectory_csv(std::istream& is) {
  std::map<std::string, std::string, std::less<>> params;
  std::vector<Sample> samples;
  bool header_seen = false;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = std::string_view(line).substr(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      std::string_view key = body.substr(0, eq);
      while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
      params[std::string(key)] = std::string(body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != kTrajectoryHeader) throw DomainError("unexpected trajectory header: '" + line + "'");
      header_seen = true;
      continue;
    }
    samples.push_back(parse_sample_row(line));
  }
  if (!header_seen) throw DomainError("trajectory CSV has no header");

  auto num = [&](std::string_view key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : parse_number(it->second);
  };
  const auto law_it = params.find("law");
  const Law law = law_it == params.end() ? Law::NonlinearDamping : parse_law(law_it->second);
  const double S = num("s", kInf);
  const ControllerSpec spec(law, num("k", 100.0), num("d", 0.0),
                            std::isinf(S) ? Saturation::unbounded() : Saturation::at(S),
                            num("epsilon_reg", kDefaultEpsilonReg), num("damping_cap", kDefaultDampingCap));
  SimulationConfig cfg;
  cfg.initial = {num("x1", cfg.initial.x1), num("x2", cfg.initial.x2)};
  cfg.t_end = num("t_end", cfg.t_end);
  if (const auto it = params.find("integrator"); it != params.end()) cfg.integrator = parse_integrator(it->second);
  cfg.dt = num("dt", cfg.dt);
  cfg.rel_tol = num("rel_tol", cfg.rel_tol);
  cfg.abs_tol = num("abs_tol", cfg.abs_tol);
  cfg.min_step = num("min_step", cfg.min_step);
  cfg.v_stop = num("v_stop", cfg.v_stop);
  cfg.sample_interval = num("sample_interval", cfg.sample_interval);
  return {spec, cfg, std::move(samples)};
}

// ---------------------------------------------------------------------------
// Grid CSVs
// ---------------------------------------------------------------------------

inline void write_passivity_csv(std::ostream& os, const PassivityMap& map) {
  os << "x1,x2,class\n";
  for (std::size_t i1 = 0; i1 < map.n1(); ++i1) {
    for (std::size_t i2 = 0; i2 < map.n2(); ++i2) {
      const State c = map.spec().cell_center(i1, i2);
      os << format_number(c.x1) << ',' << format_number(c.x2) << ',' << to_string(map.at(i1, i2)) << '\n';
    }
  }
}

inline void write_lyapunov_surface_csv(std::ostream& os, const FiniteTimeRegion& region) {
  os << "x1,x2,Vdot_magnitude,alpha_sqrtV,condition_holds\n";
  const GridSpec& g = region.mask.spec();
  for (std::size_t i1 = 0; i1 < g.x1.n; ++i1) {
    for (std::size_t i2 = 0; i2 < g.x2.n; ++i2) {
      const State c = g.cell_center(i1, i2);
      os << format_number(c.x1) << ',' << format_number(c.x2) << ',' << format_number(region.vdot_magnitude.at(i1, i2))
         << ',' << format_number(region.alpha_sqrt_v.at(i1, i2)) << ',' << (region.mask.at(i1, i2) ? 1 : 0) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const Metric& m) {
  switch (m.status) {
    case Metric::Status::Value:
      return m.value;
    case Metric::Status::NotReached:
      return "not_reached";
    case Metric::Status::NotApplicable:
      return "not_applicable";
  }
  return nullptr;
}

inline nlohmann::json to_json(const PolynomialFit& f) {
  return {{"coefficients", f.coefficients}, {"r_squared", f.r_squared}};
}

inline nlohmann::json to_json(const DecayFit& f) {
  return {{"model", to_string(f.model)},
          {"coefficients", f.coefficients},
          {"r_squared", f.r_squared},
          {"linear", to_json(f.linear)},
          {"quadratic", to_json(f.quadratic)}};
}

inline nlohmann::json to_json(const AnalysisReport& r) {
  return {{"overshoot_count", r.overshoot_count},
          {"settling_time", to_json(r.settling_time)},
          {"final_V", r.final_V},
          {"decay_fit", r.decay_fit ? to_json(*r.decay_fit) : nlohmann::json("not_applicable")},
          {"attractor_slope_error", to_json(r.attractor_slope_error)},
          {"saturation_exit_time", to_json(r.saturation_exit_time)}};
}

inline nlohmann::json to_json(const ControllerSpec& spec) {
  nlohmann::json j = {{"law", to_string(spec.law())}, {"k", spec.k()}};
  if (spec.law() == Law::LinearDamping) j["d"] = spec.d();
  j["s"] = spec.saturation().bounded() ? nlohmann::json(spec.saturation().limit()) : nlohmann::json("inf");
  return j;
}

}  // namespace nldamp::io
