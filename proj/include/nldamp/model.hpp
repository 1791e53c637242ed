// Domain types for double-integrator set-point control with linear or
// nonlinear (velocity-squared over distance) damping feedback.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nldamp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultEpsilonReg = 1e-12;
inline constexpr double kDefaultDampingCap = 1e9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Precondition or argument violation (bad gain, empty trajectory, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// State of the plant: controlled output x1 and its derivative x2.
struct State {
  double x1 = 0.0;
  double x2 = 0.0;

  [[nodiscard]] bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
  [[nodiscard]] bool is_origin() const { return x1 == 0.0 && x2 == 0.0; }

  friend State operator-(const State& s) { return {-s.x1, -s.x2}; }
  friend bool operator==(const State&, const State&) = default;
};

inline std::string to_string(const State& s) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << s.x1 << ", " << s.x2 << ")";
  return os.str();
}

/// Numerical integration failure; carries the time and state where it happened.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, State state)
      : std::runtime_error(what + " at t=" + std::to_string(t) + " state=" + to_string(state)),
        t_(t),
        state_(state) {}

  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] const State& state() const { return state_; }

 private:
  double t_;
  State state_;
};

/// A Runge-Kutta stage or step produced a non-finite value.
class IntegrationBlowup : public IntegrationError {
 public:
  IntegrationBlowup(double t, State state) : IntegrationError("integration blowup", t, state) {}
};

/// Adaptive step size fell below the configured floor.
class SingularityStall : public IntegrationError {
 public:
  SingularityStall(double t, State state, double h)
      : IntegrationError("step size underflow (h=" + std::to_string(h) + ")", t, state) {}
};

// ---------------------------------------------------------------------------
// Controller description
// ---------------------------------------------------------------------------

enum class Law { None, LinearDamping, NonlinearDamping };

inline std::string_view to_string(Law law) {
  switch (law) {
    case Law::None:
      return "none";
    case Law::LinearDamping:
      return "linear";
    case Law::NonlinearDamping:
      return "nonlinear";
  }
  return "unknown";
}

inline Law parse_law(std::string_view s) {
  if (s == "none") return Law::None;
  if (s == "linear") return Law::LinearDamping;
  if (s == "nonlinear") return Law::NonlinearDamping;
  throw DomainError("unknown control law '" + std::string(s) + "'");
}

/// Amplitude limit S on the applied control, or unbounded.
class Saturation {
 public:
  static Saturation unbounded() { return Saturation(kInf); }
  static Saturation at(double limit) {
    if (!(limit > 0.0)) throw DomainError("saturation limit must be > 0");
    return Saturation(limit);
  }

  [[nodiscard]] bool bounded() const { return std::isfinite(limit_); }
  /// +inf when unbounded.
  [[nodiscard]] double limit() const { return limit_; }

  friend bool operator==(const Saturation&, const Saturation&) = default;

 private:
  explicit Saturation(double limit) : limit_(limit) {}
  double limit_;
};

/// Which damping law is active, with its gains and numerical guards.
/// Validated at construction; immutable afterwards.
class ControllerSpec {
 public:
  ControllerSpec(Law law, double k, double d = 0.0, Saturation saturation = Saturation::unbounded(),
                 double epsilon_reg = kDefaultEpsilonReg, double damping_cap = kDefaultDampingCap)
      : law_(law), k_(k), d_(d), saturation_(saturation), epsilon_reg_(epsilon_reg), damping_cap_(damping_cap) {
    if (!(k_ > 0.0) || !std::isfinite(k_)) throw DomainError("gain k must be finite and > 0");
    if (!(d_ >= 0.0) || !std::isfinite(d_)) throw DomainError("damping d must be finite and >= 0");
    if (!(epsilon_reg_ > 0.0)) throw DomainError("epsilon_reg must be > 0");
    if (!(damping_cap_ > 0.0)) throw DomainError("damping_cap must be > 0");
  }

  static ControllerSpec none(double k) { return {Law::None, k}; }
  static ControllerSpec linear(double k, double d) { return {Law::LinearDamping, k, d}; }
  static ControllerSpec nonlinear(double k) { return {Law::NonlinearDamping, k}; }

  [[nodiscard]] ControllerSpec with_saturation(Saturation s) const {
    return {law_, k_, d_, s, epsilon_reg_, damping_cap_};
  }
  [[nodiscard]] ControllerSpec with_epsilon_reg(double eps) const {
    return {law_, k_, d_, saturation_, eps, damping_cap_};
  }
  [[nodiscard]] ControllerSpec with_damping_cap(double cap) const {
    return {law_, k_, d_, saturation_, epsilon_reg_, cap};
  }

  [[nodiscard]] Law law() const { return law_; }
  [[nodiscard]] double k() const { return k_; }
  [[nodiscard]] double d() const { return d_; }
  [[nodiscard]] const Saturation& saturation() const { return saturation_; }
  [[nodiscard]] double epsilon_reg() const { return epsilon_reg_; }
  [[nodiscard]] double damping_cap() const { return damping_cap_; }

  friend bool operator==(const ControllerSpec&, const ControllerSpec&) = default;

 private:
  Law law_;
  double k_;
  double d_;
  Saturation saturation_;
  double epsilon_reg_;
  double damping_cap_;
};

// ---------------------------------------------------------------------------
// Simulation setup and output
// ---------------------------------------------------------------------------

enum class IntegratorKind { AdaptiveRK45, FixedRK4 };

inline std::string_view to_string(IntegratorKind kind) {
  return kind == IntegratorKind::AdaptiveRK45 ? "rk45" : "rk4";
}

inline IntegratorKind parse_integrator(std::string_view s) {
  if (s == "rk45") return IntegratorKind::AdaptiveRK45;
  if (s == "rk4") return IntegratorKind::FixedRK4;
  throw DomainError("unknown integrator '" + std::string(s) + "'");
}

struct SimulationConfig {
  State initial{1.0, 0.0};
  double t_end = 2.0;
  IntegratorKind integrator = IntegratorKind::AdaptiveRK45;
  double dt = 1e-5;  // FixedRK4 step
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double min_step = 1e-13;
  double v_stop = 1e-20;  // stop once V < v_stop; 0 disables
  double sample_interval = 1e-3;

  /// Throws DomainError when an invariant does not hold.
  void validate() const {
    if (!initial.finite()) throw DomainError("initial state must be finite");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be finite and > 0");
    if (!(dt > 0.0) || !(dt < t_end)) throw DomainError("dt must satisfy 0 < dt < t_end");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be > 0");
    if (!(min_step > 0.0) || min_step > dt) throw DomainError("min_step must satisfy 0 < min_step <= dt");
    if (!(v_stop >= 0.0)) throw DomainError("v_stop must be >= 0");
    if (!(sample_interval > 0.0) || sample_interval > t_end) {
      throw DomainError("sample_interval must satisfy 0 < sample_interval <= t_end");
    }
  }

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct Sample {
  double t = 0.0;
  State state;
  double v_raw = 0.0;  // unclamped control
  double v = 0.0;      // applied control
  bool saturated = false;
  double V = 0.0;      // Lyapunov value
  double V_dot = 0.0;  // Lyapunov rate along the applied closed loop

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Trajectory {
  ControllerSpec controller;
  SimulationConfig config;
  std::vector<Sample> samples;

  [[nodiscard]] const Sample& front() const { return samples.front(); }
  [[nodiscard]] const Sample& back() const { return samples.back(); }
  [[nodiscard]] bool empty() const { return samples.empty(); }
};

// ---------------------------------------------------------------------------
// Analysis results
// ---------------------------------------------------------------------------

/// A scalar metric that may be missing for a stated reason.
struct Metric {
  enum class Status { Value, NotReached, NotApplicable };
  Status status = Status::NotApplicable;
  double value = 0.0;

  static Metric of(double v) { return {Status::Value, v}; }
  static Metric not_reached() { return {Status::NotReached, 0.0}; }
  static Metric not_applicable() { return {Status::NotApplicable, 0.0}; }

  [[nodiscard]] bool has_value() const { return status == Status::Value; }
  explicit operator bool() const { return has_value(); }
  double operator*() const { return value; }
};

struct PolynomialFit {
  std::vector<double> coefficients;  // ascending powers of t
  double r_squared = 0.0;
};

/// Least-squares fit of log10|x1| against t.
struct DecayFit {
  enum class Model { Linear, Quadratic };
  Model model = Model::Linear;
  std::vector<double> coefficients;  // of the selected model, ascending powers
  double r_squared = 0.0;            // of the selected model
  PolynomialFit linear;
  PolynomialFit quadratic;

  [[nodiscard]] double slope() const { return linear.coefficients.at(1); }
};

inline std::string_view to_string(DecayFit::Model m) {
  return m == DecayFit::Model::Linear ? "Linear" : "Quadratic";
}

struct AnalysisReport {
  int overshoot_count = 0;
  Metric settling_time;
  double final_V = 0.0;
  std::optional<DecayFit> decay_fit;  // empty when the window is unusable
  Metric attractor_slope_error;
  Metric saturation_exit_time;
};

}  // namespace nldamp
