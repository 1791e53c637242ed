#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nldamp/analysis.hpp"
#include "nldamp/experiments.hpp"
#include "nldamp/integrator.hpp"
#include "oracles.hpp"

using namespace nldamp;

namespace {

Sample at(double t, double x1, double x2 = 0.0) {
  Sample s{};
  s.t = t;
  s.state = {x1, x2};
  return s;
}

Trajectory synthetic(std::vector<Sample> samples, double k = 100.0) {
  return {ControllerSpec::nonlinear(k), SimulationConfig{}, std::move(samples)};
}

GridSpec square(double lo, double hi, std::size_t n) { return {{lo, hi, n}, {lo, hi, n}}; }

}  // namespace

// --- Lyapunov ---------------------------------------------------------------

TEST(Lyapunov, Examples) {
  EXPECT_EQ(lyapunov({1.0, 0.0}, 100.0), 50.0);
  EXPECT_EQ(lyapunov({0.0, 0.0}, 7.0), 0.0);
  EXPECT_EQ(lyapunov({1.0, 2.0}, 4.0), 4.0);
}

TEST(LyapunovRate, Examples) {
  EXPECT_EQ(lyapunov_rate({1.0, 0.0}), 0.0);
  EXPECT_FALSE(std::signbit(lyapunov_rate({1.0, 0.0})));
  EXPECT_DOUBLE_EQ(lyapunov_rate({1.0, 2.0}), -8.0);
  EXPECT_DOUBLE_EQ(lyapunov_rate({-0.5, -1.0}), -2.0);
  EXPECT_TRUE(std::isfinite(lyapunov_rate({0.0, 1.0})));
}

TEST(LyapunovRate, EqualsChainRuleAlongClosedLoop) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> mag(1e-6, 2.0);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  std::bernoulli_distribution flip(0.5);
  for (double k : {1.0, 100.0, 1000.0}) {
    const auto spec = ControllerSpec::nonlinear(k);
    for (int i = 0; i < 2000; ++i) {
      const State s{flip(rng) ? mag(rng) : -mag(rng), vel(rng)};
      const Derivative d = derivative(s, spec);
      const double chain = k * s.x1 * d.dx1 + s.x2 * d.dx2;
      const double rate = lyapunov_rate(s);
      EXPECT_NEAR(rate, chain, 1e-9 * std::max(std::abs(rate), k * std::abs(s.x1 * s.x2)));
    }
  }
}

TEST(LyapunovRate, ClosedLoopVariants) {
  const State s{0.5, 2.0};
  const auto lin = ControllerSpec::linear(100.0, 20.0);
  EXPECT_DOUBLE_EQ(closed_loop_lyapunov_rate(s, lin, control(s, lin)), -20.0 * 4.0);
  const auto none = ControllerSpec::none(100.0);
  EXPECT_EQ(closed_loop_lyapunov_rate(s, none, control(s, none)), 0.0);
  const auto sat = ControllerSpec::nonlinear(100.0).with_saturation(Saturation::at(25.0));
  const auto u = control(s, sat);
  ASSERT_TRUE(u.saturated);
  EXPECT_DOUBLE_EQ(closed_loop_lyapunov_rate(s, sat, u), 2.0 * (-25.0 + 50.0));
}

// --- Passivity --------------------------------------------------------------

TEST(Passivity, Examples) {
  EXPECT_EQ(classify_passivity({1.0, -2.0}), PassivityClass::Passive);
  EXPECT_EQ(classify_passivity({1.0, 0.5}), PassivityClass::NonPassive);
  EXPECT_EQ(classify_passivity({1.0, 1.0}), PassivityClass::Boundary);
  EXPECT_EQ(classify_passivity({-1.0, 2.0}), PassivityClass::Passive);
  EXPECT_EQ(classify_passivity({-1.0, -0.5}), PassivityClass::NonPassive);
  EXPECT_THROW(classify_passivity({0.0, 0.0}), DomainError);
}

TEST(Passivity, AxisConventions) {
  EXPECT_EQ(classify_passivity({0.0, 1.0}), PassivityClass::Passive);
  EXPECT_EQ(classify_passivity({0.0, -3.0}), PassivityClass::Passive);
  EXPECT_EQ(classify_passivity({2.0, 0.0}), PassivityClass::Boundary);
  EXPECT_EQ(classify_passivity({-2.0, 0.0}), PassivityClass::Boundary);
}

TEST(Passivity, AgreesWithPowerBalanceOnGrid) {
  const GridSpec grid = square(-2.0, 2.0, 100);
  std::size_t compared = 0;
  for (std::size_t i1 = 0; i1 < 100; ++i1) {
    for (std::size_t i2 = 0; i2 < 100; ++i2) {
      const State c = grid.cell_center(i1, i2);
      ASSERT_NE(c.x1, 0.0);
      ASSERT_NE(c.x2, 0.0);
      const int expected = oracle::power_balance(c.x1, c.x2);
      const PassivityClass want = expected > 0   ? PassivityClass::Passive
                                  : expected < 0 ? PassivityClass::NonPassive
                                                 : PassivityClass::Boundary;
      ASSERT_EQ(classify_passivity(c), want) << c.x1 << "," << c.x2;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 10000u);
}

TEST(Passivity, SecondAndFourthQuadrantsArePassive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(1e-9, 1e3);
  for (int i = 0; i < 5000; ++i) {
    EXPECT_EQ(classify_passivity({-mag(rng), mag(rng)}), PassivityClass::Passive);
    EXPECT_EQ(classify_passivity({mag(rng), -mag(rng)}), PassivityClass::Passive);
  }
}

TEST(PassivityMap, QuadrantGrids) {
  const auto q2 = passivity_map({{-2.0, -0.01, 40}, {0.01, 2.0, 40}});
  EXPECT_EQ(q2.count(PassivityClass::Passive), q2.size());

  // Quadrant I strictly below the diagonal.
  const auto below = passivity_map({{1.0, 2.0, 30}, {0.0, 0.9, 30}});
  EXPECT_EQ(below.count(PassivityClass::NonPassive), below.size());
}

TEST(PassivityMap, SymmetricUnderNegation) {
  for (std::size_t n : {100u, 201u}) {
    const auto map = passivity_map(square(-2.0, 2.0, n));
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        ASSERT_EQ(map.at(i1, i2), map.at(n - 1 - i1, n - 1 - i2));
      }
    }
  }
}

TEST(PassivityMap, OriginCellIsBoundary) {
  const auto map = passivity_map(square(-2.0, 2.0, 201));
  EXPECT_EQ(map.at(100, 100), PassivityClass::Boundary);
  EXPECT_EQ(map.at(100, 150), PassivityClass::Passive);
  EXPECT_EQ(map.n1(), 201u);
  EXPECT_EQ(map.n2(), 201u);
}

TEST(Grid, CentersAreAntisymmetricAndCoverRange) {
  const Axis a{-2.0, 2.0, 7};
  for (std::size_t i = 0; i < a.n; ++i) EXPECT_EQ(a.center(i), -a.center(a.n - 1 - i));
  EXPECT_EQ(a.edge(0), -2.0);
  EXPECT_EQ(a.edge(a.n), 2.0);
  EXPECT_EQ(a.center(3), 0.0);
  EXPECT_THROW(GridField<int>(GridSpec{{1.0, 1.0, 3}, {0.0, 1.0, 3}}), DomainError);
  EXPECT_THROW(GridField<int>(GridSpec{{0.0, 1.0, 0}, {0.0, 1.0, 3}}), DomainError);
}

// --- Convergence ------------------------------------------------------------

TEST(AttractorSlope, Examples) {
  EXPECT_EQ(attractor_slope(100.0), -10.0);
  EXPECT_EQ(attractor_slope(1.0), -1.0);
  EXPECT_THROW(attractor_slope(0.0), DomainError);
}

TEST(FiniteTime, Examples) {
  EXPECT_TRUE(finite_time_condition({0.01, 1.0}, 100.0, 1.0));
  EXPECT_FALSE(finite_time_condition({1.0, 0.1}, 100.0, 1.0));
  for (double k : {1.0, 100.0}) {
    for (double alpha : {0.1, 1.0, 10.0}) EXPECT_FALSE(finite_time_condition({1.0, 0.0}, k, alpha));
  }
  EXPECT_FALSE(finite_time_condition({0.0, 0.0}, 100.0, 1.0));
  EXPECT_THROW(finite_time_condition({1.0, 1.0}, 100.0, 0.0), DomainError);
}

TEST(FiniteTime, EquivalentToRateInequality) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> log_alpha(-2.0, 2.0);
  int holds = 0;
  for (int i = 0; i < 20000; ++i) {
    const State s{coord(rng), coord(rng)};
    const double alpha = std::pow(10.0, log_alpha(rng));
    const bool direct = lyapunov_rate(s) + alpha * std::sqrt(lyapunov(s, 100.0)) <= 0.0;
    ASSERT_EQ(finite_time_condition(s, 100.0, alpha), direct) << s.x1 << "," << s.x2 << " alpha=" << alpha;
    holds += direct ? 1 : 0;
  }
  EXPECT_GT(holds, 0);
  EXPECT_LT(holds, 20000);
}

TEST(FiniteTimeRegion, ShapeAndSymmetry) {
  const std::size_t n = 201;
  const auto region = finite_time_region(square(-2.0, 2.0, n), 100.0, 1.0);
  EXPECT_GT(region.mask.count(true), 0u);
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    EXPECT_FALSE(region.mask.at(i1, 100)) << "x1-axis cell " << i1;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      ASSERT_EQ(region.mask.at(i1, i2), region.mask.at(n - 1 - i1, n - 1 - i2));
      const State c = region.mask.spec().cell_center(i1, i2);
      ASSERT_GE(region.vdot_magnitude.at(i1, i2), 0.0);
      ASSERT_DOUBLE_EQ(region.alpha_sqrt_v.at(i1, i2), std::sqrt(lyapunov(c, 100.0)));
    }
  }
  // Cells next to the velocity axis with large |x2| are inside.
  EXPECT_TRUE(region.mask.at(100, 200));
}

TEST(ConvergenceBound, Examples) {
  EXPECT_NEAR(convergence_time_bound(50.0, 1.0), 14.1421356, 1e-6);
  EXPECT_EQ(convergence_time_bound(0.0, 1.0), 0.0);
  EXPECT_EQ(convergence_time_bound(1.0, 2.0), 1.0);
  EXPECT_THROW(convergence_time_bound(-1.0, 1.0), DomainError);
  EXPECT_THROW(convergence_time_bound(1.0, 0.0), DomainError);
}

// --- Saturation -------------------------------------------------------------

TEST(SaturationExitBound, Examples) {
  EXPECT_EQ(saturation_exit_bound(1.0, 0.0, 25.0), 0.0);
  EXPECT_NEAR(saturation_exit_bound(-2.0, -5.0, 25.0), 0.4, 1e-15);
  EXPECT_NEAR(saturation_exit_bound(0.0, -10.0, 25.0), 0.4, 1e-15);
  EXPECT_NEAR(saturation_exit_bound(2.0, 5.0, 25.0, -1), 0.4, 1e-15);
  EXPECT_THROW(saturation_exit_bound(0.0, 0.0, 0.0), DomainError);
}

TEST(SaturationEpisodes, BoundHoldsForModerateGains) {
  for (double k : {50.0, 100.0, 150.0}) {
    const auto spec = ControllerSpec::nonlinear(k).with_saturation(Saturation::at(25.0));
    const auto traj = simulate(spec, SimulationConfig{});
    const auto episodes = saturation_episodes(traj);
    ASSERT_FALSE(episodes.empty());
    for (const auto& e : episodes) {
      ASSERT_TRUE(e.t_exit.has_value()) << "k=" << k;
      EXPECT_LE(*e.t_exit - e.t_start, e.exit_bound + 1e-9) << "k=" << k << " episode at " << e.t_start;
    }
  }
}

TEST(SaturationEpisodes, ClampCanOutlastThresholdTime) {
  // For k=200 the second episode starts at (X1, X2) with X1 > 0 > X2 under
  // a positive clamp, so the bound is -X2/S. At that instant x2 = 0 and
  // x1 = X1 - X2^2/(2S) < 0, hence |v_raw| = k|x1| > S and the clamp is
  // still active.
  const auto spec = ControllerSpec::nonlinear(200.0).with_saturation(Saturation::at(25.0));
  const auto traj = simulate(spec, SimulationConfig{});
  const auto episodes = saturation_episodes(traj);
  ASSERT_GE(episodes.size(), 2u);
  const auto& e = episodes[1];
  ASSERT_EQ(e.sign, +1);
  const double tau = e.exit_bound;
  const State at_bound = simulate_saturated_closed_form(e.start.x1, e.start.x2, 25.0, +1, tau);
  EXPECT_NEAR(at_bound.x2, 0.0, 1e-12);
  EXPECT_LT(at_bound.x1, 0.0);
  EXPECT_GT(200.0 * std::abs(at_bound.x1), 25.0);
  ASSERT_TRUE(e.t_exit.has_value());
  EXPECT_GT(*e.t_exit - e.t_start, tau);
}

TEST(SaturationEpisodes, SplitOnSignAndExit) {
  Trajectory traj = synthetic({}, 1.0);
  traj.controller = ControllerSpec::nonlinear(1.0).with_saturation(Saturation::at(1.0));
  auto sample = [](double t, double x1, double v, bool sat) {
    Sample s = at(t, x1);
    s.v = v;
    s.v_raw = sat ? 2.0 * v : v;
    s.saturated = sat;
    return s;
  };
  traj.samples = {sample(0, 1, -1, true), sample(1, 0.5, -1, true), sample(2, 0.2, 1, true),
                  sample(3, 0.1, 0.5, false), sample(4, 0.0, 1, true)};
  const auto eps = saturation_episodes(traj);
  ASSERT_EQ(eps.size(), 3u);
  EXPECT_EQ(eps[0].sign, -1);
  EXPECT_EQ(eps[0].t_exit.status, Metric::Status::NotReached);
  EXPECT_EQ(eps[1].sign, +1);
  EXPECT_EQ(*eps[1].t_exit, 3.0);
  EXPECT_EQ(eps[2].t_exit.status, Metric::Status::NotReached);
  EXPECT_TRUE(saturation_episodes(synthetic({at(0, 1)}, 1.0)).empty());
}

// --- Metrics ----------------------------------------------------------------

TEST(Overshoot, CountsStrictSignChanges) {
  EXPECT_EQ(overshoot_count({}), 0);
  EXPECT_EQ(overshoot_count({at(0, 1), at(1, 0.5), at(2, 0.1)}), 0);
  EXPECT_EQ(overshoot_count({at(0, 1), at(1, -0.5), at(2, 0.1)}), 2);
  // Touching zero is not a crossing; passing through zero is one.
  EXPECT_EQ(overshoot_count({at(0, 1), at(1, 0.0), at(2, 0.1)}), 0);
  EXPECT_EQ(overshoot_count({at(0, 1), at(1, 0.0), at(2, -0.1)}), 1);
}

TEST(Overshoot, MatchesIndependentCountOnRandomSequences) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick(-1, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Sample> samples;
    std::vector<int> signs;
    for (int i = 0; i < 30; ++i) {
      const int s = pick(rng);
      samples.push_back(at(i, 0.5 * s));
      if (s != 0) signs.push_back(s);
    }
    int expected = 0;
    for (std::size_t i = 1; i < signs.size(); ++i) expected += signs[i] != signs[i - 1] ? 1 : 0;
    ASSERT_EQ(overshoot_count(samples), expected);
  }
}

TEST(SettlingTime, Examples) {
  const std::vector<Sample> s{at(0, 1), at(1, 1e-7), at(2, 0.5), at(3, 1e-7), at(4, -1e-8)};
  EXPECT_EQ(*settling_time(s, 1e-6), 3.0);
  EXPECT_EQ(settling_time(s, 1e-9).status, Metric::Status::NotReached);
  EXPECT_EQ(*settling_time(s, 2.0), 0.0);
}

TEST(AttractorSlopeError, MatchesClosedFormRatio) {
  // Along the quadratic-damping solution from (1, 0), x2/x1 = -k t, so the
  // relative slope error at time t is |sqrt(k) - k t| / sqrt(k).
  const double k = 100.0;
  const auto traj = simulate(ControllerSpec::nonlinear(k), SimulationConfig{});
  std::vector<double> errors;
  for (const auto& s : traj.samples) {
    const double x1 = oracle::quadratic_damping_x1(1.0, 0.0, k, s.t);
    if (x1 >= 1e-6 && x1 <= 1e-4) errors.push_back(std::abs(std::sqrt(k) - k * s.t) / std::sqrt(k));
  }
  ASSERT_FALSE(errors.empty());
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  const double median = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  const Metric m = attractor_slope_error(traj);
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(*m, median, 1e-6);
}

TEST(AttractorSlopeError, SmallAlongCriticalLinearResponse) {
  const auto traj = simulate(ControllerSpec::linear(100.0, 20.0), SimulationConfig{});
  const Metric m = attractor_slope_error(traj);
  ASSERT_TRUE(m.has_value());
  EXPECT_LT(*m, 0.1);
}

TEST(AttractorSlopeError, NotApplicableOutsideWindow) {
  EXPECT_EQ(attractor_slope_error(synthetic({at(0, 1), at(1, 0.5)})).status, Metric::Status::NotApplicable);
}

TEST(DecayFit, ConstantSignalIsLinearWithZeroSlope) {
  std::vector<Sample> s;
  for (int i = 0; i <= 20; ++i) s.push_back(at(i * 0.1, 0.3));
  const auto fit = fit_log_decay(synthetic(s), {0.0, 2.0});
  EXPECT_EQ(fit.model, DecayFit::Model::Linear);
  EXPECT_NEAR(fit.slope(), 0.0, 1e-12);
  EXPECT_EQ(fit.coefficients.size(), 2u);
  EXPECT_EQ(fit.quadratic.coefficients.size(), 3u);
}

TEST(DecayFit, ExactQuadraticIsRecovered) {
  std::vector<Sample> s;
  for (int i = 0; i <= 50; ++i) {
    const double t = i * 0.02;
    s.push_back(at(t, std::pow(10.0, 0.5 - 2.0 * t - 3.0 * t * t)));
  }
  const auto fit = fit_log_decay(synthetic(s), {0.0, 1.0});
  EXPECT_EQ(fit.model, DecayFit::Model::Quadratic);
  ASSERT_EQ(fit.coefficients.size(), 3u);
  EXPECT_NEAR(fit.coefficients[0], 0.5, 1e-10);
  EXPECT_NEAR(fit.coefficients[1], -2.0, 1e-10);
  EXPECT_NEAR(fit.coefficients[2], -3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(DecayFit, LinearSlopeMatchesLeastSquaresOracle) {
  const auto traj = simulate(ControllerSpec::linear(100.0, 20.0), SimulationConfig{});
  std::vector<double> t;
  std::vector<double> y;
  for (const auto& s : traj.samples) {
    if (s.t < 0.5 || s.t > 1.5) continue;
    t.push_back(s.t);
    y.push_back(std::log10(oracle::critical_x1(1.0, 0.0, 10.0, s.t)));
  }
  const auto [intercept, slope] = oracle::least_squares_line(t, y);
  const auto fit = fit_log_decay(traj, {0.5, 1.5});
  EXPECT_EQ(fit.model, DecayFit::Model::Linear);
  EXPECT_NEAR(fit.slope(), slope, 1e-6);
  EXPECT_NEAR(fit.linear.coefficients[0], intercept, 1e-6);
  EXPECT_GT(fit.r_squared, 0.999);
}

TEST(DecayFit, NonlinearDecayIsQuadratic) {
  const double k = 100.0;
  const auto traj = simulate(ControllerSpec::nonlinear(k), SimulationConfig{});
  const auto fit = fit_log_decay(traj, {0.05, 0.8});
  EXPECT_EQ(fit.model, DecayFit::Model::Quadratic);
  EXPECT_GT(fit.r_squared, 0.99);
  // log10 x1 = -k t^2 / (2 ln 10) exactly.
  EXPECT_NEAR(fit.coefficients[2], -k / (2.0 * std::numbers::ln10), 1e-6);
  EXPECT_NEAR(fit.coefficients[1], 0.0, 1e-6);
}

TEST(DecayFit, RejectsSignChangeAndShortWindow) {
  EXPECT_THROW(fit_log_decay(synthetic({at(0, 1), at(1, -1), at(2, 1)}), {0, 2}), DomainError);
  EXPECT_THROW(fit_log_decay(synthetic({at(0, 1), at(1, 0.0), at(2, 1)}), {0, 2}), DomainError);
  EXPECT_THROW(fit_log_decay(synthetic({at(0, 1), at(1, 0.5)}), {0, 2}), DomainError);
}

TEST(Analyze, Examples) {
  const SimulationConfig cfg;
  EXPECT_EQ(analyze(simulate(ControllerSpec::nonlinear(100.0), cfg)).overshoot_count, 0);
  EXPECT_EQ(analyze(simulate(ControllerSpec::nonlinear(200.0).with_saturation(Saturation::at(25.0)), cfg))
                .overshoot_count,
            1);
  EXPECT_EQ(analyze(simulate(ControllerSpec::linear(100.0, 20.0), cfg)).overshoot_count, 0);
  EXPECT_THROW(analyze(synthetic({})), DomainError);
}

TEST(Analyze, ReportFields) {
  const auto traj = simulate(ControllerSpec::nonlinear(100.0), SimulationConfig{});
  const auto r = analyze(traj);
  EXPECT_EQ(r.final_V, traj.back().V);
  ASSERT_TRUE(r.settling_time.has_value());
  EXPECT_GT(*r.settling_time, 0.3);
  EXPECT_LT(*r.settling_time, 0.6);
  EXPECT_EQ(r.saturation_exit_time.status, Metric::Status::NotApplicable);
  EXPECT_TRUE(r.decay_fit.has_value());

  const auto sat = simulate(ControllerSpec::nonlinear(200.0).with_saturation(Saturation::at(25.0)), SimulationConfig{});
  const auto rs = analyze(sat);
  ASSERT_TRUE(rs.saturation_exit_time.has_value());
  for (const auto& s : sat.samples) {
    if (s.t >= *rs.saturation_exit_time) {
      ASSERT_FALSE(s.saturated) << "t=" << s.t;
    }
  }
}

TEST(Analyze, SaturationExitNotReachedWhenEndingSaturated) {
  SimulationConfig cfg;
  cfg.t_end = 0.05;
  cfg.sample_interval = 0.01;
  const auto traj = simulate(ControllerSpec::nonlinear(200.0).with_saturation(Saturation::at(25.0)), cfg);
  EXPECT_EQ(analyze(traj).saturation_exit_time.status, Metric::Status::NotReached);
}

TEST(Scaling, RescaledTrajectoriesCoincide) {
  // Matching sample instants: the gain-k run samples every 1e-3/sqrt(k).
  auto run = [](double k) {
    SimulationConfig cfg;
    cfg.sample_interval = 1e-3 / std::sqrt(k);
    cfg.t_end = 2.0 / std::sqrt(k);
    cfg.v_stop = 0.0;
    return experiments::rescale_to_unit_gain(simulate(ControllerSpec::nonlinear(k), cfg));
  };
  const auto ref = run(1.0);
  for (double k : {10.0, 1000.0}) {
    const auto scaled = run(k);
    const std::size_t n = std::min(ref.size(), scaled.size());
    ASSERT_GT(n, 1000u);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(scaled[i].t, ref[i].t, 1e-12);
      ASSERT_NEAR(scaled[i].state.x1, ref[i].state.x1, 1e-6) << "k=" << k << " tau=" << ref[i].t;
      ASSERT_NEAR(scaled[i].state.x2, ref[i].state.x2, 1e-6) << "k=" << k << " tau=" << ref[i].t;
    }
  }
}
