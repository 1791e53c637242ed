// Closed-form reference solutions used by the tests. Nothing in here calls
// into the library, so a bug in the library cannot leak into its own oracle.
#pragma once

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

/// x1(t) for x1'' + 2*lambda*x1' + lambda^2*x1 = 0.
inline double critical_x1(double x1_0, double x2_0, double lambda, double t) {
  return (x1_0 + (x2_0 + lambda * x1_0) * t) * std::exp(-lambda * t);
}

inline double critical_x2(double x1_0, double x2_0, double lambda, double t) {
  const double c = x2_0 + lambda * x1_0;
  return (c - lambda * (x1_0 + c * t)) * std::exp(-lambda * t);
}

// Under the quadratic damping law, while x1 > 0 and x2 <= 0 the ratio
// r = x2/x1 obeys r' = -k exactly:
//   r' = x2'/x1 - r^2 = (-k*x1 + x2^2/x1)/x1 - r^2 = -k.
// So r(t) = r0 - k*t and x1(t) = x1_0 * exp(r0*t - k*t^2/2).
inline double quadratic_damping_x1(double x1_0, double x2_0, double k, double t) {
  const double r0 = x2_0 / x1_0;
  return x1_0 * std::exp(r0 * t - 0.5 * k * t * t);
}

inline double quadratic_damping_x2(double x1_0, double x2_0, double k, double t) {
  const double r0 = x2_0 / x1_0;
  return (r0 - k * t) * quadratic_damping_x1(x1_0, x2_0, k, t);
}

/// Ordinary least-squares line through (t, y): returns (intercept, slope).
inline std::pair<double, double> least_squares_line(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  const double mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
  }
  const double slope = sty / stt;
  return {my - slope * mt, slope};
}

/// Power-balance form of the passivity inequality,
///   -x2^2 sgn(x2) sgn(x1) >= -x2^2 |x2| / |x1|,
/// with the common positive factor x2^2 / |x1| divided out so that both
/// sides are exact: -sgn(x2) sgn(x1) |x1| against -|x2|. Off the axes only.
/// Returns +1 when it holds strictly, 0 on equality, -1 when violated.
inline int power_balance(double x1, double x2) {
  auto sgn = [](double v) { return (v > 0) - (v < 0); };
  const double lhs = -static_cast<double>(sgn(x2) * sgn(x1)) * std::abs(x1);
  const double rhs = -std::abs(x2);
  if (lhs > rhs) return 1;
  if (lhs < rhs) return -1;
  return 0;
}

}  // namespace oracle
