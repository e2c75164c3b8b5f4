#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the solver paths it is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>

namespace braess::oracle {

// Two-road network with road a: length 3/2, q = (-1 + sqrt(1 + 8 rho)) / 4 and
// road b: length 1, Q = -1 + sqrt(1 + R); theta is the share on road a.
inline double two_road_time_a(double theta, double phi) { return 1.5 * (1.0 + 2.0 * theta * phi); }
inline double two_road_time_b(double theta, double phi) { return 2.0 + (1.0 - theta) * phi; }
inline double two_road_mean(double theta, double phi) {
  return 2.0 + phi - (1.0 + 4.0 * phi) / 2.0 * theta + 4.0 * theta * theta * phi;
}

// Interior formulas, clamped to the share interval [0, 1]. The unconstrained
// solutions exceed 1 for small phi, where all traffic takes road a.
inline double two_road_nash(double phi) { return std::min((1.0 + 2.0 * phi) / (8.0 * phi), 1.0); }
inline double two_road_optimum(double phi) { return std::min((1.0 + 4.0 * phi) / (16.0 * phi), 1.0); }

// Log-flux road (a = 1, unit length) carrying share s of inflow phi:
// tau = (e^{s phi} - 1) / (s phi), with limit 1 at s = 0.
inline double log_road_time(double share, double phi) {
  const double x = share * phi;
  return x == 0.0 ? 1.0 : std::expm1(x) / x;
}

/// Grid minimization of f over [lo, hi] with n points; returns (argmin, min).
inline std::pair<double, double> grid_minimum(const std::function<double(double)>& f, double lo, double hi,
                                              std::size_t n) {
  double best_x = lo;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

/// Central finite difference.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace braess::oracle
