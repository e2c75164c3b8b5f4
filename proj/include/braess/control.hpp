#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "braess/equilibria.hpp"
#include "braess/paradox.hpp"

namespace braess {

// Speed-limit control on the added road e: road e gets a constant travel time
// tau_tilde, chosen so that a symmetric Nash point (theta, theta) of the
// controlled network also minimizes its mean travel time.

/// T~(theta) = max(tau_b(theta) - tau_a(1 - theta), 0): the bridge time making
/// (theta, theta) an equilibrium. theta in [0, 1/2].
double control_for_theta(const BraessScenario& scenario, double theta);

/// T(theta, theta) = 2(1-theta) tau_a(1-theta) + 2 theta tau_b(theta) + (1 - 2 theta) tau_tilde
double diagonal_mean_time(const BraessScenario& scenario, double theta, double bridge_time);
/// d/dtheta of diagonal_mean_time.
double diagonal_mean_time_slope(const BraessScenario& scenario, double theta, double bridge_time);

/// Theta(tau_tilde): minimizer of diagonal_mean_time over [0, 1/2], to 1e-10.
double theta_for_control(const BraessScenario& scenario, double bridge_time);

struct FixedPoint {
  double theta = 0.0;
  double bridge_time = 0.0;
  double mean_time = 0.0;
};

struct ControlResult {
  double tilde_tau = 0.0;
  double theta_star = 0.0;
  /// bridge length / tilde_tau; +inf when tilde_tau == 0.
  double equivalent_speed = 0.0;
  /// Every fixed point of Theta o T~ found by the grid scan, in theta order.
  std::vector<FixedPoint> fixed_points;

  /// Certificate (a): local Nash test at (theta*, theta*, 1 - 2 theta*) on
  /// the controlled network.
  PredicateResult nash;
  double controlled_time = 0.0;  ///< equilibrium time at theta*
  double controlled_mean_time = 0.0;

  /// Certificate (b): T at theta* against random feasible partitions.
  std::size_t optimality_samples = 0;
  double best_sampled_mean_time = 0.0;
  bool optimal = false;

  bool strictly_convex_hypothesis = false;
  bool certified = false;
  std::string diagnostics;
};

/// Fixed point theta* = Theta(T~(theta*)) and its control T~(theta*).
ControlResult optimal_control(const BraessScenario& scenario, const Tolerances& tolerances = {},
                              std::size_t grid = 1001, std::size_t samples = 1000);

}  // namespace braess
