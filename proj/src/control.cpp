#include "braess/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "braess/error.hpp"

namespace braess {
namespace {

constexpr double kThetaTolerance = 1e-12;
constexpr double kFixedPointTolerance = 1e-10;

void require_diagonal(double theta) {
  if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("diagonal share must lie in [0, 1/2]");
}

bool strictly_convex(const BraessScenario& s, double (BraessScenario::*time)(double) const) {
  constexpr int n = 101;
  for (int k = 1; k + 1 < n; ++k) {
    const double h = 1.0 / (n - 1);
    const double x = k * h;
    const double second = (s.*time)(x - h) - 2.0 * (s.*time)(x) + (s.*time)(x + h);
    if (!(second > 1e-14 * std::abs((s.*time)(x)))) return false;
  }
  return true;
}

}  // namespace

double control_for_theta(const BraessScenario& scenario, double theta) {
  require_diagonal(theta);
  return std::max(scenario.bypassed_time(theta) - scenario.shared_time(1.0 - theta), 0.0);
}

double diagonal_mean_time(const BraessScenario& scenario, double theta, double bridge_time) {
  require_diagonal(theta);
  return 2.0 * (1.0 - theta) * scenario.shared_time(1.0 - theta) + 2.0 * theta * scenario.bypassed_time(theta) +
         (1.0 - 2.0 * theta) * bridge_time;
}

double diagonal_mean_time_slope(const BraessScenario& scenario, double theta, double bridge_time) {
  require_diagonal(theta);
  const double s = 1.0 - theta;
  return 2.0 * (-scenario.shared_time(s) - s * scenario.shared_time_slope(s) + scenario.bypassed_time(theta) +
                theta * scenario.bypassed_time_slope(theta) - bridge_time);
}

double theta_for_control(const BraessScenario& scenario, double bridge_time) {
  if (!(bridge_time >= 0.0)) throw DomainError("bridge travel time must be non-negative");
  // Convex in theta, so the slope is non-decreasing: bisect on its sign.
  if (diagonal_mean_time_slope(scenario, 0.0, bridge_time) >= 0.0) return 0.0;
  if (diagonal_mean_time_slope(scenario, 0.5, bridge_time) <= 0.0) return 0.5;
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > kThetaTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (diagonal_mean_time_slope(scenario, mid, bridge_time) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

ControlResult optimal_control(const BraessScenario& scenario, const Tolerances& tolerances, std::size_t grid,
                              std::size_t samples) {
  if (grid < 2) throw DomainError("fixed-point scan needs at least 2 points");
  ControlResult out;
  out.strictly_convex_hypothesis = strictly_convex(scenario, &BraessScenario::shared_time) ||
                                   strictly_convex(scenario, &BraessScenario::bypassed_time);

  auto upsilon_gap = [&](double theta) {
    return theta_for_control(scenario, control_for_theta(scenario, theta)) - theta;
  };
  auto record = [&](double theta) {
    for (const FixedPoint& p : out.fixed_points) {
      if (std::abs(p.theta - theta) < 1e-9) return;
    }
    const double tau = control_for_theta(scenario, theta);
    out.fixed_points.push_back({theta, tau, diagonal_mean_time(scenario, theta, tau)});
  };

  // Scan for sign changes of g = Upsilon - id, then bisect each bracket.
  std::vector<double> nodes(grid);
  std::vector<double> gaps(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    nodes[k] = 0.5 * static_cast<double>(k) / static_cast<double>(grid - 1);
    gaps[k] = upsilon_gap(nodes[k]);
    if (std::abs(gaps[k]) <= kFixedPointTolerance) record(nodes[k]);
  }
  for (std::size_t k = 0; k + 1 < grid; ++k) {
    if (std::abs(gaps[k]) <= kFixedPointTolerance || std::abs(gaps[k + 1]) <= kFixedPointTolerance) continue;
    if ((gaps[k] > 0.0) == (gaps[k + 1] > 0.0)) continue;
    double lo = nodes[k];
    double hi = nodes[k + 1];
    const bool falling = gaps[k] > 0.0;
    while (hi - lo > kThetaTolerance) {
      const double mid = 0.5 * (lo + hi);
      if ((upsilon_gap(mid) > 0.0) == falling) lo = mid;
      else hi = mid;
    }
    record(0.5 * (lo + hi));
  }
  std::sort(out.fixed_points.begin(), out.fixed_points.end(),
            [](const FixedPoint& l, const FixedPoint& r) { return l.theta < r.theta; });
  if (out.fixed_points.empty()) {
    throw NumericError("no fixed point of Theta o T~ located on the diagonal scan");
  }

  const FixedPoint best = *std::min_element(out.fixed_points.begin(), out.fixed_points.end(),
                                            [](const FixedPoint& l, const FixedPoint& r) {
                                              return l.mean_time < r.mean_time;
                                            });
  out.theta_star = best.theta;
  out.tilde_tau = best.bridge_time;
  out.equivalent_speed = out.tilde_tau > 0.0 ? scenario.bridge_road().length / out.tilde_tau
                                             : std::numeric_limits<double>::infinity();

  const Network controlled = scenario.controlled(out.tilde_tau);
  const double pair[] = {out.theta_star, out.theta_star};
  const FlowPartition star = FlowPartition::with_remainder(pair);
  out.nash = is_local_nash(controlled, star, tolerances.nash_epsilon, tolerances.equilibrium);
  out.controlled_time = out.nash.equilibrium_time;
  out.controlled_mean_time = mean_global_travel_time(controlled, star);

  std::mt19937_64 rng(tolerances.seed);
  std::exponential_distribution<double> weight(1.0);
  out.best_sampled_mean_time = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> shares(controlled.route_count());
    double total = 0.0;
    for (double& v : shares) total += (v = weight(rng));
    for (double& v : shares) v /= total;
    out.best_sampled_mean_time =
        std::min(out.best_sampled_mean_time, mean_global_travel_time(controlled, FlowPartition(std::move(shares))));
    ++out.optimality_samples;
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(out.controlled_mean_time));
  out.optimal = out.controlled_mean_time <= out.best_sampled_mean_time + slack;
  out.certified = out.nash.holds && out.optimal;

  std::ostringstream diag;
  diag.precision(12);
  diag << out.fixed_points.size() << " fixed point(s) on a " << grid << "-point scan; ";
  diag << "Nash " << (out.nash.holds ? "passed" : "FAILED") << " (" << out.nash.certificate.note << "); ";
  diag << "optimality " << (out.optimal ? "passed" : "FAILED") << " (T* = " << out.controlled_mean_time
       << ", best sampled " << out.best_sampled_mean_time << " over " << out.optimality_samples << " partitions)";
  if (!out.strictly_convex_hypothesis) diag << "; neither tau_a nor tau_b is strictly convex";
  out.diagnostics = diag.str();
  return out;
}

}  // namespace braess
