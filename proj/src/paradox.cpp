#include "braess/paradox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "braess/error.hpp"

namespace braess {
namespace {

// Strict inequalities in the paradox condition need at least this margin.
constexpr double kStrictMargin = 1e-12;

Network make_base(const std::vector<Road>& five, const Demand& demand, const std::array<std::string, 5>& ids) {
  std::vector<Road> roads(five.begin(), five.begin() + 4);
  std::vector<Route> routes{{"alpha", {ids[0], ids[1]}}, {"beta", {ids[2], ids[3]}}};
  return Network(std::move(roads), std::move(routes), demand);
}

Network make_augmented(const std::vector<Road>& five, const Demand& demand, const std::array<std::string, 5>& ids) {
  std::vector<Route> routes{
      {"alpha", {ids[0], ids[1]}}, {"beta", {ids[2], ids[3]}}, {"gamma", {ids[0], ids[4], ids[3]}}};
  return Network(five, std::move(routes), demand);
}

std::vector<Road> make_roads(double shared_length, const RoadBehavior& shared, double bypassed_length,
                             const RoadBehavior& bypassed, double bridge_length, const RoadBehavior& bridge,
                             const std::array<std::string, 5>& ids) {
  return {
      {ids[0], shared_length, shared},     {ids[1], bypassed_length, bypassed}, {ids[2], bypassed_length, bypassed},
      {ids[3], shared_length, shared},     {ids[4], bridge_length, bridge},
  };
}

}  // namespace

BraessScenario::BraessScenario(double shared_length, RoadBehavior shared, double bypassed_length,
                               RoadBehavior bypassed, double bridge_length, RoadBehavior bridge, Demand demand,
                               std::array<std::string, 5> ids)
    : ids_(std::move(ids)),
      base_(make_base(make_roads(shared_length, shared, bypassed_length, bypassed, bridge_length, bridge, ids_),
                      demand, ids_)),
      augmented_(make_augmented(
          make_roads(shared_length, shared, bypassed_length, bypassed, bridge_length, bridge, ids_), demand, ids_)) {}

BraessScenario BraessScenario::from_roads(const Road& a, const Road& b, const Road& c, const Road& d, const Road& e,
                                          Demand demand) {
  if (a.length != d.length || !(a.behavior == d.behavior)) {
    throw ValidationError("roads '" + a.id + "' and '" + d.id + "' must share length and behavior");
  }
  if (b.length != c.length || !(b.behavior == c.behavior)) {
    throw ValidationError("roads '" + b.id + "' and '" + c.id + "' must share length and behavior");
  }
  return BraessScenario(a.length, a.behavior, b.length, b.behavior, e.length, e.behavior, demand,
                        {a.id, b.id, c.id, d.id, e.id});
}

double BraessScenario::shared_time(double share) const {
  return road_time(shared_road(), share * demand().value);
}

double BraessScenario::bypassed_time(double share) const {
  return road_time(bypassed_road(), share * demand().value);
}

double BraessScenario::bridge_time(double share) const {
  return road_time(bridge_road(), share * demand().value);
}

double BraessScenario::shared_time_slope(double share) const {
  return demand().value * road_time_derivative(shared_road(), share * demand().value);
}

double BraessScenario::bypassed_time_slope(double share) const {
  return demand().value * road_time_derivative(bypassed_road(), share * demand().value);
}

std::vector<double> BraessScenario::route_times(double theta1, double theta2) const {
  const double pair[] = {theta1, theta2};
  return route_travel_times(augmented_, FlowPartition::with_remainder(pair));
}

BraessScenario BraessScenario::with_demand(double value) const {
  return BraessScenario(shared_road().length, shared_road().behavior, bypassed_road().length,
                        bypassed_road().behavior, bridge_road().length, bridge_road().behavior,
                        Demand{demand().kind, value}, ids_);
}

BraessScenario BraessScenario::with_bypassed(RoadBehavior behavior) const {
  return BraessScenario(shared_road().length, shared_road().behavior, bypassed_road().length, std::move(behavior),
                        bridge_road().length, bridge_road().behavior, demand(), ids_);
}

BraessScenario BraessScenario::with_bridge(RoadBehavior behavior) const {
  return BraessScenario(shared_road().length, shared_road().behavior, bypassed_road().length,
                        bypassed_road().behavior, bridge_road().length, std::move(behavior), demand(), ids_);
}

Network BraessScenario::controlled(double bridge_time) const {
  return augmented_.with_fixed_time(ids_[4], bridge_time);
}

BraessScenario log_linear_scenario(double speed, double bridge_speed, double phi) {
  return BraessScenario(1.0, StationaryFlow{FluxModel::log(1.0)}, 1.0, StationaryFlow{FluxModel::linear(speed)}, 1.0,
                        StationaryFlow{FluxModel::linear(bridge_speed)}, Demand::inflow(phi));
}

BraessReport braess_condition(const BraessScenario& scenario) {
  if (scenario.shared_time(0.0) == scenario.shared_time(1.0) &&
      scenario.bypassed_time(0.0) == scenario.bypassed_time(1.0)) {
    throw ValidationError("paradox test needs a non-constant travel time on road a or road b");
  }
  BraessReport report;
  const double half_alpha = scenario.route_times(0.5, 0.5)[0];
  const std::vector<double> corner = scenario.route_times(0.0, 0.0);
  report.condition_bounds = {half_alpha, corner[2], corner[0]};

  const double left_gap = corner[2] - half_alpha;
  const double right_gap = corner[0] - corner[2];
  report.paradox = left_gap > kStrictMargin && right_gap > kStrictMargin;
  report.marginal = !report.paradox && left_gap >= -kStrictMargin && right_gap >= -kStrictMargin;
  report.base_optimum_time = half_alpha;

  if (report.paradox) {
    report.augmented_nash_time = corner[2];
    report.augmented_nash_partition = {0.0, 0.0, 1.0};
  } else {
    const EquilibriumResult nash = find_wardrop(scenario.augmented());
    report.augmented_nash_time = nash.equilibrium_time;
    report.augmented_nash_partition.assign(nash.partition.shares().begin(), nash.partition.shares().end());
  }
  report.degradation = report.augmented_nash_time - report.base_optimum_time;
  return report;
}

ReducedInequality reduced_braess_inequality(double speed, double bridge_speed, double phi) {
  if (!(speed > 0.0 && bridge_speed > 0.0 && phi > 0.0)) {
    throw DomainError("speeds and inflow must be positive");
  }
  if (phi > std::min({std::log(2.0), speed, bridge_speed}) * (1.0 + 1e-12)) {
    throw DomainError("inflow exceeds min(ln 2, V, v_tilde)");
  }
  ReducedInequality out;
  out.lower = std::expm1(phi) / phi;
  out.middle = 1.0 / speed - 1.0 / bridge_speed;
  out.upper = 2.0 / phi * std::exp(phi / 2.0) * std::expm1(phi / 2.0);
  out.holds = out.lower < out.middle && out.middle < out.upper;
  return out;
}

UniquenessCertificate nash_uniqueness_certificate(const BraessScenario& scenario, std::size_t grid,
                                                  const Tolerances& tolerances) {
  if (grid < 3) throw DomainError("diagonal sweep needs at least 3 points");
  UniquenessCertificate cert;
  cert.grid_points = grid;

  // Along the diagonal alpha and beta coincide, so an equilibrium using every
  // route needs tau_alpha(theta, theta) = tau_gamma(theta, theta).
  auto gap = [&](double theta) {
    const std::vector<double> t = scenario.route_times(theta, theta);
    return t[0] - t[2];
  };
  std::vector<double> nodes(grid);
  std::vector<double> values(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    nodes[k] = 0.5 * static_cast<double>(k) / static_cast<double>(grid - 1);
    values[k] = gap(nodes[k]);
  }
  for (std::size_t k = 1; k + 1 < grid; ++k) {
    if (values[k] == 0.0) cert.interior_roots.push_back(nodes[k]);
  }
  for (std::size_t k = 0; k + 1 < grid; ++k) {
    if (values[k] == 0.0 || values[k + 1] == 0.0 || (values[k] > 0.0) == (values[k + 1] > 0.0)) continue;
    double lo = nodes[k];
    double hi = nodes[k + 1];
    const bool rising = values[k] < 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((gap(mid) < 0.0) == rising) lo = mid;
      else hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (root > 1e-12 && root < 0.5 - 1e-12) cert.interior_roots.push_back(root);
  }
  std::sort(cert.interior_roots.begin(), cert.interior_roots.end());
  cert.no_interior_equilibrium = cert.interior_roots.empty();

  cert.corners_rejected = true;
  for (std::vector<double> corner : {std::vector<double>{1.0, 0.0, 0.0}, std::vector<double>{0.0, 1.0, 0.0}}) {
    const PredicateResult nash = is_local_nash(scenario.augmented(), FlowPartition(corner),
                                               tolerances.nash_epsilon, tolerances.equilibrium);
    cert.corners.push_back({corner, nash.holds});
    cert.corners_rejected = cert.corners_rejected && !nash.holds;
  }
  cert.certified = cert.no_interior_equilibrium && cert.corners_rejected;

  std::ostringstream note;
  note << "symmetric diagonal (" << grid << " points) and corners (1,0,0), (0,1,0) only; ";
  if (cert.no_interior_equilibrium) note << "no interior equilibrium on the diagonal";
  else note << cert.interior_roots.size() << " interior equilibrium point(s) on the diagonal";
  cert.note = note.str();
  return cert;
}

}  // namespace braess
