#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "braess/flux.hpp"

namespace braess {

/// Travel time from the stationary LWR solution: length / v(rho(flow)).
struct StationaryFlow {
  FluxModel model;
  friend bool operator==(const StationaryFlow&, const StationaryFlow&) = default;
};

/// tau(n) = slope * n + intercept for n vehicles on the road.
struct CountLatency {
  double slope = 0.0;
  double intercept = 0.0;
  friend bool operator==(const CountLatency&, const CountLatency&) = default;
};

/// Constant travel time regardless of load. Used to pin a controlled road;
/// compatible with either demand unit.
struct FixedTime {
  double time = 0.0;
  friend bool operator==(const FixedTime&, const FixedTime&) = default;
};

using RoadBehavior = std::variant<StationaryFlow, CountLatency, FixedTime>;

struct Road {
  std::string id;
  double length = 1.0;
  RoadBehavior behavior;

  friend bool operator==(const Road&, const Road&) = default;
};

/// Travel time along a single road carrying `load` (flow or vehicle count).
double road_time(const Road& road, double load);
/// d/dload of road_time.
double road_time_derivative(const Road& road, double load);
/// Integral of road_time over [0, load], by adaptive Gauss-Kronrod quadrature.
double road_time_integral(const Road& road, double load);

struct Route {
  std::string id;
  std::vector<std::string> roads;

  friend bool operator==(const Route&, const Route&) = default;
};

enum class DemandKind { Inflow, Vehicles };

struct Demand {
  DemandKind kind = DemandKind::Inflow;
  double value = 0.0;

  static Demand inflow(double phi) { return {DemandKind::Inflow, phi}; }
  static Demand vehicles(double m) { return {DemandKind::Vehicles, m}; }

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// A point of the route simplex: one share per route, summing to 1.
class FlowPartition {
 public:
  /// Throws ValidationError unless every share is in [0, 1] and the sum is 1
  /// within 1e-9.
  explicit FlowPartition(std::vector<double> shares);

  /// Builds a k-route partition from the first k-1 shares; the last route gets
  /// the remainder 1 - sum.
  static FlowPartition with_remainder(std::span<const double> leading);

  std::span<const double> shares() const noexcept { return shares_; }
  std::size_t size() const noexcept { return shares_.size(); }
  double operator[](std::size_t j) const { return shares_[j]; }

  friend bool operator==(const FlowPartition&, const FlowPartition&) = default;

 private:
  std::vector<double> shares_;
};

class Network {
 public:
  /// Validates ids, route references, behavior consistency and feasibility
  /// (inflow <= min capacity). Throws ValidationError.
  Network(std::vector<Road> roads, std::vector<Route> routes, Demand demand);

  const std::vector<Road>& roads() const noexcept { return roads_; }
  const std::vector<Route>& routes() const noexcept { return routes_; }
  const Demand& demand() const noexcept { return demand_; }
  std::size_t road_count() const noexcept { return roads_.size(); }
  std::size_t route_count() const noexcept { return routes_.size(); }

  /// Gamma(i, j) == 1 iff road i lies on route j.
  int incidence(std::size_t road, std::size_t route) const { return gamma_[road * routes_.size() + route]; }
  std::vector<std::vector<int>> incidence_matrix() const;

  std::optional<std::size_t> road_index(const std::string& id) const;
  std::optional<std::size_t> route_index(const std::string& id) const;

  /// Same network with a different demand value (re-validated).
  Network with_demand(double value) const;
  /// Same network with road `id` replaced by a constant travel time.
  Network with_fixed_time(const std::string& id, double time) const;
  /// Same network with road `id`'s behavior replaced.
  Network with_behavior(const std::string& id, RoadBehavior behavior) const;

  friend bool operator==(const Network& lhs, const Network& rhs) {
    return lhs.roads_ == rhs.roads_ && lhs.routes_ == rhs.routes_ && lhs.demand_ == rhs.demand_;
  }

 private:
  std::vector<Road> roads_;
  std::vector<Route> routes_;
  Demand demand_;
  std::vector<int> gamma_;
};

/// Per-road load: demand * sum_j Gamma_ij theta_j.
std::vector<double> road_flows(const Network& net, const FlowPartition& theta);

/// tau_j = sum_i Gamma_ij tau_i(load_i).
std::vector<double> route_travel_times(const Network& net, const FlowPartition& theta);

/// T(theta) = sum_j theta_j tau_j(theta).
double mean_global_travel_time(const Network& net, const FlowPartition& theta);

/// Gradient of T with respect to the route shares (ambient coordinates).
std::vector<double> mean_travel_time_gradient(const Network& net, const FlowPartition& theta);

/// Largest inflow such that every partition is feasible: min_i q_i(1).
/// Roads without a flux model impose no bound.
double max_uniform_inflow(const Network& net);

}  // namespace braess
