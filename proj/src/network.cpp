#include "braess/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "braess/error.hpp"

namespace braess {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kShareTolerance = 1e-9;
constexpr double kShareDust = 1e-12;
constexpr double kQuadratureTolerance = 1e-10;

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

void require_nonnegative(double value, const std::string& what) {
  if (!std::isfinite(value) || value < 0.0) invalid(what + " must be finite and non-negative");
}

}  // namespace

double road_time(const Road& road, double load) {
  return std::visit(Overloaded{
                        [&](const StationaryFlow& s) { return road_travel_time(road.length, s.model, load); },
                        [&](const CountLatency& c) {
                          if (!(load >= 0.0)) throw DomainError("negative vehicle count");
                          return c.slope * load + c.intercept;
                        },
                        [](const FixedTime& f) { return f.time; },
                    },
                    road.behavior);
}

double road_time_derivative(const Road& road, double load) {
  return std::visit(Overloaded{
                        [&](const StationaryFlow& s) { return road.length * slowness_derivative(s.model, load); },
                        [](const CountLatency& c) { return c.slope; },
                        [](const FixedTime&) { return 0.0; },
                    },
                    road.behavior);
}

double road_time_integral(const Road& road, double load) {
  if (!(load >= 0.0)) throw DomainError("negative load");
  if (load == 0.0) return 0.0;
  auto integrand = [&road](double s) { return road_time(road, s); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, load, 15, kQuadratureTolerance, &error);
  return value;
}

FlowPartition::FlowPartition(std::vector<double> shares) : shares_(std::move(shares)) {
  if (shares_.empty()) invalid("partition must have at least one share");
  double sum = 0.0;
  for (double& s : shares_) {
    if (!std::isfinite(s) || s < -kShareDust || s > 1.0 + kShareDust) {
      std::ostringstream msg;
      msg << "partition share " << s << " outside [0, 1]";
      invalid(msg.str());
    }
    s = std::clamp(s, 0.0, 1.0);
    sum += s;
  }
  if (std::abs(sum - 1.0) > kShareTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "partition shares sum to " << sum << ", expected 1";
    invalid(msg.str());
  }
}

FlowPartition FlowPartition::with_remainder(std::span<const double> leading) {
  std::vector<double> shares(leading.begin(), leading.end());
  const double used = std::accumulate(shares.begin(), shares.end(), 0.0);
  shares.push_back(1.0 - used);
  return FlowPartition(std::move(shares));
}

Network::Network(std::vector<Road> roads, std::vector<Route> routes, Demand demand)
    : roads_(std::move(roads)), routes_(std::move(routes)), demand_(demand) {
  if (roads_.empty()) invalid("network has no roads");
  if (routes_.empty()) invalid("network has no routes");

  bool has_flux = false;
  bool has_count = false;
  std::set<std::string> road_ids;
  for (const Road& road : roads_) {
    if (road.id.empty()) invalid("road with empty id");
    if (!road_ids.insert(road.id).second) invalid("duplicate road id '" + road.id + "'");
    if (!std::isfinite(road.length) || road.length <= 0.0) {
      invalid("road '" + road.id + "' must have positive length");
    }
    std::visit(Overloaded{
                   [&](const StationaryFlow& s) {
                     has_flux = true;
                     if (!validate(s.model, 101).passed) {
                       invalid("road '" + road.id + "' flux model is not an admissible concave flux");
                     }
                   },
                   [&](const CountLatency& c) {
                     has_count = true;
                     require_nonnegative(c.slope, "road '" + road.id + "' slope");
                     require_nonnegative(c.intercept, "road '" + road.id + "' intercept");
                   },
                   [&](const FixedTime& f) { require_nonnegative(f.time, "road '" + road.id + "' time"); },
               },
               road.behavior);
  }
  if (has_flux && has_count) invalid("network mixes flux-model roads and count-latency roads");
  if (has_flux && demand_.kind != DemandKind::Inflow) invalid("flux-model network needs an inflow demand");
  if (has_count && demand_.kind != DemandKind::Vehicles) invalid("count-latency network needs a vehicle demand");
  require_nonnegative(demand_.value, "demand");

  std::set<std::string> route_ids;
  gamma_.assign(roads_.size() * routes_.size(), 0);
  for (std::size_t j = 0; j < routes_.size(); ++j) {
    const Route& route = routes_[j];
    if (route.id.empty()) invalid("route with empty id");
    if (!route_ids.insert(route.id).second) invalid("duplicate route id '" + route.id + "'");
    if (route.roads.empty()) invalid("route '" + route.id + "' has no roads");
    for (const std::string& rid : route.roads) {
      const auto i = road_index(rid);
      if (!i) invalid("route '" + route.id + "' references unknown road '" + rid + "'");
      int& cell = gamma_[*i * routes_.size() + j];
      if (cell != 0) invalid("route '" + route.id + "' visits road '" + rid + "' twice");
      cell = 1;
    }
  }

  if (demand_.kind == DemandKind::Inflow) {
    const double cap = max_uniform_inflow(*this);
    if (demand_.value > cap * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "inflow " << demand_.value << " exceeds the smallest road capacity " << cap;
      throw CapacityExceeded(msg.str());
    }
  }
}

std::vector<std::vector<int>> Network::incidence_matrix() const {
  std::vector<std::vector<int>> m(roads_.size(), std::vector<int>(routes_.size(), 0));
  for (std::size_t i = 0; i < roads_.size(); ++i) {
    for (std::size_t j = 0; j < routes_.size(); ++j) m[i][j] = incidence(i, j);
  }
  return m;
}

std::optional<std::size_t> Network::road_index(const std::string& id) const {
  for (std::size_t i = 0; i < roads_.size(); ++i) {
    if (roads_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Network::route_index(const std::string& id) const {
  for (std::size_t j = 0; j < routes_.size(); ++j) {
    if (routes_[j].id == id) return j;
  }
  return std::nullopt;
}

Network Network::with_demand(double value) const {
  return Network(roads_, routes_, Demand{demand_.kind, value});
}

Network Network::with_fixed_time(const std::string& id, double time) const {
  return with_behavior(id, FixedTime{time});
}

Network Network::with_behavior(const std::string& id, RoadBehavior behavior) const {
  const auto i = road_index(id);
  if (!i) invalid("unknown road '" + id + "'");
  std::vector<Road> roads = roads_;
  roads[*i].behavior = std::move(behavior);
  return Network(std::move(roads), routes_, demand_);
}

namespace {

void require_size(const Network& net, const FlowPartition& theta) {
  if (theta.size() != net.route_count()) {
    std::ostringstream msg;
    msg << "partition has " << theta.size() << " shares but the network has " << net.route_count() << " routes";
    throw ValidationError(msg.str());
  }
}

}  // namespace

std::vector<double> road_flows(const Network& net, const FlowPartition& theta) {
  require_size(net, theta);
  std::vector<double> flows(net.road_count(), 0.0);
  for (std::size_t i = 0; i < net.road_count(); ++i) {
    double share = 0.0;
    for (std::size_t j = 0; j < net.route_count(); ++j) {
      if (net.incidence(i, j) != 0) share += theta[j];
    }
    flows[i] = net.demand().value * share;
  }
  return flows;
}

std::vector<double> route_travel_times(const Network& net, const FlowPartition& theta) {
  const std::vector<double> flows = road_flows(net, theta);
  std::vector<double> road_times(net.road_count());
  for (std::size_t i = 0; i < net.road_count(); ++i) road_times[i] = road_time(net.roads()[i], flows[i]);

  std::vector<double> times(net.route_count(), 0.0);
  for (std::size_t j = 0; j < net.route_count(); ++j) {
    for (std::size_t i = 0; i < net.road_count(); ++i) {
      if (net.incidence(i, j) != 0) times[j] += road_times[i];
    }
  }
  return times;
}

double mean_global_travel_time(const Network& net, const FlowPartition& theta) {
  const std::vector<double> times = route_travel_times(net, theta);
  double total = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) total += theta[j] * times[j];
  return total;
}

std::vector<double> mean_travel_time_gradient(const Network& net, const FlowPartition& theta) {
  // T = sum_i tau_i(x_i) x_i / D with x_i = D Gamma_i theta, so
  // dT/dtheta_j = sum_i Gamma_ij (tau_i(x_i) + x_i tau_i'(x_i)).
  const std::vector<double> flows = road_flows(net, theta);
  std::vector<double> marginal(net.road_count());
  for (std::size_t i = 0; i < net.road_count(); ++i) {
    const Road& road = net.roads()[i];
    marginal[i] = road_time(road, flows[i]) + flows[i] * road_time_derivative(road, flows[i]);
  }
  std::vector<double> grad(net.route_count(), 0.0);
  for (std::size_t j = 0; j < net.route_count(); ++j) {
    for (std::size_t i = 0; i < net.road_count(); ++i) {
      if (net.incidence(i, j) != 0) grad[j] += marginal[i];
    }
  }
  return grad;
}

double max_uniform_inflow(const Network& net) {
  double cap = std::numeric_limits<double>::infinity();
  for (const Road& road : net.roads()) {
    if (std::holds_alternative<CountLatency>(road.behavior)) {
      throw DomainError("max_uniform_inflow needs a flux-model network");
    }
    if (const auto* s = std::get_if<StationaryFlow>(&road.behavior)) cap = std::min(cap, s->model.capacity());
  }
  return cap;
}

}  // namespace braess
