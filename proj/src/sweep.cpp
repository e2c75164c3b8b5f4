#include "braess/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "braess/error.hpp"

namespace braess {
namespace {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<SweepVariable> variable_from(std::string_view name) {
  if (name == "theta1") return SweepVariable::Theta1;
  if (name == "theta2") return SweepVariable::Theta2;
  if (name == "phi") return SweepVariable::Inflow;
  if (name == "V") return SweepVariable::Speed;
  if (name == "vtilde") return SweepVariable::BridgeSpeed;
  if (name == "tau_tilde") return SweepVariable::BridgeTime;
  return std::nullopt;
}

struct RowSetup {
  std::size_t theta_axes = 0;
  bool braess_base = false;  // evaluate the four-road network of a Braess pair
  std::size_t routes = 0;
};

const BraessScenario& require_braess(const Scenario& s, SweepVariable v) {
  if (!s.braess) {
    throw UsageError("sweep variable " + std::string(to_string(v)) + " needs a scenario with a [braess] block");
  }
  return *s.braess;
}

// Network for one grid point with every non-partition axis applied.
Network row_network(const Scenario& s, const SweepGrid& grid, const std::vector<double>& values, bool base) {
  std::optional<BraessScenario> pair = s.braess;
  std::optional<Network> plain = pair ? std::nullopt : std::optional<Network>(s.network);
  std::optional<double> pinned;
  for (std::size_t a = 0; a < grid.axes.size(); ++a) {
    const double v = values[a];
    switch (grid.axes[a].variable) {
      case SweepVariable::Theta1:
      case SweepVariable::Theta2:
        break;
      case SweepVariable::Inflow:
        if (pair) pair = pair->with_demand(v);
        else plain = plain->with_demand(v);
        break;
      case SweepVariable::Speed:
        pair = pair->with_bypassed(StationaryFlow{FluxModel::linear(v)});
        break;
      case SweepVariable::BridgeSpeed:
        pair = pair->with_bridge(StationaryFlow{FluxModel::linear(v)});
        break;
      case SweepVariable::BridgeTime:
        pinned = v;
        break;
    }
  }
  if (!pair) return *plain;
  if (base) return pair->base();
  return pinned ? pair->controlled(*pinned) : pair->augmented();
}

}  // namespace

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::Theta1: return "theta1";
    case SweepVariable::Theta2: return "theta2";
    case SweepVariable::Inflow: return "phi";
    case SweepVariable::Speed: return "V";
    case SweepVariable::BridgeSpeed: return "vtilde";
    case SweepVariable::BridgeTime: return "tau_tilde";
  }
  return "?";
}

double SweepAxis::node(std::size_t k) const {
  if (k == 0) return lower;
  if (k + 1 == resolution) return upper;
  return lower + (upper - lower) * static_cast<double>(k) / static_cast<double>(resolution - 1);
}

std::size_t SweepGrid::rows() const {
  std::size_t n = 1;
  for (const SweepAxis& a : axes) n *= a.resolution;
  return n;
}

SweepGrid parse_grid(std::string_view spec) {
  SweepGrid grid;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);

    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw UsageError("grid axis '" + std::string(item) + "' is not name=lo:hi:n");
    const auto variable = variable_from(item.substr(0, eq));
    if (!variable) throw UsageError("unknown grid variable '" + std::string(item.substr(0, eq)) + "'");
    const std::string_view range = item.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : range.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw UsageError("grid axis '" + std::string(item) + "' is not name=lo:hi:n");
    const auto lo = parse_number(range.substr(0, c1));
    const auto hi = parse_number(range.substr(c1 + 1, c2 - c1 - 1));
    const auto n = parse_number(range.substr(c2 + 1));
    if (!lo || !hi || !n || *n != std::floor(*n) || *n < 2 || *n > 1e7 || *hi < *lo) {
      throw UsageError("grid axis '" + std::string(item) + "' needs finite lo <= hi and integer resolution >= 2");
    }
    for (const SweepAxis& a : grid.axes) {
      if (a.variable == *variable) throw UsageError("grid variable '" + std::string(to_string(*variable)) + "' repeated");
    }
    grid.axes.push_back({*variable, *lo, *hi, static_cast<std::size_t>(*n)});
  }
  if (grid.axes.empty() || grid.axes.size() > 2) throw UsageError("a sweep grid has one or two axes");
  return grid;
}

std::string run_sweep(const Scenario& scenario, const SweepGrid& grid, const SweepOptions& options) {
  RowSetup setup;
  bool has_theta2 = false;
  for (const SweepAxis& a : grid.axes) {
    if (a.variable == SweepVariable::Theta1 || a.variable == SweepVariable::Theta2) ++setup.theta_axes;
    if (a.variable == SweepVariable::Theta2) has_theta2 = true;
    if (a.variable == SweepVariable::Speed || a.variable == SweepVariable::BridgeSpeed ||
        a.variable == SweepVariable::BridgeTime) {
      require_braess(scenario, a.variable);
    }
  }
  if (has_theta2 && setup.theta_axes == 1) throw UsageError("theta2 axis requires a theta1 axis");

  // A Braess pair is evaluated on the four-road network when the partition
  // has two shares, on the five-road network otherwise.
  std::size_t shares = scenario.network.route_count();
  if (setup.theta_axes > 0) shares = setup.theta_axes + 1;
  else if (options.partition) shares = options.partition->size();
  if (scenario.braess && shares == 2) {
    setup.braess_base = true;
    for (const SweepAxis& a : grid.axes) {
      if (a.variable == SweepVariable::BridgeSpeed || a.variable == SweepVariable::BridgeTime) {
        throw UsageError("bridge variables need the five-road network (three route shares)");
      }
    }
  }
  const Network& shape = setup.braess_base ? scenario.braess->base() : scenario.network;
  setup.routes = shape.route_count();
  if (shares != setup.routes) {
    throw UsageError("partition has " + std::to_string(shares) + " shares but the network has " +
                     std::to_string(setup.routes) + " routes");
  }

  std::ostringstream header;
  for (const SweepAxis& a : grid.axes) header << to_string(a.variable) << ',';
  for (const Route& r : shape.routes()) header << "share_" << r.id << ',';
  for (const Route& r : shape.routes()) header << "tau_" << r.id << ',';
  header << "T,feasible\n";

  const std::size_t rows = grid.rows();
  std::vector<std::string> lines(rows);
  auto evaluate_row = [&](std::size_t row) {
    std::vector<double> values(grid.axes.size());
    std::size_t rem = row;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      values[a] = grid.axes[a].node(rem % grid.axes[a].resolution);
      rem /= grid.axes[a].resolution;
    }
    std::vector<double> share(setup.routes, std::nan(""));
    std::vector<double> tau(setup.routes, std::nan(""));
    double mean = std::nan("");
    bool feasible = false;
    try {
      const Network net = row_network(scenario, grid, values, setup.braess_base);
      std::optional<FlowPartition> theta;
      if (setup.theta_axes > 0) {
        std::vector<double> leading;
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
          if (grid.axes[a].variable == SweepVariable::Theta1) leading.insert(leading.begin(), values[a]);
          if (grid.axes[a].variable == SweepVariable::Theta2) leading.push_back(values[a]);
        }
        theta = FlowPartition::with_remainder(leading);
      } else if (options.partition) {
        theta = FlowPartition(*options.partition);
      } else {
        theta = find_wardrop(net).partition;
      }
      const std::vector<double> times = route_travel_times(net, *theta);
      for (std::size_t j = 0; j < setup.routes; ++j) {
        share[j] = (*theta)[j];
        tau[j] = times[j];
      }
      mean = mean_global_travel_time(net, *theta);
      feasible = true;
    } catch (const Error&) {
      // capacity, simplex or convergence failure: keep the row, flagged
    }
    std::string line;
    for (double v : values) line += csv_number(v) + ',';
    for (double v : share) line += csv_number(v) + ',';
    for (double v : tau) line += csv_number(v) + ',';
    line += csv_number(mean);
    line += feasible ? ",true\n" : ",false\n";
    lines[row] = std::move(line);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(rows)));
  if (threads == 1) {
    for (std::size_t r = 0; r < rows; ++r) evaluate_row(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < rows; r += threads) evaluate_row(r);
      });
    }
  }

  std::string out = header.str();
  for (const std::string& line : lines) out += line;
  return out;
}

}  // namespace braess
