#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braess/scenario.hpp"

namespace braess {

enum class SweepVariable { Theta1, Theta2, Inflow, Speed, BridgeSpeed, BridgeTime };

std::string_view to_string(SweepVariable variable);

struct SweepAxis {
  SweepVariable variable = SweepVariable::Theta1;
  double lower = 0.0;
  double upper = 1.0;
  std::size_t resolution = 2;

  /// k-th node, endpoints exact.
  double node(std::size_t k) const;
};

struct SweepGrid {
  std::vector<SweepAxis> axes;
  std::size_t rows() const;
};

/// Parses `name=lo:hi:n[,name=lo:hi:n]` with names theta1, theta2, phi, V,
/// vtilde, tau_tilde. Throws UsageError.
SweepGrid parse_grid(std::string_view spec);

struct SweepOptions {
  /// Fixed partition for grids without theta axes. Without it each row uses
  /// the Wardrop equilibrium of that row's network.
  std::optional<std::vector<double>> partition;
  unsigned threads = 1;
};

/// CSV with one row per grid point, row-major over the axes. Columns: axis
/// values, share per route, travel time per route, T, feasible. Rows that
/// violate capacity or the simplex are kept with feasible=false and nan
/// values. Output is byte-identical for any thread count.
std::string run_sweep(const Scenario& scenario, const SweepGrid& grid, const SweepOptions& options = {});

}  // namespace braess
