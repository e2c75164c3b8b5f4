#pragma once

#include <functional>
#include <span>
#include <vector>

namespace braess {

/// Euclidean projection onto {x >= 0, sum x = 1} (sort-and-threshold).
std::vector<double> project_to_simplex(std::span<const double> point);

struct SimplexMinimizerOptions {
  /// Stop once the spread of gradient components over the support of x, and
  /// the reduced-gradient sign condition off the support, fall below
  /// tolerance * (1 + max |gradient|).
  double tolerance = 1e-11;
  std::size_t max_iterations = 20000;
};

struct SimplexMinimizerResult {
  std::vector<double> point;
  std::vector<double> gradient;
  std::size_t iterations = 0;
  double stationarity = 0.0;
  bool converged = false;
};

/// Minimizes a convex differentiable function over the probability simplex by
/// projected gradient with an exact line search on the directional derivative.
/// Only the gradient is needed. The start point must lie on the simplex.
SimplexMinimizerResult minimize_on_simplex(
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::vector<double> start, const SimplexMinimizerOptions& options = {});

}  // namespace braess
