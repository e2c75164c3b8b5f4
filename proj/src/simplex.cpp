#include "braess/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "braess/error.hpp"

namespace braess {
namespace {

constexpr double kSupportDust = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Violation of the first-order optimality conditions on the simplex:
// gradient constant on the support and no smaller off it.
double stationarity(std::span<const double> x, std::span<const double> g) {
  double support_max = -std::numeric_limits<double>::infinity();
  double support_min = std::numeric_limits<double>::infinity();
  double global_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    global_min = std::min(global_min, g[j]);
    if (x[j] > kSupportDust) {
      support_max = std::max(support_max, g[j]);
      support_min = std::min(support_min, g[j]);
    }
  }
  return std::max(support_max - support_min, support_max - global_min);
}

}  // namespace

std::vector<double> project_to_simplex(std::span<const double> point) {
  if (point.empty()) throw DomainError("cannot project an empty vector");
  std::vector<double> sorted(point.begin(), point.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) threshold = candidate;
  }
  std::vector<double> projected(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) projected[j] = std::max(point[j] - threshold, 0.0);
  return projected;
}

SimplexMinimizerResult minimize_on_simplex(
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::vector<double> start, const SimplexMinimizerOptions& options) {
  const std::size_t n = start.size();
  SimplexMinimizerResult result;
  std::vector<double> x = std::move(start);
  std::vector<double> g = gradient(x);

  auto spread = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  double step = 1.0 / std::max(spread(g), 1e-12);

  std::vector<double> trial(n), direction(n), candidate(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double scale = 1.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    result.stationarity = stationarity(x, g);
    if (n == 1 || result.stationarity <= options.tolerance * scale) {
      result.converged = true;
      result.iterations = it;
      break;
    }

    for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] - step * g[j];
    const std::vector<double> target = project_to_simplex(trial);
    double length = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      direction[j] = target[j] - x[j];
      length = std::max(length, std::abs(direction[j]));
    }
    if (length == 0.0) {
      // Stationary at this step size but the tolerance test disagrees: the
      // step is too short to move off a face. Enlarge it.
      step *= 4.0;
      continue;
    }

    auto slope = [&](double t) {
      for (std::size_t j = 0; j < n; ++j) candidate[j] = x[j] + t * direction[j];
      return dot(gradient(candidate), direction);
    };
    double t = 1.0;
    if (slope(1.0) > 0.0) {
      std::uintmax_t max_iter = 200;
      const auto bracket = boost::math::tools::toms748_solve(
          slope, 0.0, 1.0, dot(g, direction), slope(1.0),
          boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), max_iter);
      t = 0.5 * (bracket.first + bracket.second);
    }

    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) next[j] = std::max(x[j] + t * direction[j], 0.0);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= total;
    std::vector<double> next_g = gradient(next);

    double dx_dx = 0.0;
    double dx_dg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = next[j] - x[j];
      dx_dx += dx * dx;
      dx_dg += dx * (next_g[j] - g[j]);
    }
    step = dx_dg > 0.0 ? dx_dx / dx_dg : step * 4.0;
    step = std::clamp(step, 1e-12, 1e12);

    x = std::move(next);
    g = std::move(next_g);
    result.iterations = it + 1;
  }
  if (!result.converged) {
    result.stationarity = stationarity(x, g);
  }
  result.point = std::move(x);
  result.gradient = std::move(g);
  return result;
}

}  // namespace braess
