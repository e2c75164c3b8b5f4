#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace braess {

// Free-phase fundamental diagrams on the normalized density range [0, 1].
// The flow-maximizing density is scaled to 1 for every road, so q(1) is the
// road's capacity.

/// q(rho) = a * ln(1 + rho)
struct LogFlux {
  double a;
  friend bool operator==(const LogFlux&, const LogFlux&) = default;
};

/// q(rho) = (-1 + sqrt(1 + c * rho)) / b
struct SqrtFlux {
  double b;
  double c;
  friend bool operator==(const SqrtFlux&, const SqrtFlux&) = default;
};

/// q(rho) = v * rho
struct LinearFlux {
  double v;
  friend bool operator==(const LinearFlux&, const LinearFlux&) = default;
};

using FluxFamily = std::variant<LogFlux, SqrtFlux, LinearFlux>;

class FluxModel {
 public:
  /// Throws ValidationError unless every parameter is finite and positive.
  explicit FluxModel(FluxFamily family);

  static FluxModel log(double a) { return FluxModel(LogFlux{a}); }
  static FluxModel sqrt(double b, double c) { return FluxModel(SqrtFlux{b, c}); }
  static FluxModel linear(double v) { return FluxModel(LinearFlux{v}); }

  const FluxFamily& family() const noexcept { return family_; }
  std::string_view name() const noexcept;

  /// q(rho); rho must lie in [0, 1].
  double operator()(double rho) const;

  /// Analytic q', q'' or q''' (order 1..3) at rho in [0, 1].
  double derivative(double rho, int order) const;

  double capacity() const noexcept { return capacity_; }

  friend bool operator==(const FluxModel& lhs, const FluxModel& rhs) {
    return lhs.family_ == rhs.family_;
  }

 private:
  FluxFamily family_;
  double capacity_;
};

struct FluxViolation {
  std::string condition;
  double density;
  double value;
};

struct FluxValidationReport {
  bool passed = true;
  std::vector<FluxViolation> violations;
  // Sign of q''' is a sufficient condition for convex travel times, not part
  // of the admissibility checks; a positive q''' lands here and does not fail the model.
  std::vector<FluxViolation> warnings;
  std::size_t grid_points = 0;
};

double evaluate(const FluxModel& model, double rho);

/// Checks q(0) = 0, q' > 0, q'' <= 0 on a uniform grid using the analytic
/// derivatives. Requires grid_points >= 2.
FluxValidationReport validate(const FluxModel& model, std::size_t grid_points = 1001);

/// v(rho) = q(rho) / rho, continuously extended by q'(0) at rho = 0.
double velocity(const FluxModel& model, double rho);

/// The density rho in [0, 1] with q(rho) = flow, from the family's closed form.
/// Throws CapacityExceeded for flow < 0 or flow > q(1).
double invert_flow(const FluxModel& model, double flow);

/// Same as invert_flow but by bracketed Newton iteration on [0, 1]; used as an
/// independent check of the closed forms.
double invert_flow_numeric(const FluxModel& model, double flow);

/// 1 / v(rho(flow)): travel time per unit length at the given carried flow.
double slowness(const FluxModel& model, double flow);

/// d/dflow of slowness(model, flow).
double slowness_derivative(const FluxModel& model, double flow);

/// length / v(rho(flow)).
double road_travel_time(double length, const FluxModel& model, double flow);

}  // namespace braess
