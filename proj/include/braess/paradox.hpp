#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "braess/equilibria.hpp"
#include "braess/network.hpp"

namespace braess {

/// The four-road network (routes alpha = (a, b), beta = (c, d)) and its
/// five-road extension by road e with route gamma = (a, e, d).
///
/// Roads a and d are identical, as are b and c, so both networks are built from
/// three road descriptions. Route shares on the augmented network are ordered
/// (alpha, beta, gamma).
class BraessScenario {
 public:
  /// `shared` describes a and d (the legs gamma keeps), `bypassed` b and c,
  /// `bridge` the added road e. Road ids are taken from the ids array in the
  /// order a, b, c, d, e.
  BraessScenario(double shared_length, RoadBehavior shared, double bypassed_length, RoadBehavior bypassed,
                 double bridge_length, RoadBehavior bridge, Demand demand,
                 std::array<std::string, 5> ids = {"a", "b", "c", "d", "e"});

  /// Builds a scenario from five explicit roads, checking a == d and b == c up
  /// to their ids. Throws ValidationError.
  static BraessScenario from_roads(const Road& a, const Road& b, const Road& c, const Road& d, const Road& e,
                                   Demand demand);

  const Network& base() const noexcept { return base_; }
  const Network& augmented() const noexcept { return augmented_; }
  const Demand& demand() const noexcept { return augmented_.demand(); }
  const Road& shared_road() const { return augmented_.roads()[0]; }
  const Road& bypassed_road() const { return augmented_.roads()[1]; }
  const Road& bridge_road() const { return augmented_.roads()[4]; }
  const std::array<std::string, 5>& ids() const noexcept { return ids_; }

  /// Road travel times as functions of the carried share s in [0, 1]:
  /// tau_a(s), tau_b(s), tau_e(s) and their derivatives in s.
  double shared_time(double share) const;
  double bypassed_time(double share) const;
  double bridge_time(double share) const;
  double shared_time_slope(double share) const;
  double bypassed_time_slope(double share) const;

  /// Route times (alpha, beta, gamma) for shares theta1 on alpha, theta2 on beta, the rest on gamma.
  std::vector<double> route_times(double theta1, double theta2) const;

  BraessScenario with_demand(double value) const;
  BraessScenario with_bypassed(RoadBehavior behavior) const;
  BraessScenario with_bridge(RoadBehavior behavior) const;
  /// Augmented network with road e pinned to a constant travel time.
  Network controlled(double bridge_time) const;

  friend bool operator==(const BraessScenario& lhs, const BraessScenario& rhs) {
    return lhs.augmented_ == rhs.augmented_ && lhs.ids_ == rhs.ids_;
  }

 private:
  std::array<std::string, 5> ids_;
  Network base_;
  Network augmented_;
};

/// log flux on a and d, linear flux with speed `speed` on b and c, linear flux
/// with speed `bridge_speed` on e, unit lengths, inflow phi.
BraessScenario log_linear_scenario(double speed, double bridge_speed, double phi);

struct BraessReport {
  /// (tau_alpha(1/2, 1/2), tau_gamma(0, 0), tau_alpha(0, 0))
  std::array<double, 3> condition_bounds{};
  bool paradox = false;
  /// An inequality holds with equality up to the strictness margin.
  bool marginal = false;
  double base_optimum_time = 0.0;
  double augmented_nash_time = 0.0;
  std::vector<double> augmented_nash_partition;
  double degradation = 0.0;
};

/// Throws ValidationError if both tau_a and tau_b are constant.
BraessReport braess_condition(const BraessScenario& scenario);

struct ReducedInequality {
  double lower = 0.0;  ///< (e^phi - 1) / phi
  double middle = 0.0; ///< 1/V - 1/v_tilde
  double upper = 0.0;  ///< (2/phi)(e^phi - e^(phi/2))
  bool holds = false;
};

/// Closed-form paradox test for log_linear_scenario. Throws DomainError unless
/// 0 < phi <= min(ln 2, V, v_tilde).
ReducedInequality reduced_braess_inequality(double speed, double bridge_speed, double phi);

struct CornerCheck {
  std::vector<double> partition;
  bool is_nash = false;
};

struct UniquenessCertificate {
  std::size_t grid_points = 0;
  /// Diagonal points theta in (0, 1/2) where tau_alpha = tau_gamma at (theta, theta).
  std::vector<double> interior_roots;
  std::vector<CornerCheck> corners;
  bool no_interior_equilibrium = false;
  bool corners_rejected = false;
  bool certified = false;
  std::string note;
};

/// Sweeps the symmetric diagonal for interior equilibria and tests the corner
/// partitions (1, 0, 0) and (0, 1, 0), as in the uniqueness argument.
UniquenessCertificate nash_uniqueness_certificate(const BraessScenario& scenario, std::size_t grid = 1001,
                                                  const Tolerances& tolerances = {});

}  // namespace braess
