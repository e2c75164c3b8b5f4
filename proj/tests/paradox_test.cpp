#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "braess/error.hpp"
#include "braess/paradox.hpp"
#include "oracles.hpp"

using namespace braess;
using braess::oracle::log_road_time;

namespace {

BraessScenario count_scenario() {
  return BraessScenario(1.0, CountLatency{0.01, 0.0}, 1.0, CountLatency{0.0, 45.0}, 1.0, CountLatency{0.0, 0.0},
                        Demand::vehicles(4000.0));
}

}  // namespace

TEST(Paradox, ConditionBoundsForLogLinearScenario) {
  const double V = 0.33;
  const double phi = 0.05;
  const auto report = braess_condition(log_linear_scenario(V, 0.5, phi));
  EXPECT_NEAR(report.condition_bounds[0], log_road_time(0.5, phi) + 1.0 / V, 1e-12);
  EXPECT_NEAR(report.condition_bounds[1], 2.0 * log_road_time(1.0, phi) + 2.0, 1e-12);
  EXPECT_NEAR(report.condition_bounds[2], log_road_time(1.0, phi) + 1.0 / V, 1e-12);
  EXPECT_NEAR(report.condition_bounds[0], 4.042908, 1e-6);
  EXPECT_NEAR(report.condition_bounds[1], 4.050844, 1e-6);
  EXPECT_NEAR(report.condition_bounds[2], 4.055725, 1e-6);
  EXPECT_TRUE(report.paradox);
  EXPECT_FALSE(report.marginal);
  EXPECT_GT(report.degradation, 0.0);
  EXPECT_EQ(report.augmented_nash_partition, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(Paradox, ConditionForCountScenario) {
  const auto report = braess_condition(count_scenario());
  EXPECT_NEAR(report.condition_bounds[0], 65.0, 1e-12);
  EXPECT_NEAR(report.condition_bounds[1], 80.0, 1e-12);
  EXPECT_NEAR(report.condition_bounds[2], 85.0, 1e-12);
  EXPECT_TRUE(report.paradox);
  EXPECT_NEAR(report.degradation, 15.0, 1e-12);
}

TEST(Paradox, SlowBridgeRemovesParadox) {
  const auto report = braess_condition(log_linear_scenario(0.33, 0.33, 0.05));
  EXPECT_FALSE(report.paradox);
  EXPECT_LE(report.degradation, 1e-9);
  EXPECT_FALSE(reduced_braess_inequality(0.33, 0.33, 0.05).holds);
}

TEST(Paradox, ConstantTimesAreRejected) {
  const BraessScenario flat(1.0, StationaryFlow{FluxModel::linear(1.0)}, 1.0, StationaryFlow{FluxModel::linear(0.5)},
                            1.0, StationaryFlow{FluxModel::linear(2.0)}, Demand::inflow(0.1));
  EXPECT_THROW(braess_condition(flat), ValidationError);
}

TEST(Paradox, FromRoadsRequiresSymmetry) {
  const Road a{"a", 1.0, StationaryFlow{FluxModel::log(1.0)}};
  const Road b{"b", 1.0, StationaryFlow{FluxModel::linear(0.33)}};
  const Road d_bad{"d", 2.0, StationaryFlow{FluxModel::log(1.0)}};
  const Road c{"c", 1.0, StationaryFlow{FluxModel::linear(0.33)}};
  const Road e{"e", 1.0, StationaryFlow{FluxModel::linear(0.5)}};
  EXPECT_THROW(BraessScenario::from_roads(a, b, c, d_bad, e, Demand::inflow(0.05)), ValidationError);
  const Road d{"d", 1.0, StationaryFlow{FluxModel::log(1.0)}};
  EXPECT_EQ(BraessScenario::from_roads(a, b, c, d, e, Demand::inflow(0.05)).augmented(),
            log_linear_scenario(0.33, 0.5, 0.05).augmented());
}

TEST(Paradox, ReducedInequalityValues) {
  const double phi = 0.05;
  const auto r = reduced_braess_inequality(0.33, 0.5, phi);
  EXPECT_NEAR(r.lower, 1.025422, 1e-6);
  EXPECT_NEAR(r.middle, 1.030303, 1e-6);
  // 2 tau_a(1) - tau_a(1/2), the gap between the outer and inner bounds of the condition.
  EXPECT_NEAR(r.upper, 2.0 * log_road_time(1.0, phi) - log_road_time(0.5, phi), 1e-14);
  EXPECT_NEAR(r.upper, 1.038239, 1e-6);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(reduced_braess_inequality(0.33, 0.5, 0.4), DomainError);
}

TEST(ParadoxProperty, ReducedInequalityMatchesCondition) {
  int paradoxes = 0;
  int cases = 0;
  for (int i = 0; i < 10; ++i) {
    const double V = 0.2 + 0.05 * i;
    for (int j = 0; j < 10; ++j) {
      const double middle = 0.98 + 0.01 * j;
      const double vtilde = 1.0 / (1.0 / V - middle);
      for (double phi : {0.01, 0.03, 0.05, 0.1, 0.15}) {
        if (phi > std::min({std::log(2.0), V, vtilde})) continue;
        const bool reduced = reduced_braess_inequality(V, vtilde, phi).holds;
        const bool full = braess_condition(log_linear_scenario(V, vtilde, phi)).paradox;
        EXPECT_EQ(reduced, full) << "V=" << V << " vtilde=" << vtilde << " phi=" << phi;
        paradoxes += full ? 1 : 0;
        ++cases;
      }
    }
  }
  EXPECT_GT(paradoxes, 0);
  EXPECT_LT(paradoxes, cases);
}

TEST(ParadoxProperty, AugmentedTimesWithoutBridgeEqualBaseTimes) {
  const auto s = log_linear_scenario(0.33, 0.5, 0.05);
  for (int k = 0; k <= 20; ++k) {
    const double theta = k / 20.0;
    const auto five = route_travel_times(s.augmented(), FlowPartition({theta, 1.0 - theta, 0.0}));
    const auto four = route_travel_times(s.base(), FlowPartition({theta, 1.0 - theta}));
    EXPECT_NEAR(five[0], four[0], 1e-14);
    EXPECT_NEAR(five[1], four[1], 1e-14);
  }
}

TEST(ParadoxProperty, ParadoxImpliesNashCornerAndDegradation) {
  for (double vtilde : {0.45, 0.5, 0.6}) {
    const auto s = log_linear_scenario(0.33, vtilde, 0.05);
    const auto report = braess_condition(s);
    if (!report.paradox) continue;
    EXPECT_TRUE(is_local_nash(s.augmented(), FlowPartition({0.0, 0.0, 1.0}), 1e-4).holds);
    EXPECT_GT(report.augmented_nash_time, social_optimum(s.base()).mean_time);
  }
}

TEST(Paradox, UniquenessCertificateForParadoxScenarios) {
  const auto cert = nash_uniqueness_certificate(log_linear_scenario(0.33, 0.5, 0.05));
  EXPECT_TRUE(cert.certified);
  EXPECT_TRUE(cert.interior_roots.empty());
  ASSERT_EQ(cert.corners.size(), 2u);
  EXPECT_FALSE(cert.corners[0].is_nash);
  EXPECT_TRUE(nash_uniqueness_certificate(count_scenario()).certified);
}

TEST(Paradox, UniquenessCertificateFindsInteriorRoot) {
  // With 1/V - 1/v_tilde between tau_a(1/2) and tau_a(1) the diagonal has an equilibrium.
  const double V = 0.33;
  const double gap = 1.02;
  const double phi = 0.05;
  ASSERT_LT(log_road_time(0.5, phi), gap);
  ASSERT_GT(log_road_time(1.0, phi), gap);
  const auto s = log_linear_scenario(V, 1.0 / (1.0 / V - gap), phi);
  const auto cert = nash_uniqueness_certificate(s);
  EXPECT_FALSE(cert.certified);
  ASSERT_EQ(cert.interior_roots.size(), 1u);
  EXPECT_NEAR(s.shared_time(1.0 - cert.interior_roots[0]), gap, 1e-9);
  EXPECT_THROW(nash_uniqueness_certificate(s, 2), DomainError);
}
