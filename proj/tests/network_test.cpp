#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "braess/error.hpp"
#include "braess/network.hpp"
#include "braess/paradox.hpp"
#include "oracles.hpp"

using namespace braess;

namespace {

Network two_road(double phi) {
  return Network({{"a", 1.5, StationaryFlow{FluxModel::sqrt(4.0, 8.0)}},
                  {"b", 1.0, StationaryFlow{FluxModel::sqrt(1.0, 1.0)}}},
                 {{"a", {"a"}}, {"b", {"b"}}}, Demand::inflow(phi));
}

BraessScenario count_scenario() {
  return BraessScenario(1.0, CountLatency{0.01, 0.0}, 1.0, CountLatency{0.0, 45.0}, 1.0, CountLatency{0.0, 0.0},
                        Demand::vehicles(4000.0));
}

std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(n);
  double sum = 0.0;
  for (auto& v : x) sum += (v = e(rng));
  for (auto& v : x) v /= sum;
  return x;
}

}  // namespace

TEST(Network, IncidenceOfFiveRoadNetwork) {
  const auto s = log_linear_scenario(0.33, 0.5, 0.05);
  const std::vector<std::vector<int>> expected{{1, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}};
  EXPECT_EQ(s.augmented().incidence_matrix(), expected);
  EXPECT_EQ(s.augmented().route_index("gamma"), 2u);
  EXPECT_FALSE(s.augmented().road_index("z").has_value());
}

TEST(Network, RoadFlows) {
  const auto s = log_linear_scenario(0.33, 0.5, 0.05);
  const auto flows = road_flows(s.augmented(), FlowPartition({0.0, 0.0, 1.0}));
  const std::vector<double> expected{0.05, 0.0, 0.0, 0.05, 0.05};
  EXPECT_EQ(flows, expected);

  const auto two = road_flows(two_road(0.4), FlowPartition({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(two[0], 0.4);
  EXPECT_DOUBLE_EQ(two[1], 0.0);

  const auto counts = road_flows(count_scenario().augmented(), FlowPartition({0.4375, 0.4375, 0.125}));
  EXPECT_DOUBLE_EQ(counts[0], 2250.0);
  EXPECT_DOUBLE_EQ(counts[1], 1750.0);
  EXPECT_DOUBLE_EQ(counts[4], 500.0);
}

TEST(Network, RouteTimesOfCountNetwork) {
  const auto s = count_scenario();
  const auto base = route_travel_times(s.base(), FlowPartition({0.5, 0.5}));
  EXPECT_NEAR(base[0], 65.0, 1e-12);
  EXPECT_NEAR(base[1], 65.0, 1e-12);
  const auto all_gamma = route_travel_times(s.augmented(), FlowPartition({0.0, 0.0, 1.0}));
  EXPECT_NEAR(all_gamma[2], 80.0, 1e-12);
  EXPECT_NEAR(all_gamma[0], 85.0, 1e-12);
}

TEST(Network, RouteTimesAtTwoRoadEquilibrium) {
  const auto times = route_travel_times(two_road(0.4), FlowPartition({0.5625, 0.4375}));
  EXPECT_NEAR(times[0], 2.175, 1e-13);
  EXPECT_NEAR(times[1], 2.175, 1e-13);
}

TEST(Network, MeanTravelTime) {
  EXPECT_NEAR(mean_global_travel_time(two_road(0.4), FlowPartition({0.0, 1.0})), 2.4, 1e-13);
  EXPECT_NEAR(mean_global_travel_time(two_road(0.4), FlowPartition({0.40625, 0.59375})), 2.1359375, 1e-13);
  for (double theta = 0.0; theta <= 1.0; theta += 0.05) {
    EXPECT_NEAR(mean_global_travel_time(two_road(0.3), FlowPartition({theta, 1.0 - theta})),
                braess::oracle::two_road_mean(theta, 0.3), 1e-12);
  }
  EXPECT_NEAR(mean_global_travel_time(count_scenario().augmented(), FlowPartition({0.4375, 0.4375, 0.125})),
              64.6875, 1e-9);
}

TEST(Network, MaxUniformInflow) {
  EXPECT_NEAR(max_uniform_inflow(two_road(0.4)), std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(max_uniform_inflow(log_linear_scenario(0.33, 0.5, 0.05).augmented()), 0.33, 1e-15);
  EXPECT_NEAR(max_uniform_inflow(log_linear_scenario(0.9, 0.8, 0.05).augmented()), std::log(2.0), 1e-15);
  EXPECT_THROW(max_uniform_inflow(count_scenario().augmented()), DomainError);
}

TEST(Network, RejectsMalformedInput) {
  const Road a{"a", 1.0, StationaryFlow{FluxModel::log(1.0)}};
  const Road b{"b", 1.0, StationaryFlow{FluxModel::linear(0.5)}};
  const Road count{"c", 1.0, CountLatency{1.0, 0.0}};
  EXPECT_THROW(Network({a, a}, {{"r", {"a"}}}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({a, b}, {{"r", {"z"}}}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({a, b}, {{"r", {"a", "a"}}}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({a, count}, {{"r", {"a", "c"}}}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({count}, {{"r", {"c"}}}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({a, b}, {{"r", {"a", "b"}}}, Demand::inflow(0.6)), CapacityExceeded);
  EXPECT_THROW(Network({a, b}, {}, Demand::inflow(0.1)), ValidationError);
  EXPECT_THROW(Network({{"a", -1.0, StationaryFlow{FluxModel::log(1.0)}}}, {{"r", {"a"}}}, Demand::inflow(0.1)),
               ValidationError);

  EXPECT_THROW(FlowPartition({0.5, 0.4}), ValidationError);
  EXPECT_THROW(FlowPartition({1.2, -0.2}), ValidationError);
  EXPECT_THROW(route_travel_times(two_road(0.4), FlowPartition({0.2, 0.3, 0.5})), ValidationError);
}

TEST(Network, PartitionWithRemainder) {
  const double leading[] = {0.25, 0.5};
  const auto p = FlowPartition::with_remainder(leading);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p[2], 0.25);
}

TEST(NetworkProperty, RoadFlowsConserveDemand) {
  std::mt19937_64 rng(3);
  const auto net = log_linear_scenario(0.33, 0.5, 0.05).augmented();
  for (int k = 0; k < 1000; ++k) {
    const auto theta = random_simplex_point(rng, 3);
    const auto flows = road_flows(net, FlowPartition(theta));
    // Roads a and b and road c and d are each crossed by all traffic once.
    EXPECT_NEAR(flows[0] + flows[2], 0.05, 1e-15);
    EXPECT_NEAR(flows[1] + flows[3], 0.05, 1e-15);
  }
}

TEST(NetworkProperty, RouteTimesAgreeWithDecomposition) {
  std::mt19937_64 rng(5);
  const auto s = log_linear_scenario(0.33, 0.5, 0.05);
  for (int k = 0; k < 500; ++k) {
    const auto theta = random_simplex_point(rng, 3);
    const auto times = route_travel_times(s.augmented(), FlowPartition(theta));
    const double share_a = theta[0] + theta[2];
    const double share_d = theta[1] + theta[2];
    EXPECT_NEAR(times[0], s.shared_time(share_a) + s.bypassed_time(theta[0]), 1e-13);
    EXPECT_NEAR(times[1], s.bypassed_time(theta[1]) + s.shared_time(share_d), 1e-13);
    EXPECT_NEAR(times[2], s.shared_time(share_a) + s.bridge_time(theta[2]) + s.shared_time(share_d), 1e-13);
    const auto literal = s.route_times(theta[0], theta[1]);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(times[j], literal[j], 1e-13);
  }
}

TEST(NetworkProperty, SymmetricRoutesHaveEqualTimesOnDiagonal) {
  const auto s = log_linear_scenario(0.33, 0.5, 0.05);
  for (int k = 0; k <= 50; ++k) {
    const double theta = k / 100.0;
    const auto times = s.route_times(theta, theta);
    EXPECT_NEAR(times[0], times[1], 1e-14);
  }
}

TEST(NetworkProperty, MeanTravelTimeIsConvex) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<Network> nets{log_linear_scenario(0.33, 0.5, 0.05).augmented(), two_road(0.4),
                                  count_scenario().augmented()};
  for (const auto& net : nets) {
    for (int k = 0; k < 1000; ++k) {
      const auto x = random_simplex_point(rng, net.route_count());
      const auto y = random_simplex_point(rng, net.route_count());
      const double lambda = unit(rng);
      std::vector<double> z(x.size());
      for (std::size_t j = 0; j < z.size(); ++j) z[j] = lambda * x[j] + (1.0 - lambda) * y[j];
      const double tz = mean_global_travel_time(net, FlowPartition(z));
      const double chord = lambda * mean_global_travel_time(net, FlowPartition(x)) +
                           (1.0 - lambda) * mean_global_travel_time(net, FlowPartition(y));
      EXPECT_LE(tz, chord + 1e-9 * (1.0 + std::abs(chord)));
    }
  }
}

TEST(NetworkProperty, MeanTimeGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  const auto net = log_linear_scenario(0.33, 0.5, 0.05).augmented();
  for (int k = 0; k < 100; ++k) {
    auto theta = random_simplex_point(rng, 3);
    // Keep away from the boundary so that the tangent moves stay feasible.
    for (auto& v : theta) v = 0.1 + 0.7 * v;
    const FlowPartition base(theta);
    const auto grad = mean_travel_time_gradient(net, base);
    for (std::size_t i = 0; i < 2; ++i) {
      // Move mass between route i and route 2 along the simplex.
      auto shifted = [&](double h) {
        std::vector<double> p(base.shares().begin(), base.shares().end());
        p[i] += h;
        p[2] -= h;
        return mean_global_travel_time(net, FlowPartition(p));
      };
      const double fd = braess::oracle::central_difference(shifted, 0.0, 1e-6);
      const double exact = grad[i] - grad[2];
      EXPECT_NEAR(fd, exact, 1e-4 * (1.0 + std::abs(exact)));
    }
  }
}
