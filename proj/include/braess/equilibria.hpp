#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "braess/network.hpp"
#include "braess/simplex.hpp"

namespace braess {

/// Defaults shared by the predicates, the solvers and the CLI.
struct Tolerances {
  double equilibrium = 1e-7;  ///< time units
  double nash_epsilon = 1e-4; ///< share moved by a deviating group
  double pareto_radius = 1e-2;
  std::size_t pareto_samples = 1000;
  std::uint64_t seed = 42;
};

/// One deviation theta + eps e_to - eps e_from tested against Definition 2.4.
struct Deviation {
  std::size_t to = 0;
  std::size_t from = 0;
  double deviated_time = 0.0;  ///< tau_to after the move
  double reference_time = 0.0; ///< tau_from before the move
  bool accepted = false;
};

struct Certificate {
  std::vector<double> route_times;
  std::vector<bool> relevant;
  /// max - min over relevant route times.
  double relevant_spread = 0.0;
  std::vector<Deviation> deviations;
  /// min over deviations of deviated_time - reference_time.
  std::optional<double> deviation_margin;
  bool passed = false;
  std::string note;
};

struct PredicateResult {
  bool holds = false;
  double equilibrium_time = 0.0;
  Certificate certificate;
};

struct ParetoResult {
  bool holds = false;
  std::size_t samples_tested = 0;
  /// A perturbed partition that lowers some route time and raises none.
  std::optional<std::vector<double>> counterexample;
  std::vector<double> counterexample_times;
  std::string note;
};

enum class ResultKind { Equilibrium, EquilibriumCandidate, LocalNash, SocialOptimum };

std::string_view to_string(ResultKind kind);

struct EquilibriumResult {
  FlowPartition partition;
  /// Common time of the used routes; for a social optimum, T at the optimum.
  double equilibrium_time = 0.0;
  double mean_time = 0.0;
  /// Minimized objective: Beckmann potential or T.
  double objective = 0.0;
  ResultKind kind = ResultKind::Equilibrium;
  Certificate certificate;
  std::size_t iterations = 0;
  double stationarity = 0.0;
};

PredicateResult is_equilibrium(const Network& net, const FlowPartition& theta, double tol = 1e-7);

/// Pairwise-swap Nash test. Throws DomainError if epsilon exceeds the available
/// share on every route (no deviation can be formed).
PredicateResult is_local_nash(const Network& net, const FlowPartition& theta, double epsilon = 1e-4,
                              double tol = 1e-7);

/// Random-sampling Pareto test within radius of theta. A false result carries a
/// counterexample; a true result is evidence, not proof.
ParetoResult is_local_pareto(const Network& net, const FlowPartition& theta, double radius = 1e-2,
                             std::size_t samples = 1000, std::uint64_t seed = 42, double tol = 1e-12);

/// sum over roads of the integral of road time up to the carried load.
double beckmann_potential(const Network& net, const FlowPartition& theta);
/// Gradient of beckmann_potential: demand * route travel times.
std::vector<double> beckmann_gradient(const Network& net, const FlowPartition& theta);

/// Minimizer of T over the simplex. Throws NumericError on non-convergence.
EquilibriumResult social_optimum(const Network& net, const SimplexMinimizerOptions& options = {});

/// Wardrop equilibrium as the Beckmann minimizer, then certified with
/// is_equilibrium and is_local_nash. Uncertified results come back with kind
/// EquilibriumCandidate.
EquilibriumResult find_wardrop(const Network& net, const Tolerances& tolerances = {},
                               const SimplexMinimizerOptions& options = {});

}  // namespace braess
