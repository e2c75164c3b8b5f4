#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "braess/equilibria.hpp"
#include "braess/network.hpp"
#include "braess/paradox.hpp"

namespace braess {

/// Overridable analysis defaults carried by a scenario file.
struct AnalysisDefaults {
  Tolerances tolerances;
  std::size_t grid = 1001;

  friend bool operator==(const AnalysisDefaults& lhs, const AnalysisDefaults& rhs) {
    const Tolerances& l = lhs.tolerances;
    const Tolerances& r = rhs.tolerances;
    return l.equilibrium == r.equilibrium && l.nash_epsilon == r.nash_epsilon && l.pareto_radius == r.pareto_radius &&
           l.pareto_samples == r.pareto_samples && l.seed == r.seed && lhs.grid == rhs.grid;
  }
};

/// A parsed scenario file: a plain network, or a Braess pair when the file has
/// a [braess] block.
struct Scenario {
  Network network;
  std::optional<BraessScenario> braess;
  AnalysisDefaults defaults;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the sectioned `key = value` format. Throws ParseError (with line and
/// column) for syntax problems and ValidationError for inconsistent networks.
Scenario parse_scenario_text(std::string_view text);

/// Reads and parses a scenario file. Throws IoError if it cannot be read.
Scenario parse_scenario(const std::filesystem::path& path);

/// Canonical serialization; parse_scenario_text(write_scenario(s)) == s.
std::string write_scenario(const Scenario& scenario);

/// Parses a decimal, a fraction p/q, or one of the named constants
/// `sqrt2-1`, `ln2`. Returns nullopt on malformed or non-finite input.
std::optional<double> parse_number(std::string_view text);

}  // namespace braess
