#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braess/scenario.hpp"

namespace braess::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int parse = 3;
inline constexpr int validation = 4;
inline constexpr int numeric = 5;
inline constexpr int certification = 6;
inline constexpr int io = 7;
}  // namespace exit_code

enum class OutputFormat { Text, Records };

struct CommandOptions {
  std::optional<std::vector<double>> partition;
  std::optional<double> tol;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::Text;
  unsigned threads = 1;
};

/// Comma-separated floats, e.g. "0.5,0.5". Throws UsageError.
std::vector<double> parse_partition(std::string_view text);

/// Scenario defaults overridden by explicit flags, then by BRAESS_KIT_SEED for
/// the seed when --seed is absent.
Tolerances effective_tolerances(const Scenario& scenario, const CommandOptions& options);

int cmd_validate(const Scenario& scenario, const CommandOptions& options, std::ostream& out);
int cmd_analyze(const Scenario& scenario, const CommandOptions& options, std::ostream& out);
int cmd_braess(const Scenario& scenario, const CommandOptions& options, std::ostream& out);
int cmd_control(const Scenario& scenario, const CommandOptions& options, std::ostream& out);
int cmd_sweep(const Scenario& scenario, const CommandOptions& options, std::ostream& out);

/// Parses the scenario, dispatches `command`, and maps library errors onto exit
/// codes with a diagnostic on `err`.
int run_command(std::string_view command, const std::filesystem::path& scenario_path, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace braess::cli
