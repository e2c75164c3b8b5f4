#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "braess/cli.hpp"
#include "braess/error.hpp"

int main(int argc, char** argv) {
  namespace cli = braess::cli;

  CLI::App app{"Stationary traffic equilibria, Braess paradox detection and speed-limit control"};
  app.require_subcommand(1);

  std::string scenario;
  std::string partition;
  std::string format = "text";
  std::string output;
  cli::CommandOptions options;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario file")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "records"}));
    sub->add_option("--tol", options.tol, "Equilibrium tolerance (time units)");
    sub->add_option("--epsilon", options.epsilon, "Nash deviation share");
    sub->add_option("--seed", options.seed, "Seed for sampled checks (default: BRAESS_KIT_SEED, then 42)");
  };

  auto* validate = app.add_subcommand("validate", "Check every flux model for concavity, monotonicity and q(0) = 0");
  add_common(validate);
  auto* analyze = app.add_subcommand("analyze", "Route times, equilibria and optima");
  add_common(analyze);
  analyze->add_option("--partition", partition, "Route shares, comma separated");
  auto* braess_cmd = app.add_subcommand("braess", "Paradox condition and Nash uniqueness certificate");
  add_common(braess_cmd);
  auto* control = app.add_subcommand("control", "Speed-limit control on the added road");
  add_common(control);
  auto* sweep = app.add_subcommand("sweep", "Grid sweep to CSV");
  add_common(sweep);
  sweep->add_option("--grid", options.grid, "name=lo:hi:n[,name=lo:hi:n]")->required();
  sweep->add_option("--output", output, "CSV path (stdout when omitted)");
  sweep->add_option("--partition", partition, "Fixed route shares for grids without theta axes");
  sweep->add_option("--threads", options.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code::usage;
  }

  try {
    if (!partition.empty()) options.partition = cli::parse_partition(partition);
  } catch (const braess::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::exit_code::usage;
  }
  if (!output.empty()) options.output = output;
  options.format = format == "records" ? cli::OutputFormat::Records : cli::OutputFormat::Text;

  const std::string command = app.get_subcommands().front()->get_name();
  return cli::run_command(command, scenario, options, std::cout, std::cerr);
}
