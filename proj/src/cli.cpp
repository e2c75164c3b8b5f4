#include "braess/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "braess/control.hpp"
#include "braess/error.hpp"
#include "braess/sweep.hpp"

namespace braess::cli {
namespace {

// Writes either indented "key: value" text or flat "section.key=value" records.
class Emitter {
 public:
  Emitter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void section(std::string name) {
    section_ = std::move(name);
    if (format_ == OutputFormat::Text) out_ << section_ << '\n';
  }

  void field(std::string_view key, std::string_view value) {
    if (format_ == OutputFormat::Text) out_ << "  " << key << ": " << value << '\n';
    else out_ << section_ << '.' << key << '=' << value << '\n';
  }
  void field(std::string_view key, double value) { field(key, number(value)); }
  void field(std::string_view key, bool value) { field(key, std::string_view(value ? "true" : "false")); }
  void field(std::string_view key, std::size_t value) { field(key, std::to_string(value)); }
  void field(std::string_view key, const std::vector<double>& values) {
    std::string joined;
    for (std::size_t k = 0; k < values.size(); ++k) joined += (k ? "," : "") + number(values[k]);
    field(key, joined);
  }
  void field(std::string_view key, std::span<const double> values) {
    field(key, std::vector<double>(values.begin(), values.end()));
  }

 private:
  std::string number(double v) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, format_ == OutputFormat::Text ? "%.10g" : "%.17g", v);
    return buf;
  }

  std::ostream& out_;
  OutputFormat format_;
  std::string section_;
};

void emit_certificate(Emitter& e, const Certificate& cert) {
  e.field("route_times", cert.route_times);
  e.field("relevant_spread", cert.relevant_spread);
  if (cert.deviation_margin) e.field("deviation_margin", *cert.deviation_margin);
  e.field("note", cert.note);
}

void emit_result(Emitter& e, const EquilibriumResult& r) {
  e.field("kind", to_string(r.kind));
  e.field("partition", r.partition.shares());
  e.field("equilibrium_time", r.equilibrium_time);
  e.field("mean_time", r.mean_time);
  e.field("objective", r.objective);
  e.field("iterations", r.iterations);
  emit_certificate(e, r.certificate);
}

const BraessScenario& require_braess(const Scenario& s, const char* command) {
  if (!s.braess) throw UsageError(std::string(command) + " needs a scenario with a [braess] block");
  return *s.braess;
}

}  // namespace

std::vector<double> parse_partition(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto value = parse_number(text.substr(0, comma));
    if (!value) throw UsageError("--partition expects comma-separated numbers");
    out.push_back(*value);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

Tolerances effective_tolerances(const Scenario& scenario, const CommandOptions& options) {
  Tolerances tol = scenario.defaults.tolerances;
  if (options.tol) tol.equilibrium = *options.tol;
  if (options.epsilon) tol.nash_epsilon = *options.epsilon;
  if (options.seed) {
    tol.seed = *options.seed;
  } else if (const char* env = std::getenv("BRAESS_KIT_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError("BRAESS_KIT_SEED must be a non-negative integer");
    tol.seed = v;
  }
  return tol;
}

int cmd_validate(const Scenario& scenario, const CommandOptions& options, std::ostream& out) {
  Emitter e(out, options.format);
  bool all_passed = true;
  for (const Road& road : scenario.network.roads()) {
    e.section("road." + road.id);
    if (const auto* s = std::get_if<StationaryFlow>(&road.behavior)) {
      const FluxValidationReport report = validate(s->model, scenario.defaults.grid);
      e.field("model", s->model.name());
      e.field("capacity", s->model.capacity());
      e.field("passed", report.passed);
      e.field("grid_points", report.grid_points);
      e.field("violations", report.violations.size());
      e.field("warnings", report.warnings.size());
      if (!report.warnings.empty()) e.field("warning", report.warnings.front().condition + " fails on the grid");
      all_passed = all_passed && report.passed;
    } else {
      e.field("model", std::string_view(std::holds_alternative<CountLatency>(road.behavior) ? "count" : "fixed"));
      e.field("passed", true);
    }
  }
  return all_passed ? exit_code::ok : exit_code::validation;
}

int cmd_analyze(const Scenario& scenario, const CommandOptions& options, std::ostream& out) {
  const Tolerances tol = effective_tolerances(scenario, options);
  Emitter e(out, options.format);
  const Network* net = &scenario.network;
  if (options.partition && scenario.braess && options.partition->size() == 2) net = &scenario.braess->base();

  if (options.partition) {
    const FlowPartition theta(*options.partition);
    e.section("partition");
    e.field("shares", theta.shares());
    e.field("road_flows", road_flows(*net, theta));
    e.field("route_times", route_travel_times(*net, theta));
    e.field("mean_time", mean_global_travel_time(*net, theta));

    const PredicateResult eq = is_equilibrium(*net, theta, tol.equilibrium);
    e.section("equilibrium");
    e.field("holds", eq.holds);
    e.field("equilibrium_time", eq.equilibrium_time);
    emit_certificate(e, eq.certificate);

    e.section("nash");
    try {
      const PredicateResult nash = is_local_nash(*net, theta, tol.nash_epsilon, tol.equilibrium);
      e.field("holds", nash.holds);
      emit_certificate(e, nash.certificate);
    } catch (const DomainError& err) {
      e.field("holds", false);
      e.field("note", std::string_view(err.what()));
    }

    const ParetoResult pareto = is_local_pareto(*net, theta, tol.pareto_radius, tol.pareto_samples, tol.seed);
    e.section("pareto");
    e.field("holds", pareto.holds);
    e.field("samples", pareto.samples_tested);
    if (pareto.counterexample) e.field("counterexample", *pareto.counterexample);
    e.field("note", pareto.note);
    return exit_code::ok;
  }

  const EquilibriumResult nash = find_wardrop(*net, tol);
  const EquilibriumResult optimum = social_optimum(*net);
  e.section("nash");
  emit_result(e, nash);
  e.section("optimum");
  emit_result(e, optimum);
  return exit_code::ok;
}

int cmd_braess(const Scenario& scenario, const CommandOptions& options, std::ostream& out) {
  const BraessScenario& pair = require_braess(scenario, "braess");
  const Tolerances tol = effective_tolerances(scenario, options);
  const BraessReport report = braess_condition(pair);
  Emitter e(out, options.format);
  e.section("braess");
  e.field("tau_alpha_half", report.condition_bounds[0]);
  e.field("tau_gamma_corner", report.condition_bounds[1]);
  e.field("tau_alpha_corner", report.condition_bounds[2]);
  e.field("paradox", report.paradox);
  e.field("marginal", report.marginal);
  e.field("base_optimum_time", report.base_optimum_time);
  e.field("augmented_nash_time", report.augmented_nash_time);
  e.field("augmented_nash_partition", report.augmented_nash_partition);
  e.field("degradation", report.degradation);

  const UniquenessCertificate cert = nash_uniqueness_certificate(pair, scenario.defaults.grid, tol);
  e.section("uniqueness");
  e.field("certified", cert.certified);
  e.field("no_interior_equilibrium", cert.no_interior_equilibrium);
  e.field("interior_roots", cert.interior_roots);
  e.field("corners_rejected", cert.corners_rejected);
  e.field("note", cert.note);
  return exit_code::ok;
}

int cmd_control(const Scenario& scenario, const CommandOptions& options, std::ostream& out) {
  const BraessScenario& pair = require_braess(scenario, "control");
  const Tolerances tol = effective_tolerances(scenario, options);
  const ControlResult r = optimal_control(pair, tol, scenario.defaults.grid);
  Emitter e(out, options.format);
  e.section("control");
  e.field("tilde_tau", r.tilde_tau);
  e.field("theta_star", r.theta_star);
  e.field("equivalent_speed", r.equivalent_speed);
  std::vector<double> points;
  for (const FixedPoint& p : r.fixed_points) points.push_back(p.theta);
  e.field("fixed_points", points);
  e.field("controlled_time", r.controlled_time);
  e.field("controlled_mean_time", r.controlled_mean_time);
  e.field("nash_certified", r.nash.holds);
  e.field("optimality_certified", r.optimal);
  e.field("certified", r.certified);
  e.field("diagnostics", r.diagnostics);
  return r.certified ? exit_code::ok : exit_code::certification;
}

int cmd_sweep(const Scenario& scenario, const CommandOptions& options, std::ostream& out) {
  if (!options.grid) throw UsageError("sweep needs --grid");
  SweepOptions sweep;
  sweep.partition = options.partition;
  sweep.threads = options.threads;
  const std::string csv = run_sweep(scenario, parse_grid(*options.grid), sweep);
  if (!options.output) {
    out << csv;
    return exit_code::ok;
  }
  std::ofstream file(*options.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + options.output->string() + "' for writing");
  file << csv;
  file.close();
  if (!file) throw IoError("error writing '" + options.output->string() + "'");
  return exit_code::ok;
}

int run_command(std::string_view command, const std::filesystem::path& scenario_path, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = parse_scenario(scenario_path);
    if (command == "validate") return cmd_validate(scenario, options, out);
    if (command == "analyze") return cmd_analyze(scenario, options, out);
    if (command == "braess") return cmd_braess(scenario, options, out);
    if (command == "control") return cmd_control(scenario, options, out);
    if (command == "sweep") return cmd_sweep(scenario, options, out);
    throw UsageError("unknown command '" + std::string(command) + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_code::parse;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return exit_code::numeric;
  } catch (const Error& e) {
    err << "validation error: " << e.what() << '\n';
    return exit_code::validation;
  }
}

}  // namespace braess::cli
