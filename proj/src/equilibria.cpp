#include "braess/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "braess/error.hpp"

namespace braess {
namespace {

// Shares this small are numerical dust, not a used route.
constexpr double kShareDust = 1e-12;

std::vector<bool> relevance(const FlowPartition& theta) {
  std::vector<bool> used(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) used[j] = theta[j] > kShareDust;
  return used;
}

std::vector<double> barycenter(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

}  // namespace

std::string_view to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::Equilibrium: return "equilibrium";
    case ResultKind::EquilibriumCandidate: return "equilibrium-candidate";
    case ResultKind::LocalNash: return "local-nash";
    case ResultKind::SocialOptimum: return "social-optimum";
  }
  return "unknown";
}

PredicateResult is_equilibrium(const Network& net, const FlowPartition& theta, double tol) {
  if (!(tol > 0.0)) throw DomainError("equilibrium tolerance must be positive");
  PredicateResult out;
  Certificate& cert = out.certificate;
  cert.route_times = route_travel_times(net, theta);
  cert.relevant = relevance(theta);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (!cert.relevant[j]) continue;
    lo = std::min(lo, cert.route_times[j]);
    hi = std::max(hi, cert.route_times[j]);
    sum += cert.route_times[j];
    ++used;
  }
  cert.relevant_spread = hi - lo;
  out.equilibrium_time = sum / static_cast<double>(used);
  out.holds = cert.relevant_spread <= tol;
  cert.passed = out.holds;
  std::ostringstream note;
  note << used << " relevant route(s), spread " << cert.relevant_spread << " vs tol " << tol;
  cert.note = note.str();
  return out;
}

PredicateResult is_local_nash(const Network& net, const FlowPartition& theta, double epsilon, double tol) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("deviation size epsilon must lie in (0, 1]");
  PredicateResult out = is_equilibrium(net, theta, tol);
  Certificate& cert = out.certificate;
  const std::size_t n = theta.size();
  if (n == 1) {
    cert.note += "; single route, no deviations possible";
    return out;
  }

  const std::vector<double> base(theta.shares().begin(), theta.shares().end());
  bool all_accepted = true;
  for (std::size_t from = 0; from < n; ++from) {
    if (base[from] + 1e-15 < epsilon) continue;
    for (std::size_t to = 0; to < n; ++to) {
      if (to == from) continue;
      std::vector<double> moved = base;
      moved[from] = std::max(moved[from] - epsilon, 0.0);
      moved[to] += epsilon;
      if (moved[to] > 1.0 + 1e-15) continue;
      const double deviated = route_travel_times(net, FlowPartition(std::move(moved)))[to];
      Deviation d{to, from, deviated, cert.route_times[from], deviated > cert.route_times[from] - tol};
      all_accepted = all_accepted && d.accepted;
      const double margin = deviated - cert.route_times[from];
      cert.deviation_margin = cert.deviation_margin ? std::min(*cert.deviation_margin, margin) : margin;
      cert.deviations.push_back(d);
    }
  }
  if (cert.deviations.empty()) {
    throw DomainError("deviation size epsilon exceeds the share of every route; no deviation can be tested");
  }
  out.holds = out.holds && all_accepted;
  cert.passed = out.holds;
  std::ostringstream note;
  note << "; " << cert.deviations.size() << " pairwise swaps e_j - e_k tested at eps " << epsilon
       << " (multi-route deviations not tested)";
  cert.note += note.str();
  return out;
}

ParetoResult is_local_pareto(const Network& net, const FlowPartition& theta, double radius, std::size_t samples,
                             std::uint64_t seed, double tol) {
  if (!(radius > 0.0)) throw DomainError("Pareto radius must be positive");
  ParetoResult out;
  if (!is_equilibrium(net, theta).holds) {
    out.note = "not an equilibrium state";
    return out;
  }
  const std::size_t n = theta.size();
  const std::vector<double> reference = route_travel_times(net, theta);
  const std::vector<double> base(theta.shares().begin(), theta.shares().end());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> fraction(0.0, 1.0);
  std::vector<double> direction(n);
  for (std::size_t s = 0; s < samples && n > 1; ++s) {
    double mean = 0.0;
    for (double& d : direction) {
      d = unit(rng);
      mean += d;
    }
    mean /= static_cast<double>(n);
    double norm = 0.0;
    for (double& d : direction) {
      d -= mean;
      norm += d * d;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double r = radius * fraction(rng);
    std::vector<double> trial(n);
    for (std::size_t j = 0; j < n; ++j) trial[j] = base[j] + r * direction[j] / norm;
    // Projection is non-expansive, so the result stays within the ball.
    std::vector<double> perturbed = project_to_simplex(trial);
    const std::vector<double> times = route_travel_times(net, FlowPartition(perturbed));
    ++out.samples_tested;

    bool improves = false;
    bool worsens = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (times[j] < reference[j] - tol) improves = true;
      if (times[j] > reference[j] + tol) worsens = true;
    }
    if (improves && !worsens) {
      out.counterexample = std::move(perturbed);
      out.counterexample_times = times;
      out.note = "perturbation lowers a route time without raising any other";
      return out;
    }
  }
  out.holds = true;
  std::ostringstream note;
  note << "no counterexample in " << out.samples_tested << " samples within radius " << radius
       << " (sampling evidence, not proof)";
  out.note = note.str();
  return out;
}

double beckmann_potential(const Network& net, const FlowPartition& theta) {
  const std::vector<double> flows = road_flows(net, theta);
  double total = 0.0;
  for (std::size_t i = 0; i < net.road_count(); ++i) total += road_time_integral(net.roads()[i], flows[i]);
  return total;
}

std::vector<double> beckmann_gradient(const Network& net, const FlowPartition& theta) {
  std::vector<double> grad = route_travel_times(net, theta);
  for (double& g : grad) g *= net.demand().value;
  return grad;
}

namespace {

[[noreturn]] void not_converged(const char* what, const SimplexMinimizerResult& r) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " did not converge after " << r.iterations << " iterations (stationarity " << r.stationarity
      << ", point";
  for (double v : r.point) msg << ' ' << v;
  msg << ')';
  throw NumericError(msg.str());
}

}  // namespace

EquilibriumResult social_optimum(const Network& net, const SimplexMinimizerOptions& options) {
  auto gradient = [&net](std::span<const double> x) {
    return mean_travel_time_gradient(net, FlowPartition(std::vector<double>(x.begin(), x.end())));
  };
  const SimplexMinimizerResult r = minimize_on_simplex(gradient, barycenter(net.route_count()), options);
  if (!r.converged) not_converged("social optimum search", r);

  FlowPartition theta(r.point);
  EquilibriumResult out{theta, 0.0, 0.0, 0.0, ResultKind::Equilibrium, {}, 0, 0.0};
  out.kind = ResultKind::SocialOptimum;
  out.mean_time = mean_global_travel_time(net, theta);
  out.equilibrium_time = out.mean_time;
  out.objective = out.mean_time;
  out.iterations = r.iterations;
  out.stationarity = r.stationarity;
  out.certificate.route_times = route_travel_times(net, theta);
  out.certificate.relevant = relevance(theta);
  out.certificate.passed = true;
  std::ostringstream note;
  note << "projected gradient on T, " << r.iterations << " iterations, stationarity " << r.stationarity;
  out.certificate.note = note.str();
  return out;
}

EquilibriumResult find_wardrop(const Network& net, const Tolerances& tolerances,
                               const SimplexMinimizerOptions& options) {
  auto gradient = [&net](std::span<const double> x) {
    return beckmann_gradient(net, FlowPartition(std::vector<double>(x.begin(), x.end())));
  };
  const SimplexMinimizerResult r = minimize_on_simplex(gradient, barycenter(net.route_count()), options);
  if (!r.converged) not_converged("Wardrop equilibrium search", r);

  FlowPartition theta(r.point);
  const PredicateResult nash = is_local_nash(net, theta, tolerances.nash_epsilon, tolerances.equilibrium);
  EquilibriumResult out{theta, 0.0, 0.0, 0.0, ResultKind::Equilibrium, {}, 0, 0.0};
  out.kind = nash.holds ? ResultKind::LocalNash : ResultKind::EquilibriumCandidate;
  out.equilibrium_time = nash.equilibrium_time;
  out.mean_time = mean_global_travel_time(net, theta);
  out.objective = beckmann_potential(net, theta);
  out.iterations = r.iterations;
  out.stationarity = r.stationarity;
  out.certificate = nash.certificate;
  return out;
}

}  // namespace braess
