#include "braess/flux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "braess/error.hpp"

namespace braess {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Flows this close above q(1) are rounding noise from partition arithmetic.
constexpr double kCapacitySlack = 1e-12;

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream msg;
    msg << "flux parameter " << what << " must be finite and positive, got " << value;
    throw ValidationError(msg.str());
  }
}

void require_density(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    std::ostringstream msg;
    msg << "density " << rho << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

// Checks flow against [0, q(1)] and clamps the tolerated overshoot.
double checked_flow(const FluxModel& model, double flow) {
  const double cap = model.capacity();
  if (!(flow >= 0.0) || flow > cap * (1.0 + kCapacitySlack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "flow " << flow << " outside [0, " << cap << "] (free-phase capacity)";
    throw CapacityExceeded(msg.str());
  }
  return std::min(flow, cap);
}

// (e^x - 1) / x and its derivative, for x in [0, ln 2].
double expm1_ratio(double x) {
  return x == 0.0 ? 1.0 : std::expm1(x) / x;
}

double expm1_ratio_derivative(double x) {
  // sum_{n>=1} n x^(n-1) / (n+1)!; the closed form cancels badly near 0.
  double sum = 0.0;
  double power = 1.0;     // x^(n-1)
  double factorial = 2.0; // (n+1)!
  for (int n = 1; n < 60; ++n) {
    const double term = n * power / factorial;
    sum += term;
    if (term <= std::numeric_limits<double>::epsilon() * sum) break;
    power *= x;
    factorial *= n + 2;
  }
  return sum;
}

}  // namespace

FluxModel::FluxModel(FluxFamily family) : family_(family), capacity_(0.0) {
  std::visit(Overloaded{
                 [](const LogFlux& f) { require_positive(f.a, "a"); },
                 [](const SqrtFlux& f) {
                   require_positive(f.b, "b");
                   require_positive(f.c, "c");
                 },
                 [](const LinearFlux& f) { require_positive(f.v, "v"); },
             },
             family_);
  capacity_ = (*this)(1.0);
}

std::string_view FluxModel::name() const noexcept {
  return std::visit(Overloaded{
                        [](const LogFlux&) { return std::string_view("log"); },
                        [](const SqrtFlux&) { return std::string_view("sqrt"); },
                        [](const LinearFlux&) { return std::string_view("linear"); },
                    },
                    family_);
}

double FluxModel::operator()(double rho) const {
  require_density(rho);
  return std::visit(Overloaded{
                        [rho](const LogFlux& f) { return f.a * std::log1p(rho); },
                        [rho](const SqrtFlux& f) {
                          // (-1 + sqrt(1 + c rho)) / b, rationalized to avoid cancellation
                          const double s = std::sqrt(1.0 + f.c * rho);
                          return f.c * rho / (f.b * (1.0 + s));
                        },
                        [rho](const LinearFlux& f) { return f.v * rho; },
                    },
                    family_);
}

double FluxModel::derivative(double rho, int order) const {
  require_density(rho);
  if (order < 1 || order > 3) throw DomainError("derivative order must be 1, 2 or 3");
  return std::visit(Overloaded{
                        [rho, order](const LogFlux& f) {
                          const double u = 1.0 + rho;
                          switch (order) {
                            case 1: return f.a / u;
                            case 2: return -f.a / (u * u);
                            default: return 2.0 * f.a / (u * u * u);
                          }
                        },
                        [rho, order](const SqrtFlux& f) {
                          const double s = std::sqrt(1.0 + f.c * rho);
                          switch (order) {
                            case 1: return f.c / (2.0 * f.b * s);
                            case 2: return -f.c * f.c / (4.0 * f.b * s * s * s);
                            default: return 3.0 * f.c * f.c * f.c / (8.0 * f.b * std::pow(s, 5));
                          }
                        },
                        [order](const LinearFlux& f) { return order == 1 ? f.v : 0.0; },
                    },
                    family_);
}

double evaluate(const FluxModel& model, double rho) { return model(rho); }

FluxValidationReport validate(const FluxModel& model, std::size_t grid_points) {
  if (grid_points < 2) throw DomainError("validation grid needs at least 2 points");
  FluxValidationReport report;
  report.grid_points = grid_points;

  if (const double q0 = model(0.0); q0 != 0.0) {
    report.violations.push_back({"q(0) = 0", 0.0, q0});
  }
  if (model.capacity() <= 0.0) {
    report.violations.push_back({"q(1) > 0", 1.0, model.capacity()});
  }
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double rho = static_cast<double>(k) / static_cast<double>(grid_points - 1);
    if (const double d1 = model.derivative(rho, 1); !(d1 > 0.0)) {
      report.violations.push_back({"q' > 0", rho, d1});
    }
    if (const double d2 = model.derivative(rho, 2); !(d2 <= 0.0)) {
      report.violations.push_back({"q'' <= 0", rho, d2});
    }
    if (const double d3 = model.derivative(rho, 3); !(d3 <= 0.0)) {
      report.warnings.push_back({"q''' <= 0", rho, d3});
    }
  }
  report.passed = report.violations.empty();
  return report;
}

double velocity(const FluxModel& model, double rho) {
  require_density(rho);
  if (rho == 0.0) return model.derivative(0.0, 1);
  return std::visit(Overloaded{
                        [rho](const LogFlux& f) { return f.a * std::log1p(rho) / rho; },
                        [rho](const SqrtFlux& f) {
                          return f.c / (f.b * (1.0 + std::sqrt(1.0 + f.c * rho)));
                        },
                        [](const LinearFlux& f) { return f.v; },
                    },
                    model.family());
}

double invert_flow(const FluxModel& model, double flow) {
  flow = checked_flow(model, flow);
  if (flow == 0.0) return 0.0;
  const double rho = std::visit(Overloaded{
                                    [flow](const LogFlux& f) { return std::expm1(flow / f.a); },
                                    [flow](const SqrtFlux& f) {
                                      // (1 + b f)^2 = 1 + c rho
                                      return f.b * flow * (2.0 + f.b * flow) / f.c;
                                    },
                                    [flow](const LinearFlux& f) { return flow / f.v; },
                                },
                                model.family());
  return std::min(rho, 1.0);
}

double invert_flow_numeric(const FluxModel& model, double flow) {
  flow = checked_flow(model, flow);
  if (flow == 0.0) return 0.0;
  if (flow == model.capacity()) return 1.0;
  auto residual = [&](double rho) {
    rho = std::clamp(rho, 0.0, 1.0);
    return std::make_pair(model(rho) - flow, model.derivative(rho, 1));
  };
  std::uintmax_t max_iter = 200;
  const double guess = flow / model.capacity();
  const double rho = boost::math::tools::newton_raphson_iterate(
      residual, guess, 0.0, 1.0, std::numeric_limits<double>::digits - 4, max_iter);
  if (max_iter >= 200) throw NumericError("flow inversion did not converge");
  return rho;
}

double slowness(const FluxModel& model, double flow) {
  flow = checked_flow(model, flow);
  return std::visit(Overloaded{
                        [flow](const LogFlux& f) { return expm1_ratio(flow / f.a) / f.a; },
                        [flow](const SqrtFlux& f) { return f.b * (2.0 + f.b * flow) / f.c; },
                        [](const LinearFlux& f) { return 1.0 / f.v; },
                    },
                    model.family());
}

double slowness_derivative(const FluxModel& model, double flow) {
  flow = checked_flow(model, flow);
  return std::visit(Overloaded{
                        [flow](const LogFlux& f) {
                          return expm1_ratio_derivative(flow / f.a) / (f.a * f.a);
                        },
                        [](const SqrtFlux& f) { return f.b * f.b / f.c; },
                        [](const LinearFlux&) { return 0.0; },
                    },
                    model.family());
}

double road_travel_time(double length, const FluxModel& model, double flow) {
  if (!(length > 0.0)) throw DomainError("road length must be positive");
  return length * slowness(model, flow);
}

}  // namespace braess
