#include "braess/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "braess/error.hpp"

namespace braess {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;      // of the value
  int key_column = 0;
};

struct Section {
  std::string kind;
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::string_view body = raw.substr(0, std::min(raw.find('#'), raw.size()));
    body = trim(body);
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", line_no, column_of(raw, body));
      const std::string_view inner = trim(body.substr(1, body.size() - 2));
      const auto space = inner.find_first_of(" \t");
      Section s;
      s.kind = std::string(inner.substr(0, space));
      if (space != std::string_view::npos) s.name = std::string(trim(inner.substr(space)));
      s.line = line_no;
      if (s.kind != "road" && s.kind != "route" && s.kind != "demand" && s.kind != "braess" &&
          s.kind != "analysis") {
        throw ParseError("unknown section '" + s.kind + "'", line_no, column_of(raw, inner));
      }
      const bool named = s.kind == "road" || s.kind == "route";
      if (named && s.name.empty()) throw ParseError(s.kind + " section needs a name", line_no, column_of(raw, body));
      if (!named && !s.name.empty()) {
        throw ParseError(s.kind + " section takes no name", line_no, column_of(raw, inner) + static_cast<int>(space));
      }
      sections.push_back(std::move(s));
    } else {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, column_of(raw, body));
      if (sections.empty()) throw ParseError("key outside of any section", line_no, column_of(raw, body));
      const std::string_view key = trim(body.substr(0, eq));
      const std::string_view value = trim(body.substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", line_no, column_of(raw, body));
      if (value.empty()) throw ParseError("empty value for '" + std::string(key) + "'", line_no, column_of(raw, body) + static_cast<int>(eq) + 1);
      auto [it, inserted] = sections.back().entries.emplace(
          std::string(key), Entry{std::string(value), line_no, column_of(raw, value), column_of(raw, key)});
      if (!inserted) throw ParseError("duplicate key '" + std::string(key) + "'", line_no, column_of(raw, key));
    }
    if (end == text.size()) break;
  }
  return sections;
}

class SectionReader {
 public:
  explicit SectionReader(Section& section) : section_(section) {}

  const Entry& required(const std::string& key) {
    auto it = section_.entries.find(key);
    if (it == section_.entries.end()) {
      throw ParseError("section [" + label() + "] is missing '" + key + "'", section_.line, 1);
    }
    used_.push_back(key);
    return it->second;
  }

  const Entry* optional(const std::string& key) {
    auto it = section_.entries.find(key);
    if (it == section_.entries.end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  double number(const std::string& key) { return to_number(required(key)); }

  static double to_number(const Entry& e) {
    const auto value = parse_number(e.value);
    if (!value) throw ParseError("expected a finite number, got '" + e.value + "'", e.line, e.column);
    return *value;
  }

  static std::uint64_t to_count(const Entry& e) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
      throw ParseError("expected a non-negative integer, got '" + e.value + "'", e.line, e.column);
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : section_.entries) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw ParseError("unknown key '" + key + "' in section [" + label() + "]", entry.line, entry.key_column);
      }
    }
  }

 private:
  std::string label() const { return section_.name.empty() ? section_.kind : section_.kind + " " + section_.name; }

  Section& section_;
  std::vector<std::string> used_;
};

Road read_road(Section& section) {
  SectionReader in(section);
  const double length = in.number("length");
  const Entry& model = in.required("model");
  auto behavior = [&]() -> RoadBehavior {
    if (model.value == "log") return StationaryFlow{FluxModel::log(in.number("a"))};
    if (model.value == "sqrt") {
      const double b = in.number("b");
      return StationaryFlow{FluxModel::sqrt(b, in.number("c"))};
    }
    if (model.value == "linear") return StationaryFlow{FluxModel::linear(in.number("v"))};
    if (model.value == "count") {
      const double slope = in.number("slope");
      return CountLatency{slope, in.number("intercept")};
    }
    if (model.value == "fixed") return FixedTime{in.number("time")};
    throw ParseError("unknown model '" + model.value + "' (expected log, sqrt, linear, count or fixed)", model.line,
                     model.column);
  };
  try {
    Road road{section.name, length, behavior()};
    in.reject_unknown();
    return road;
  } catch (const ValidationError& e) {
    throw ValidationError("road '" + section.name + "' (line " + std::to_string(section.line) + "): " + e.what());
  }
}

Route read_route(Section& section) {
  SectionReader in(section);
  Route route;
  route.id = section.name;
  const Entry& list = in.required("roads");
  std::string_view rest = list.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (item.empty()) throw ParseError("empty road id in route list", list.line, list.column);
    route.roads.emplace_back(item);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  in.reject_unknown();
  return route;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text == "sqrt2-1") return std::sqrt(2.0) - 1.0;
  if (text == "ln2") return std::log(2.0);
  auto decimal = [](std::string_view s) -> std::optional<double> {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) return std::nullopt;
    return out;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = decimal(text.substr(0, slash));
    const auto den = decimal(text.substr(slash + 1));
    if (!num || !den || *den == 0.0) return std::nullopt;
    const double q = *num / *den;
    if (!std::isfinite(q)) return std::nullopt;
    return q;
  }
  return decimal(text);
}

Scenario parse_scenario_text(std::string_view text) {
  std::vector<Section> sections = split_sections(text);
  std::vector<Road> roads;
  std::vector<Route> routes;
  std::optional<Demand> demand;
  Section* braess_block = nullptr;
  Section* demand_block = nullptr;
  AnalysisDefaults defaults;
  bool seen_analysis = false;

  for (Section& s : sections) {
    if (s.kind == "road") {
      roads.push_back(read_road(s));
    } else if (s.kind == "route") {
      routes.push_back(read_route(s));
    } else if (s.kind == "demand") {
      if (demand_block) throw ParseError("duplicate [demand] section", s.line, 1);
      demand_block = &s;
      SectionReader in(s);
      const Entry* inflow = in.optional("inflow");
      const Entry* vehicles = in.optional("vehicles");
      if ((inflow == nullptr) == (vehicles == nullptr)) {
        throw ParseError("[demand] needs exactly one of 'inflow' or 'vehicles'", s.line, 1);
      }
      demand = inflow ? Demand::inflow(SectionReader::to_number(*inflow))
                      : Demand::vehicles(SectionReader::to_number(*vehicles));
      in.reject_unknown();
    } else if (s.kind == "braess") {
      if (braess_block) throw ParseError("duplicate [braess] section", s.line, 1);
      braess_block = &s;
    } else if (s.kind == "analysis") {
      if (seen_analysis) throw ParseError("duplicate [analysis] section", s.line, 1);
      seen_analysis = true;
      SectionReader in(s);
      Tolerances& tol = defaults.tolerances;
      if (const Entry* e = in.optional("tol")) tol.equilibrium = SectionReader::to_number(*e);
      if (const Entry* e = in.optional("epsilon")) tol.nash_epsilon = SectionReader::to_number(*e);
      if (const Entry* e = in.optional("pareto_radius")) tol.pareto_radius = SectionReader::to_number(*e);
      if (const Entry* e = in.optional("pareto_samples")) tol.pareto_samples = SectionReader::to_count(*e);
      if (const Entry* e = in.optional("seed")) tol.seed = SectionReader::to_count(*e);
      if (const Entry* e = in.optional("grid")) defaults.grid = SectionReader::to_count(*e);
      in.reject_unknown();
    }
  }
  if (!demand) throw ParseError("scenario has no [demand] section", sections.empty() ? 1 : sections.back().line, 1);

  if (braess_block) {
    if (!routes.empty()) {
      throw ParseError("routes are generated from the [braess] block; remove [route] sections", braess_block->line, 1);
    }
    SectionReader in(*braess_block);
    auto role = [&](const char* key) -> const Road& {
      const Entry& e = in.required(key);
      for (const Road& r : roads) {
        if (r.id == e.value) return r;
      }
      throw ParseError("unknown road '" + e.value + "' for role " + key, e.line, e.column);
    };
    const Road& a = role("a");
    const Road& b = role("b");
    const Road& c = role("c");
    const Road& d = role("d");
    const Road& e = role("e");
    in.reject_unknown();
    if (roads.size() != 5) {
      throw ValidationError("a [braess] scenario has exactly five roads, found " + std::to_string(roads.size()));
    }
    BraessScenario pair = BraessScenario::from_roads(a, b, c, d, e, *demand);
    Network net = pair.augmented();
    return Scenario{std::move(net), std::move(pair), defaults};
  }
  return Scenario{Network(std::move(roads), std::move(routes), *demand), std::nullopt, defaults};
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading scenario file '" + path.string() + "'");
  try {
    return parse_scenario_text(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.line(), e.column(), path.string());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string write_scenario(const Scenario& scenario) {
  std::ostringstream out;
  const Network& net = scenario.network;
  for (const Road& road : net.roads()) {
    out << "[road " << road.id << "]\n";
    out << "length = " << format_number(road.length) << '\n';
    if (const auto* s = std::get_if<StationaryFlow>(&road.behavior)) {
      const FluxFamily& f = s->model.family();
      if (const auto* log = std::get_if<LogFlux>(&f)) {
        out << "model = log\na = " << format_number(log->a) << '\n';
      } else if (const auto* sq = std::get_if<SqrtFlux>(&f)) {
        out << "model = sqrt\nb = " << format_number(sq->b) << "\nc = " << format_number(sq->c) << '\n';
      } else if (const auto* lin = std::get_if<LinearFlux>(&f)) {
        out << "model = linear\nv = " << format_number(lin->v) << '\n';
      }
    } else if (const auto* c = std::get_if<CountLatency>(&road.behavior)) {
      out << "model = count\nslope = " << format_number(c->slope) << "\nintercept = " << format_number(c->intercept)
          << '\n';
    } else if (const auto* fixed = std::get_if<FixedTime>(&road.behavior)) {
      out << "model = fixed\ntime = " << format_number(fixed->time) << '\n';
    }
    out << '\n';
  }
  if (!scenario.braess) {
    for (const Route& route : net.routes()) {
      out << "[route " << route.id << "]\nroads = ";
      for (std::size_t k = 0; k < route.roads.size(); ++k) out << (k ? ", " : "") << route.roads[k];
      out << "\n\n";
    }
  }
  out << "[demand]\n"
      << (net.demand().kind == DemandKind::Inflow ? "inflow" : "vehicles") << " = "
      << format_number(net.demand().value) << "\n\n";
  if (scenario.braess) {
    const auto& ids = scenario.braess->ids();
    out << "[braess]\n";
    const char* roles[] = {"a", "b", "c", "d", "e"};
    for (std::size_t k = 0; k < 5; ++k) out << roles[k] << " = " << ids[k] << '\n';
    out << '\n';
  }
  const Tolerances& tol = scenario.defaults.tolerances;
  out << "[analysis]\n"
      << "tol = " << format_number(tol.equilibrium) << '\n'
      << "epsilon = " << format_number(tol.nash_epsilon) << '\n'
      << "pareto_radius = " << format_number(tol.pareto_radius) << '\n'
      << "pareto_samples = " << tol.pareto_samples << '\n'
      << "seed = " << tol.seed << '\n'
      << "grid = " << scenario.defaults.grid << '\n';
  return out.str();
}

}  // namespace braess
