#include "susyqm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "susyqm/errors.hpp"

namespace susyqm::io {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

void write_columns_csv(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<GridFunction>& columns) {
  if (names.size() != columns.size() || columns.empty()) {
    throw Error(ErrorKind::InvalidArgument, "one name per CSV column is required");
  }
  for (const auto& c : columns) require_same_grid(columns.front(), c);
  out << "x";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  const auto& grid = columns.front().grid();
  for (int i = 0; i < grid.n_points(); ++i) {
    out << format_number(grid.x(i));
    for (const auto& c : columns) out << ',' << format_number(c[static_cast<std::size_t>(i)]);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const GridFunction& f, const std::string& name) {
  write_columns_csv(out, {name}, {f});
}

GridFunction parse_tabulated_csv(std::istream& in) {
  std::vector<double> xs, vs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 'x,V'");
    }
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double x = std::strtod(a.c_str(), &end_a);
    const double v = std::strtod(b.c_str(), &end_b);
    const bool ok = end_a != a.c_str() && end_b != b.c_str() && *end_b == '\0';
    if (!ok) {
      if (xs.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": not numeric");
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 3) throw Error(ErrorKind::Parse, "tabulated potential needs at least 3 rows");
  const Grid1D grid = make_grid(xs.front(), xs.back(), static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - grid.x(static_cast<int>(i))) > 1e-6 * grid.h()) {
      throw Error(ErrorKind::GridMismatch,
                  "x column is not uniform at row " + std::to_string(i + 1));
    }
  }
  return GridFunction(grid, std::move(vs));
}

GridFunction read_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  return parse_tabulated_csv(in);
}

json to_json(const Grid1D& g) {
  return json{{"x_min", round12(g.x_min())},
              {"x_max", round12(g.x_max())},
              {"n_points", g.n_points()},
              {"h", round12(g.h())},
              {"wall_at_min", g.wall_at_min()}};
}

json to_json(const GridFunction& f) {
  json values = json::array();
  for (double v : f.values()) values.push_back(round12(v));
  return json{{"grid", to_json(f.grid())}, {"values", std::move(values)}};
}

json to_json(const ParamMap& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = round12(v);
  return j;
}

json to_json(const ParameterTransform& t) {
  json j{{"kind", to_string(t.kind())}, {"description", t.describe()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Translation>) {
          j["parameter"] = v.parameter;
          j["alpha"] = round12(v.alpha);
        } else if constexpr (std::is_same_v<T, Scaling>) {
          j["parameter"] = v.parameter;
          j["q"] = round12(v.q);
        } else if constexpr (std::is_same_v<T, PowerScaling>) {
          j["parameter"] = v.parameter;
          j["q"] = round12(v.q);
          j["p"] = v.p;
        } else if constexpr (std::is_same_v<T, Projective>) {
          j["parameter"] = v.parameter;
          j["q"] = round12(v.q);
          j["p"] = round12(v.p);
        } else {
          json values = json::array();
          for (const auto& m : v.values) values.push_back(to_json(m));
          j["values"] = std::move(values);
        }
      },
      t.variant());
  return j;
}

json to_json(const Spectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries) {
    entries.push_back({{"n", e.n}, {"energy", round12(e.energy)}, {"valid", e.valid}});
  }
  return json{{"entries", std::move(entries)},
              {"r_provenance", s.r_provenance},
              {"first_invalid", s.first_invalid ? json(*s.first_invalid) : json(nullptr)}};
}

json to_json(const ResidualReport& r) {
  return json{{"residual_mean", round12(r.residual_mean)},
              {"residual_stddev", round12(r.residual_stddev)},
              {"pass", r.pass},
              {"tolerance_used", round12(r.tolerance_used)},
              {"analytic_derivative", r.analytic_derivative},
              {"a0", to_json(r.a0)},
              {"a1", to_json(r.a1)},
              {"points_used", r.points_used}};
}

json to_json(const AlgebraReport& r) {
  return json{{"q_squared", round12(r.q_squared)},
              {"q_dagger_squared", round12(r.q_dagger_squared)},
              {"anticommutator", round12(r.anticommutator)},
              {"q_commutator", round12(r.q_commutator)},
              {"q_dagger_commutator", round12(r.q_dagger_commutator)},
              {"scale", round12(r.scale)},
              {"tolerance", round12(r.tolerance)},
              {"pass", r.pass}};
}

json to_json(const PhaseReport& r) {
  return json{{"phase", to_string(r.phase)},
              {"minus_boundary_ratio", round12(r.minus_boundary_ratio)},
              {"plus_boundary_ratio", round12(r.plus_boundary_ratio)},
              {"decay_threshold", round12(r.decay_threshold)}};
}

json to_json(const TransformMatch& m) {
  return json{{"transform", to_json(m.transform)},
              {"report", to_json(m.report)},
              {"worst_normalized", round12(m.worst_normalized)},
              {"orbit_steps", m.orbit_steps}};
}

json to_json(const VennTag& t) {
  const auto& e = t.evidence;
  json evidence{{"subject", e.subject}, {"bound_states", e.bound_states}};
  evidence["phase"] = e.phase ? to_json(*e.phase) : json(nullptr);
  evidence["ground_energy"] = e.ground_energy ? json(round12(*e.ground_energy)) : json(nullptr);
  evidence["hierarchy_levels"] = e.hierarchy_levels ? json(*e.hierarchy_levels) : json(nullptr);
  evidence["transform"] = e.transform ? to_json(*e.transform) : json(nullptr);
  evidence["declared_transform"] =
      e.declared_transform ? json(*e.declared_transform) : json(nullptr);
  evidence["notes"] = e.notes;
  return json{{"susy", to_string(t.susy)},
              {"shape_invariant", to_string(t.shape_invariant)},
              {"ih_factorizable", to_string(t.ih_factorizable)},
              {"exactly_solvable", to_string(t.exactly_solvable)},
              {"evidence", std::move(evidence)}};
}

json to_json(const SIPRecord& r) {
  json domain = nullptr;
  if (r.family) {
    domain = json{{"x_min", round12(r.domain.x_min)},
                  {"x_max", round12(r.domain.x_max)},
                  {"n_points", r.domain.n_points}};
  }
  return json{{"name", r.name},
              {"superpotential", r.family ? json(r.family->expression()) : json(nullptr)},
              {"transform", to_json(r.transform)},
              {"r_closed_form", r.r_closed_form},
              {"defaults", to_json(r.default_params)},
              {"domain", std::move(domain)},
              {"validity", r.validity_note},
              {"exactly_solvable", r.exactly_solvable},
              {"notes", r.notes}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace susyqm::io
