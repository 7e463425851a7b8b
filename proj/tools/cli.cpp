#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "susyqm/catalog.hpp"
#include "susyqm/errors.hpp"
#include "susyqm/expression.hpp"
#include "susyqm/io.hpp"
#include "susyqm/oracle.hpp"
#include "susyqm/shape_invariance.hpp"
#include "susyqm/susy.hpp"
#include "susyqm/venn.hpp"

namespace susyqm::cli {

using io::format_number;
using io::json;
using io::round12;

namespace {

struct CommandInfo {
  Command command;
  const char* name;
  const char* help;
  Format default_format;
};

constexpr CommandInfo kCommands[] = {
    {Command::Solve, "solve", "Oracle spectrum and states of V- (or of a tabulated V)",
     Format::Csv},
    {Command::Partner, "partner", "Tabulate w, w', V- and V+", Format::Csv},
    {Command::Hierarchy, "hierarchy", "Isospectral hierarchy by repeated ground-state removal",
     Format::Csv},
    {Command::SiCheck, "si-check", "Shape-invariance residual for a transform", Format::Json},
    {Command::Spectrum, "spectrum", "Algebraic spectrum next to the oracle spectrum", Format::Csv},
    {Command::Wavefunctions, "wavefunctions", "Excited states built by the A-dagger chain",
     Format::Csv},
    {Command::Classify, "classify", "SUSY / SI / IH / ES membership with evidence", Format::Json},
    {Command::AlgebraCheck, "algebra-check", "Residual norms of the discretized charge algebra",
     Format::Json},
    {Command::Catalog, "catalog", "List catalog records or show one", Format::Json},
};

const CommandInfo& info(Command c) {
  for (const auto& i : kCommands) {
    if (i.command == c) return i;
  }
  throw std::logic_error("unknown command");
}

bool needs_family(Command c) {
  return c == Command::SiCheck || c == Command::Spectrum || c == Command::Wavefunctions ||
         c == Command::AlgebraCheck || c == Command::Partner;
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--param expects NAME=VALUE, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || !std::isfinite(v)) {
      throw UsageError("--param " + name + ": '" + value + "' is not a finite number");
    }
    if (out.count(name)) throw UsageError("--param " + name + " given twice");
    out[name] = v;
  }
  return out;
}

void validate(RunConfig& c) {
  if (c.input_kind == InputKind::None && c.command != Command::Catalog) {
    throw UsageError(std::string(to_string(c.command)) +
                     " needs one input: --catalog, --w or --tabulated");
  }
  if (c.input_kind == InputKind::Tabulated && needs_family(c.command) &&
      c.command != Command::Partner) {
    throw UsageError(std::string(to_string(c.command)) +
                     " needs a superpotential family (--catalog or --w)");
  }
  if (c.input_kind == InputKind::Tabulated && (c.x_min || c.x_max || c.points)) {
    throw UsageError("grid overrides cannot be combined with --tabulated");
  }
  if (c.input_kind == InputKind::Tabulated && !c.params.empty()) {
    throw UsageError("--param cannot be combined with --tabulated");
  }
  if (c.x_min && c.x_max && !(*c.x_min < *c.x_max)) {
    throw UsageError("--x-min must be below --x-max");
  }
  if (c.points && *c.points < 3) throw UsageError("--points must be at least 3");
  if (c.levels < 1) throw UsageError("--levels must be at least 1");
  if (c.depth < 1) throw UsageError("--depth must be at least 1");
  if (c.budget < 0 || c.budget > 8) throw UsageError("--budget must be in [0, 8]");
  if (c.tol && !(*c.tol > 0.0)) throw UsageError("--tol must be positive");

  if (c.input_kind == InputKind::Expression) {
    std::vector<std::string> names;
    try {
      names = Expression::parse(c.input).parameters();
    } catch (const Error& e) {
      throw UsageError(std::string("malformed expression: ") + e.what());
    }
    for (const auto& n : names) {
      if (!c.params.count(n)) throw UsageError("expression parameter '" + n + "' needs --param");
    }
    for (const auto& [k, v] : c.params) {
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        throw UsageError("--param " + k + " does not appear in the expression");
      }
    }
  }
  if (c.input_kind == InputKind::Catalog) {
    try {
      const auto& rec = get_record(c.input);
      rec.resolve(c.params);
      if (!rec.family && c.command != Command::Catalog && c.command != Command::Spectrum &&
          c.command != Command::Classify && c.command != Command::SiCheck) {
        throw UsageError("record '" + c.input + "' has no potential; " +
                         to_string(c.command) + " is not available");
      }
      if (!rec.family && c.command == Command::SiCheck) {
        throw UsageError("record '" + c.input + "' has no potential to check");
      }
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (c.transform) {
    static const std::vector<std::string> kinds{"translation", "scaling", "power", "projective"};
    if (std::find(kinds.begin(), kinds.end(), *c.transform) == kinds.end()) {
      throw UsageError("--transform must be translation, scaling, power or projective");
    }
    if ((*c.transform == "power" || *c.transform == "projective") && c.q && !c.p) {
      throw UsageError("--transform " + *c.transform + " needs --p with --q");
    }
  } else if (c.alpha || c.q || c.p) {
    throw UsageError("--alpha, --q and --p need --transform");
  }
}

// ---------------------------------------------------------------- running

struct Input {
  const SIPRecord* record = nullptr;
  std::optional<SuperpotentialFamily> family;
  std::optional<GridFunction> tabulated;
  ParamMap params;
  std::optional<Grid1D> grid;
};

Input resolve_input(const RunConfig& c) {
  Input in;
  DomainHint domain;
  switch (c.input_kind) {
    case InputKind::Catalog:
      in.record = &get_record(c.input);
      in.params = in.record->resolve(c.params);
      if (in.record->family) in.family = in.record->family;
      domain = in.record->domain;
      break;
    case InputKind::Expression:
      in.family = SuperpotentialFamily::from_expression(c.input);
      in.params = c.params;
      domain = in.family->domain();
      break;
    case InputKind::Tabulated:
      in.tabulated = io::read_tabulated_csv(c.input);
      in.grid = in.tabulated->grid();
      return in;
    case InputKind::None:
      return in;
  }
  if (in.family) {
    in.grid = domain.grid(c.x_min.value_or(domain.x_min), c.x_max.value_or(domain.x_max),
                        c.points.value_or(domain.n_points));
  }
  return in;
}

json input_json(const RunConfig& c, const Input& in) {
  static const char* kinds[] = {"none", "catalog", "expression", "tabulated"};
  json j{{"kind", kinds[static_cast<int>(c.input_kind)]}, {"source", c.input}};
  j["params"] = io::to_json(in.params);
  j["grid"] = in.grid ? io::to_json(*in.grid) : json(nullptr);
  return j;
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot);
  }
  return path;
}

std::string file_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.output) {
    write_file(*c.output, text);
  } else {
    out << text;
  }
}

template <class F>
void parallel_for(int n, F&& fn) {
  const int workers = std::min(thread_limit(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

GridFunction potential_of(const Input& in) {
  if (in.tabulated) return *in.tabulated;
  return partner_potentials(*in.family, in.params, *in.grid).v_minus;
}

std::string only_parameter(const RunConfig& c, const SuperpotentialFamily& family) {
  if (c.transform_param) {
    const auto& names = family.parameter_names();
    if (std::find(names.begin(), names.end(), *c.transform_param) == names.end()) {
      throw Error(ErrorKind::InvalidArgument,
                  "--transform-param '" + *c.transform_param + "' is not a family parameter");
    }
    return *c.transform_param;
  }
  const auto& names = family.parameter_names();
  if (names.size() == 1) return names.front();
  if (names.empty()) return "";
  throw Error(ErrorKind::InvalidArgument, "family has several parameters; use --transform-param");
}

TransformKind kind_of(const std::string& s) {
  if (s == "translation") return TransformKind::Translation;
  if (s == "scaling") return TransformKind::Scaling;
  if (s == "power") return TransformKind::PowerScaling;
  return TransformKind::Projective;
}

// Explicit transform from --transform and its values, if complete.
std::optional<ParameterTransform> explicit_transform(const RunConfig& c,
                                                     const SuperpotentialFamily& family) {
  if (!c.transform) return std::nullopt;
  const std::string param = only_parameter(c, family);
  switch (kind_of(*c.transform)) {
    case TransformKind::Translation:
      if (!c.alpha) return std::nullopt;
      return ParameterTransform(Translation{*c.alpha, param});
    case TransformKind::Scaling:
      if (!c.q) return std::nullopt;
      return ParameterTransform(Scaling{*c.q, param});
    case TransformKind::PowerScaling:
      if (!c.q) return std::nullopt;
      return ParameterTransform(PowerScaling{*c.q, static_cast<int>(std::lround(*c.p)), param});
    default:
      if (!c.q) return std::nullopt;
      return ParameterTransform(Projective{*c.q, *c.p, param});
  }
}

SearchBudget budget_of(const RunConfig& c) {
  SearchBudget b;
  b.refinement_level = c.budget;
  return b;
}

// Transform for a family: explicit, from the record, or found by search
// (restricted to --transform when it names a kind without values).
std::optional<TransformMatch> find_transform(const RunConfig& c, const Input& in,
                                             std::string& origin) {
  const auto& family = *in.family;
  if (auto t = explicit_transform(c, family)) {
    origin = "given";
    const auto report = si_residual(family, in.params, *t, *in.grid, c.tol);
    return TransformMatch{*t, report, report.residual_stddev / (1.0 + std::abs(report.residual_mean)),
                          1};
  }
  if (in.record && !c.transform) {
    origin = "catalog";
    const auto report = si_residual(family, in.params, in.record->transform, *in.grid, c.tol);
    return TransformMatch{in.record->transform, report,
                          report.residual_stddev / (1.0 + std::abs(report.residual_mean)), 1};
  }
  origin = "search";
  auto candidates = default_candidates(family);
  if (c.transform) {
    const auto kind = kind_of(*c.transform);
    std::erase_if(candidates, [&](const CandidateFamily& cf) {
      return cf.kind != kind || (c.transform_param && cf.parameter != *c.transform_param);
    });
  }
  return search_transform(family, in.params, *in.grid, candidates, budget_of(c));
}

int cmd_solve(const RunConfig& c, const Input& in, std::ostream& out) {
  const auto v = potential_of(in);
  const auto pairs = solve_lowest(assemble_hamiltonian(v), c.levels);
  if (c.format == Format::Json) {
    json levels = json::array();
    for (const auto& p : pairs) {
      json values = json::array();
      for (double s : p.state.values()) values.push_back(round12(s));
      levels.push_back({{"n", p.index},
                        {"energy", round12(p.energy)},
                        {"nodes", count_nodes(p.state)},
                        {"bound", is_bound(p)},
                        {"state", std::move(values)}});
    }
    emit(c, out,
         io::dump({{"command", "solve"}, {"input", input_json(c, in)}, {"levels", levels}}));
    return kExitOk;
  }
  std::ostringstream table;
  table << "n,energy,nodes,bound\n";
  for (const auto& p : pairs) {
    table << p.index << ',' << format_number(p.energy) << ',' << count_nodes(p.state) << ','
          << (is_bound(p) ? "true" : "false") << '\n';
  }
  emit(c, out, table.str());
  if (c.output) {
    std::vector<std::string> names;
    std::vector<GridFunction> states;
    for (const auto& p : pairs) {
      names.push_back("psi_" + std::to_string(p.index));
      states.push_back(p.state);
    }
    std::ostringstream s;
    io::write_columns_csv(s, names, states);
    write_file(stem_of(*c.output) + "_states.csv", s.str());
  }
  return kExitOk;
}

int cmd_partner(const RunConfig& c, const Input& in, std::ostream& out) {
  PartnerPair pair = [&] {
    if (in.family) return partner_potentials(*in.family, in.params, *in.grid);
    const auto h = build_hierarchy(*in.tabulated, 1);
    const auto& level = h.levels.front();
    std::vector<double> vm(level.potential.size());
    for (std::size_t i = 0; i < vm.size(); ++i) vm[i] = level.potential[i] - level.ground_energy;
    const GridFunction v_minus(level.potential.grid(), std::move(vm));
    const auto dw = derivative(level.w);
    std::vector<double> vp(v_minus.size());
    for (std::size_t i = 0; i < vp.size(); ++i) vp[i] = v_minus[i] + 2.0 * dw[i];
    return PartnerPair{v_minus, GridFunction(v_minus.grid(), std::move(vp)), level.w, dw};
  }();
  const auto phase = analyze_phase(pair.w_used);
  if (c.format == Format::Json) {
    emit(c, out,
         io::dump({{"command", "partner"},
                   {"input", input_json(c, in)},
                   {"phase", io::to_json(phase)},
                   {"w", io::to_json(pair.w_used)},
                   {"w_prime", io::to_json(pair.w_prime_used)},
                   {"v_minus", io::to_json(pair.v_minus)},
                   {"v_plus", io::to_json(pair.v_plus)}}));
    return kExitOk;
  }
  std::ostringstream s;
  io::write_columns_csv(s, {"w", "w_prime", "v_minus", "v_plus"},
                        {pair.w_used, pair.w_prime_used, pair.v_minus, pair.v_plus});
  emit(c, out, s.str());
  return kExitOk;
}

int cmd_hierarchy(const RunConfig& c, const Input& in, std::ostream& out) {
  const auto h = build_hierarchy(potential_of(in), c.depth);
  std::vector<std::string> names;
  std::vector<GridFunction> potentials;
  for (const auto& level : h.levels) {
    names.push_back("V_" + std::to_string(level.depth));
    potentials.push_back(level.potential);
  }
  std::ostringstream table;
  io::write_columns_csv(table, names, potentials);
  if (c.format == Format::Csv) {
    emit(c, out, table.str());
    return kExitOk;
  }
  std::optional<std::string> csv_path;
  if (c.output) {
    csv_path = stem_of(*c.output) + "_potentials.csv";
    write_file(*csv_path, table.str());
  }
  json levels = json::array();
  for (const auto& level : h.levels) {
    levels.push_back(
        {{"depth", level.depth},
         {"ground_energy", round12(level.ground_energy)},
         {"potential_csv_ref", csv_path ? json(file_name(*csv_path) + "#V_" +
                                               std::to_string(level.depth))
                                        : json(nullptr)}});
  }
  emit(c, out,
       io::dump({{"command", "hierarchy"},
                 {"input", input_json(c, in)},
                 {"levels", std::move(levels)},
                 {"truncated", h.truncated},
                 {"stop_reason", h.stop_reason}}));
  return kExitOk;
}

int cmd_si_check(const RunConfig& c, const Input& in, std::ostream& out) {
  std::string origin;
  const auto match = find_transform(c, in, origin);
  const bool pass = match && match->report.pass;
  if (c.format == Format::Json) {
    json j{{"command", "si-check"}, {"input", input_json(c, in)}, {"origin", origin}};
    j["found"] = match.has_value();
    j["transform"] = match ? io::to_json(match->transform) : json(nullptr);
    j["report"] = match ? io::to_json(match->report) : json(nullptr);
    emit(c, out, io::dump(j));
  } else {
    std::ostringstream s;
    s << "transform,residual_mean,residual_stddev,pass,tolerance_used\n";
    if (match) {
      s << '"' << match->transform.describe() << "\"," << format_number(match->report.residual_mean)
        << ',' << format_number(match->report.residual_stddev) << ','
        << (match->report.pass ? "true" : "false") << ','
        << format_number(match->report.tolerance_used) << '\n';
    }
    emit(c, out, s.str());
  }
  return pass ? kExitOk : kExitFailure;
}

int cmd_spectrum(const RunConfig& c, const Input& in, std::ostream& out) {
  const int n_max = c.levels - 1;
  Spectrum algebraic;
  std::string origin = "catalog";
  std::optional<ParameterTransform> transform;
  if (in.record) {
    algebraic = record_spectrum(*in.record, in.params, n_max);
    transform = in.record->transform;
  } else {
    auto match = find_transform(c, in, origin);
    if (!match || !match->report.pass) {
      throw Error(ErrorKind::ConstructionFailure,
                  "no shape-invariance transform for the spectrum recursion");
    }
    transform = match->transform;
    const auto orbit = iterate_params(*transform, in.params, n_max);
    std::vector<double> r(orbit.sequence.size(), 0.0);
    for (int k = 1; k <= n_max; ++k) {
      r[static_cast<std::size_t>(k)] =
          si_residual(*in.family, orbit.sequence[static_cast<std::size_t>(k) - 1], *transform,
                      *in.grid, c.tol)
              .residual_mean;
    }
    auto measured = [&](const ParamMap& a) {
      for (std::size_t k = 1; k < orbit.sequence.size(); ++k) {
        if (orbit.sequence[k] == a) return r[k];
      }
      throw Error(ErrorKind::InvalidArgument, "parameters off the orbit");
    };
    const auto& family = *in.family;
    const auto& grid = *in.grid;
    auto normalizable = [&](const ParamMap& a) {
      try {
        return zero_mode(family, a, grid, ZeroModeSign::Minus).decays();
      } catch (const Error&) {
        return false;
      }
    };
    algebraic = algebraic_spectrum(measured, *transform, in.params, n_max, normalizable,
                                   "measured");
  }

  std::vector<std::optional<double>> oracle(static_cast<std::size_t>(c.levels));
  if (in.family) {
    const auto states = bound_states(partner_potentials(*in.family, in.params, *in.grid).v_minus,
                                     c.levels);
    for (const auto& s : states) oracle[static_cast<std::size_t>(s.index)] = s.energy;
  }

  if (c.format == Format::Json) {
    json rows = json::array();
    for (const auto& e : algebraic.entries) {
      const auto& o = oracle[static_cast<std::size_t>(e.n)];
      rows.push_back({{"n", e.n},
                      {"algebraic", round12(e.energy)},
                      {"oracle", o ? json(round12(*o)) : json(nullptr)},
                      {"valid", e.valid}});
    }
    emit(c, out,
         io::dump({{"command", "spectrum"},
                   {"input", input_json(c, in)},
                   {"transform", io::to_json(*transform)},
                   {"transform_origin", origin},
                   {"r_provenance", algebraic.r_provenance},
                   {"first_invalid", algebraic.first_invalid ? json(*algebraic.first_invalid)
                                                             : json(nullptr)},
                   {"levels", std::move(rows)}}));
    return kExitOk;
  }
  std::ostringstream s;
  s << "n,algebraic,oracle,valid\n";
  for (const auto& e : algebraic.entries) {
    const auto& o = oracle[static_cast<std::size_t>(e.n)];
    s << e.n << ',' << format_number(e.energy) << ',' << (o ? format_number(*o) : "") << ','
      << (e.valid ? "true" : "false") << '\n';
  }
  emit(c, out, s.str());
  return kExitOk;
}

int cmd_wavefunctions(const RunConfig& c, const Input& in, std::ostream& out) {
  std::string origin;
  const auto match = find_transform(c, in, origin);
  if (!match || !match->report.pass) {
    throw Error(ErrorKind::ConstructionFailure, "no shape-invariance transform for the chain");
  }
  std::vector<std::optional<GridFunction>> states(static_cast<std::size_t>(c.levels));
  std::vector<std::string> failures(static_cast<std::size_t>(c.levels));
  parallel_for(c.levels, [&](int n) {
    try {
      states[static_cast<std::size_t>(n)] =
          wavefunction_chain(*in.family, in.params, match->transform, n, *in.grid);
    } catch (const Error& e) {
      failures[static_cast<std::size_t>(n)] = e.what();
    }
  });
  int built = 0;
  while (built < c.levels && states[static_cast<std::size_t>(built)]) ++built;
  if (built == 0) throw Error(ErrorKind::ConstructionFailure, failures.front());
  const std::string stop = built < c.levels ? failures[static_cast<std::size_t>(built)] : "";

  if (c.format == Format::Json) {
    json list = json::array();
    for (int n = 0; n < built; ++n) {
      const auto& s = *states[static_cast<std::size_t>(n)];
      json values = json::array();
      for (double v : s.values()) values.push_back(round12(v));
      list.push_back({{"n", n}, {"nodes", count_nodes(s)}, {"values", std::move(values)}});
    }
    emit(c, out,
         io::dump({{"command", "wavefunctions"},
                   {"input", input_json(c, in)},
                   {"transform", io::to_json(match->transform)},
                   {"states", std::move(list)},
                   {"stopped", stop.empty() ? json(nullptr) : json(stop)}}));
    return kExitOk;
  }
  std::vector<std::string> names;
  std::vector<GridFunction> cols;
  for (int n = 0; n < built; ++n) {
    names.push_back("psi_" + std::to_string(n));
    cols.push_back(*states[static_cast<std::size_t>(n)]);
  }
  std::ostringstream s;
  io::write_columns_csv(s, names, cols);
  emit(c, out, s.str());
  return kExitOk;
}

int cmd_classify(const RunConfig& c, const Input& in, std::ostream& out) {
  VennTag tag;
  if (in.record) {
    tag = classify_record(*in.record, in.params, budget_of(c));
  } else if (in.family) {
    tag = classify_family(*in.family, in.params, *in.grid, budget_of(c));
  } else {
    tag = classify_tabulated(*in.tabulated);
  }
  if (c.fig) write_file(*c.fig, venn_dot(tag));
  if (c.format == Format::Json) {
    json j = io::to_json(tag);
    j["command"] = "classify";
    j["input"] = input_json(c, in);
    emit(c, out, io::dump(j));
    return kExitOk;
  }
  std::ostringstream s;
  s << "field,value\n"
    << "susy," << to_string(tag.susy) << '\n'
    << "shape_invariant," << to_string(tag.shape_invariant) << '\n'
    << "ih_factorizable," << to_string(tag.ih_factorizable) << '\n'
    << "exactly_solvable," << to_string(tag.exactly_solvable) << '\n';
  emit(c, out, s.str());
  return kExitOk;
}

int cmd_algebra_check(const RunConfig& c, const Input& in, std::ostream& out) {
  const auto cm = charge_matrices(*in.family, in.params, *in.grid);
  const auto report = verify_algebra(cm, c.tol.value_or(1e-10));
  if (c.format == Format::Json) {
    emit(c, out,
         io::dump({{"command", "algebra-check"},
                   {"input", input_json(c, in)},
                   {"report", io::to_json(report)}}));
  } else {
    std::ostringstream s;
    s << "norm,value\n"
      << "q_squared," << format_number(report.q_squared) << '\n'
      << "q_dagger_squared," << format_number(report.q_dagger_squared) << '\n'
      << "anticommutator," << format_number(report.anticommutator) << '\n'
      << "q_commutator," << format_number(report.q_commutator) << '\n'
      << "q_dagger_commutator," << format_number(report.q_dagger_commutator) << '\n';
    emit(c, out, s.str());
  }
  return report.pass ? kExitOk : kExitFailure;
}

int cmd_catalog(const RunConfig& c, std::ostream& out) {
  if (c.input_kind == InputKind::Catalog) {
    const auto& rec = get_record(c.input);
    if (c.format == Format::Json) {
      json j = io::to_json(rec);
      j["command"] = "catalog";
      emit(c, out, io::dump(j));
    } else {
      std::ostringstream s;
      s << "name,transform,r_closed_form,exactly_solvable\n"
        << rec.name << ",\"" << rec.transform.describe() << "\"," << rec.r_closed_form << ','
        << (rec.exactly_solvable ? "true" : "false") << '\n';
      emit(c, out, s.str());
    }
    return kExitOk;
  }
  if (c.format == Format::Json) {
    json records = json::array();
    for (const auto& name : list_catalog()) records.push_back(io::to_json(get_record(name)));
    emit(c, out, io::dump({{"command", "catalog"}, {"records", std::move(records)}}));
    return kExitOk;
  }
  std::ostringstream s;
  s << "name,transform,r_closed_form,exactly_solvable\n";
  for (const auto& name : list_catalog()) {
    const auto& rec = get_record(name);
    s << rec.name << ",\"" << rec.transform.describe() << "\"," << rec.r_closed_form << ','
      << (rec.exactly_solvable ? "true" : "false") << '\n';
  }
  emit(c, out, s.str());
  return kExitOk;
}

}  // namespace

const char* to_string(Command c) { return info(c).name; }

int thread_limit() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("SUSY_SPECTRA_THREADS");
  if (!env || !*env) return static_cast<int>(hw);
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Supersymmetric quantum mechanics toolkit", "susy-spectra"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  RunConfig config;
  std::vector<std::string> params;
  std::optional<std::string> catalog, expression, tabulated, format;
  int levels = config.levels;
  int depth = config.depth;
  int budget = config.budget;

  for (const auto& ci : kCommands) {
    CLI::App* sub = app.add_subcommand(ci.name, ci.help);
    sub->add_option("--catalog", catalog, "Catalog record name");
    sub->add_option("--w", expression, "Superpotential expression in x and parameters");
    sub->add_option("--tabulated", tabulated, "CSV file with x,V rows on a uniform grid");
    sub->add_option("--param", params, "Parameter value NAME=VALUE (repeatable)");
    sub->add_option("--x-min", config.x_min, "Grid start");
    sub->add_option("--x-max", config.x_max, "Grid end");
    sub->add_option("--points", config.points, "Grid points");
    sub->add_option("--levels", levels, "Number of levels")->capture_default_str();
    sub->add_option("--depth", depth, "Hierarchy depth")->capture_default_str();
    sub->add_option("--transform", config.transform,
                    "translation, scaling, power or projective");
    sub->add_option("--alpha", config.alpha, "Translation step");
    sub->add_option("--q", config.q, "Scale factor");
    sub->add_option("--p", config.p, "Exponent (power) or denominator slope (projective)");
    sub->add_option("--transform-param", config.transform_param, "Parameter the transform acts on");
    sub->add_option("--tol", config.tol, "Tolerance override");
    sub->add_option("--output", config.output, "Output file (default: standard output)");
    sub->add_option("--format", format, "csv or json");
    sub->add_option("--fig", config.fig, "Write the membership graph (Graphviz) to this file");
    sub->add_option("--budget", budget, "Search refinement level")->capture_default_str();
    sub->add_flag("--dump-config", config.dump_config, "Print the resolved settings and exit");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& ci : kCommands) {
    if (app.got_subcommand(ci.name)) {
      config.command = ci.command;
      config.format = ci.default_format;
    }
  }
  const int given = (catalog ? 1 : 0) + (expression ? 1 : 0) + (tabulated ? 1 : 0);
  if (given > 1) throw UsageError("conflicting inputs: give only one of --catalog, --w, --tabulated");
  if (catalog) {
    config.input_kind = InputKind::Catalog;
    config.input = *catalog;
  } else if (expression) {
    config.input_kind = InputKind::Expression;
    config.input = *expression;
  } else if (tabulated) {
    config.input_kind = InputKind::Tabulated;
    config.input = *tabulated;
  }
  if (format) {
    if (*format == "csv") {
      config.format = Format::Csv;
    } else if (*format == "json") {
      config.format = Format::Json;
    } else {
      throw UsageError("--format must be csv or json");
    }
  }
  config.params = parse_params(params);
  config.levels = levels;
  config.depth = depth;
  config.budget = budget;
  validate(config);
  return config;
}

std::string config_json(const RunConfig& c) {
  static const char* kinds[] = {"none", "catalog", "expression", "tabulated"};
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  auto optd = [](const std::optional<double>& o) { return o ? json(round12(*o)) : json(nullptr); };
  json j{{"command", to_string(c.command)},
         {"input", {{"kind", kinds[static_cast<int>(c.input_kind)]}, {"source", c.input}}},
         {"params", io::to_json(c.params)},
         {"grid",
          {{"x_min", optd(c.x_min)}, {"x_max", optd(c.x_max)}, {"n_points", opt(c.points)}}},
         {"levels", c.levels},
         {"depth", c.depth},
         {"transform",
          {{"kind", opt(c.transform)},
           {"alpha", optd(c.alpha)},
           {"q", optd(c.q)},
           {"p", optd(c.p)},
           {"parameter", opt(c.transform_param)}}},
         {"tol", optd(c.tol)},
         {"output", opt(c.output)},
         {"format", c.format == Format::Csv ? "csv" : "json"},
         {"fig", opt(c.fig)},
         {"budget", c.budget},
         {"threads", thread_limit()}};
  return io::dump(j);
}

int run(const RunConfig& config, std::ostream& out) {
  if (config.dump_config) {
    out << config_json(config);
    return kExitOk;
  }
  if (config.command == Command::Catalog) return cmd_catalog(config, out);
  const Input in = resolve_input(config);
  switch (config.command) {
    case Command::Solve: return cmd_solve(config, in, out);
    case Command::Partner: return cmd_partner(config, in, out);
    case Command::Hierarchy: return cmd_hierarchy(config, in, out);
    case Command::SiCheck: return cmd_si_check(config, in, out);
    case Command::Spectrum: return cmd_spectrum(config, in, out);
    case Command::Wavefunctions: return cmd_wavefunctions(config, in, out);
    case Command::Classify: return cmd_classify(config, in, out);
    case Command::AlgebraCheck: return cmd_algebra_check(config, in, out);
    case Command::Catalog: break;
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run(config, out);
  } catch (const Error& e) {
    err << "error (" << susyqm::to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace susyqm::cli
