#include "susyqm/venn.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "susyqm/errors.hpp"
#include "susyqm/oracle.hpp"

namespace susyqm {

namespace {

// Bound states are counted up to this many levels as evidence.
constexpr int kEvidenceLevels = 4;

bool in_set(Membership m) { return m == Membership::Yes; }
bool in_set(SearchOutcome s) { return s == SearchOutcome::Yes; }

// Best translation reproducing the declared orbit value by value.
bool orbit_is_translational(const SIPRecord& record, const ParamMap& a0,
                            const SearchBudget& budget) {
  if (record.translational()) return true;
  const int steps = std::max(budget.orbit_steps, 1);
  const auto orbit = iterate_params(record.transform, a0, steps);
  for (const auto& [name, start] : a0) {
    for (int level = 0; level <= budget.refinement_level; ++level) {
      const int count = 10 * (1 << level) + 1;
      const double step = 10.0 / (count - 1);
      for (int i = 0; i < count; ++i) {
        const double alpha = -5.0 + i * step;
        double worst = 0.0;
        for (int k = 1; k <= steps; ++k) {
          for (const auto& [other, v] : orbit.sequence[static_cast<std::size_t>(k)]) {
            const double expected = other == name ? start + k * alpha : a0.at(other);
            worst = std::max(worst, std::abs(v - expected) / (1.0 + std::abs(v)));
          }
        }
        if (worst < kResidualTolAnalytic) return true;
      }
    }
  }
  return false;
}

}  // namespace

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    case Membership::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(SearchOutcome s) {
  switch (s) {
    case SearchOutcome::Yes: return "yes";
    case SearchOutcome::NoWithinSearch: return "no-within-search";
    case SearchOutcome::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Solvability s) {
  return s == Solvability::Certified ? "certified" : "unknown";
}

std::vector<std::string> tag_violations(const VennTag& tag) {
  std::vector<std::string> out;
  if (in_set(tag.shape_invariant) && !in_set(tag.susy)) {
    out.push_back("shape_invariant=yes requires susy=yes");
  }
  if (in_set(tag.ih_factorizable)) {
    if (!in_set(tag.shape_invariant)) out.push_back("ih_factorizable=yes requires shape_invariant=yes");
    const bool translation =
        (tag.evidence.transform &&
         tag.evidence.transform->transform.kind() == TransformKind::Translation);
    if (!translation) out.push_back("ih_factorizable=yes requires a translation transform");
  }
  if (in_set(tag.shape_invariant) && tag.exactly_solvable != Solvability::Certified) {
    out.push_back("shape_invariant=yes requires exactly_solvable=certified");
  }
  return out;
}

VennTag classify_family(const SuperpotentialFamily& family, const ParamMap& a0, const Grid1D& grid,
                        const SearchBudget& budget, bool catalog_exactly_solvable) {
  VennTag tag;
  tag.evidence.subject = family.name();

  try {
    const auto pair = partner_potentials(family, a0, grid);
    const auto states = bound_states(pair.v_minus, kEvidenceLevels);
    tag.evidence.bound_states = static_cast<int>(states.size());
    if (states.empty()) {
      tag.susy = Membership::No;
      tag.evidence.notes.push_back("oracle finds no bound state of V-");
    } else {
      tag.susy = Membership::Yes;
      tag.evidence.ground_energy = states.front().energy;
    }
    tag.evidence.phase = analyze_phase(pair.w_used);
  } catch (const Error& e) {
    tag.evidence.notes.push_back(std::string("evaluation failed: ") + e.what());
  }

  if (tag.susy == Membership::Yes && tag.evidence.phase &&
      tag.evidence.phase->phase == SusyPhase::UnbrokenMinus) {
    auto match = search_transform(family, a0, grid, default_candidates(family), budget);
    if (match) {
      tag.shape_invariant = SearchOutcome::Yes;
      tag.ih_factorizable = match->transform.kind() == TransformKind::Translation
                                ? SearchOutcome::Yes
                                : SearchOutcome::NoWithinSearch;
      tag.evidence.transform = std::move(match);
    } else {
      tag.shape_invariant = SearchOutcome::NoWithinSearch;
      tag.ih_factorizable = SearchOutcome::NoWithinSearch;
      tag.evidence.notes.push_back("no candidate transform passed within the search budget");
    }
  } else if (tag.susy == Membership::Yes) {
    tag.evidence.notes.push_back(
        "the given w does not generate the unbroken pair; shape invariance not tested");
  }

  if (tag.shape_invariant == SearchOutcome::Yes || catalog_exactly_solvable) {
    tag.exactly_solvable = Solvability::Certified;
  }
  return tag;
}

VennTag classify_record(const SIPRecord& record, const ParamMap& params,
                        const SearchBudget& budget) {
  const ParamMap a0 = record.resolve(params);
  if (record.family) {
    VennTag tag = classify_family(*record.family, a0, record.domain.grid(), budget,
                                  record.exactly_solvable);
    tag.evidence.subject = record.name;
    return tag;
  }

  VennTag tag;
  tag.evidence.subject = record.name;
  tag.evidence.declared_transform = record.transform.describe();
  tag.susy = Membership::Yes;
  tag.evidence.notes.push_back("SUSY pair and transform declared by the record");
  const auto spectrum = record_spectrum(record, a0, std::max(budget.orbit_steps, 1));
  bool positive = true;
  for (const auto& e : spectrum.entries) positive = positive && e.valid;
  if (positive) {
    tag.shape_invariant = SearchOutcome::Yes;
  } else {
    tag.evidence.notes.push_back("declared remainder is not positive on the orbit");
  }
  if (tag.shape_invariant == SearchOutcome::Yes) {
    tag.ih_factorizable = orbit_is_translational(record, a0, budget)
                              ? SearchOutcome::Unknown
                              : SearchOutcome::NoWithinSearch;
    if (tag.ih_factorizable == SearchOutcome::Unknown) {
      tag.evidence.notes.push_back("declared orbit matches a translation");
    }
  }
  if (tag.shape_invariant == SearchOutcome::Yes || record.exactly_solvable) {
    tag.exactly_solvable = Solvability::Certified;
  }
  return tag;
}

VennTag classify_tabulated(const GridFunction& potential) {
  VennTag tag;
  tag.evidence.subject = "tabulated";
  try {
    const auto states = bound_states(potential, kEvidenceLevels);
    tag.evidence.bound_states = static_cast<int>(states.size());
    if (states.empty()) {
      tag.susy = Membership::No;
      tag.evidence.notes.push_back("oracle finds no bound state");
    } else {
      tag.evidence.ground_energy = states.front().energy;
      const auto h = build_hierarchy(potential, 1);
      tag.evidence.hierarchy_levels = static_cast<int>(h.levels.size());
      tag.susy = Membership::Yes;
    }
  } catch (const Error& e) {
    tag.evidence.notes.push_back(std::string("evaluation failed: ") + e.what());
  }
  tag.evidence.notes.push_back("no parametric family: shape invariance not tested");
  return tag;
}

std::string venn_dot(const VennTag& tag) {
  auto color = [](const char* state) {
    const std::string s = state;
    if (s == "yes" || s == "certified") return "palegreen";
    if (s == "no" || s == "no-within-search") return "lightpink";
    return "lightgray";
  };
  struct SetNode {
    const char* id;
    const char* label;
    const char* state;
  };
  const SetNode sets[] = {
      {"susy", "SUSY", to_string(tag.susy)},
      {"si", "shape invariant", to_string(tag.shape_invariant)},
      {"ih", "Infeld-Hull", to_string(tag.ih_factorizable)},
      {"es", "exactly solvable", to_string(tag.exactly_solvable)},
  };
  std::ostringstream out;
  out << "digraph venn {\n";
  out << "  label=\"" << tag.evidence.subject << "\";\n";
  out << "  node [shape=ellipse, style=filled];\n";
  for (const auto& s : sets) {
    out << "  " << s.id << " [label=\"" << s.label << "\\n" << s.state << "\", fillcolor="
        << color(s.state) << ", membership=\"" << s.state << "\"];\n";
  }
  out << "  ih -> si [label=\"subset\"];\n";
  out << "  si -> susy [label=\"subset\"];\n";
  out << "  si -> es [label=\"subset\"];\n";
  out << "  subject [shape=point];\n";
  for (const auto& s : sets) {
    const std::string st = s.state;
    if (st == "yes" || st == "certified") out << "  subject -> " << s.id << " [style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace susyqm
