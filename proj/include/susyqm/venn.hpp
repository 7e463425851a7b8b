#pragma once

// Membership of a potential in the SUSY, shape-invariant, Infeld-Hull and
// exactly-solvable sets, with tri-state answers and the supporting reports.

#include <optional>
#include <string>
#include <vector>

#include "susyqm/catalog.hpp"
#include "susyqm/shape_invariance.hpp"
#include "susyqm/susy.hpp"

namespace susyqm {

enum class Membership { Yes, No, Unknown };
enum class SearchOutcome { Yes, NoWithinSearch, Unknown };
enum class Solvability { Certified, Unknown };

const char* to_string(Membership m);
const char* to_string(SearchOutcome s);
const char* to_string(Solvability s);

struct VennEvidence {
  std::string subject;                    // expression, record name or "tabulated"
  std::optional<PhaseReport> phase;
  std::optional<double> ground_energy;    // oracle ground energy of V-
  int bound_states = 0;                   // oracle bound states of V- found (capped)
  std::optional<int> hierarchy_levels;    // tabulated path only
  std::optional<TransformMatch> transform;
  std::optional<std::string> declared_transform;  // (f, R)-only records
  std::vector<std::string> notes;
};

struct VennTag {
  Membership susy = Membership::Unknown;
  SearchOutcome shape_invariant = SearchOutcome::Unknown;
  SearchOutcome ih_factorizable = SearchOutcome::Unknown;
  Solvability exactly_solvable = Solvability::Unknown;
  VennEvidence evidence;
};

/// Violated tag invariants, empty when the tag is consistent.
std::vector<std::string> tag_violations(const VennTag& tag);

/// `catalog_exactly_solvable` marks families known to be exactly solvable
/// independently of the search.
VennTag classify_family(const SuperpotentialFamily& family, const ParamMap& a0, const Grid1D& grid,
                        const SearchBudget& budget = {}, bool catalog_exactly_solvable = false);

/// Catalog records: families go through classify_family on the record's
/// box; (f, R)-only records are classified from their declared transform.
VennTag classify_record(const SIPRecord& record, const ParamMap& params,
                        const SearchBudget& budget = {});

VennTag classify_tabulated(const GridFunction& potential);

/// Graphviz description of the four sets with the subject's placement.
std::string venn_dot(const VennTag& tag);

}  // namespace susyqm
