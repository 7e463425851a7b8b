#pragma once

// Built-in shape-invariant families with their transforms, remainders and
// recommended boxes.

#include <optional>
#include <string>
#include <vector>

#include "susyqm/shape_invariance.hpp"
#include "susyqm/superpotential.hpp"
#include "susyqm/susy.hpp"

namespace susyqm {

struct SIPRecord {
  std::string name;
  /// Empty for records defined only by (f, R).
  std::optional<SuperpotentialFamily> family;
  ParameterTransform transform;
  /// R(a_1) as an expression in the parameters.
  std::string r_closed_form;
  ParamMap default_params;
  /// Level n is valid when validity(a_n) holds.
  Validity validity;
  std::string validity_note;
  DomainHint domain;
  std::string notes;
  bool exactly_solvable = true;

  bool translational() const { return transform.kind() == TransformKind::Translation; }
  /// R(a) evaluated from `r_closed_form`.
  double r(const ParamMap& a) const;
  /// `params` over the defaults.
  ParamMap resolve(const ParamMap& params) const;
};

std::vector<std::string> list_catalog();

/// Throws Error(UnknownName).
const SIPRecord& get_record(const std::string& name);

/// Explicit per-record formula for E_n, n = 0 .. n_max. Throws
/// Error(InvalidArgument) when level 0 is outside the validity region.
Spectrum closed_form_spectrum(const std::string& name, const ParamMap& params, int n_max);

/// Generic recursion with the record's R, transform and validity.
Spectrum record_spectrum(const SIPRecord& record, const ParamMap& params, int n_max);

struct Instance {
  PartnerPair pair;
  GridFunction w;
};

/// Throws Error(InvalidArgument) for (f, R)-only records and
/// Error(Singularity) when the grid crosses a singular point.
Instance instantiate(const std::string& name, const ParamMap& params, const Grid1D& grid);

}  // namespace susyqm
