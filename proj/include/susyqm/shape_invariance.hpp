#pragma once

// Parameter transforms, the shape-invariance residual, the algebraic
// spectrum recursion and the A^dagger chain for excited states.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "susyqm/numerics.hpp"
#include "susyqm/params.hpp"
#include "susyqm/superpotential.hpp"

namespace susyqm {

enum class TransformKind { Translation, Scaling, PowerScaling, Projective, Cyclic };

const char* to_string(TransformKind kind);

/// a1 = a0 + alpha
struct Translation {
  double alpha;
  std::string parameter;
};
/// a1 = q a0, 0 < q < 1
struct Scaling {
  double q;
  std::string parameter;
};
/// a1 = q a0^p, p integer, 0 < q < 1
struct PowerScaling {
  double q;
  int p;
  std::string parameter;
};
/// a1 = q a0 / (1 + p a0), q > 0, p < 1
struct Projective {
  double q;
  double p;
  std::string parameter;
};
/// a_k = values[k mod period]; a_period = a_0.
struct Cyclic {
  std::vector<ParamMap> values;
};

/// One of the five transform families. Scalar transforms act on a single
/// named parameter; an empty name means the family has no parameters and
/// the map is the identity.
class ParameterTransform {
 public:
  using Variant = std::variant<Translation, Scaling, PowerScaling, Projective, Cyclic>;

  ParameterTransform(Translation t) : v_(std::move(t)) {}
  ParameterTransform(Scaling t) : v_(std::move(t)) {}
  ParameterTransform(PowerScaling t) : v_(std::move(t)) {}
  ParameterTransform(Projective t) : v_(std::move(t)) {}
  ParameterTransform(Cyclic t) : v_(std::move(t)) {}

  TransformKind kind() const noexcept;
  const Variant& variant() const noexcept { return v_; }

  /// Throws Error(InvalidArgument) when the family's constraints fail.
  void validate() const;

  /// a1 = f(a0).
  ParamMap apply(const ParamMap& a) const;

  std::string describe() const;

 private:
  Variant v_;
};

struct ParameterOrbit {
  ParamMap a0;
  std::vector<ParamMap> sequence;  // a_0 .. a_n
};

ParameterOrbit iterate_params(const ParameterTransform& t, const ParamMap& a0, int n);

/// residual(x) = V+(x, a0) - V-(x, a1) over the interior (boundary bands
/// excluded). Shape invariance holds when the residual does not depend on x:
/// pass iff stddev < tolerance (1 + |mean|).
struct ResidualReport {
  double residual_mean;
  double residual_stddev;
  bool pass;
  double tolerance_used;
  bool analytic_derivative;
  ParamMap a0;
  ParamMap a1;
  int points_used;
};

inline constexpr double kResidualTolAnalytic = 1e-6;
inline constexpr double kResidualTolFiniteDifference = 1e-4;

ResidualReport si_residual(const SuperpotentialFamily& family, const ParamMap& a0,
                           const ParameterTransform& t, const Grid1D& grid,
                           std::optional<double> tolerance = std::nullopt);

struct SpectrumEntry {
  int n;
  double energy;
  bool valid;  // false once the orbit leaves the bound-state region
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;
  std::string r_provenance;          // "closed-form" or "measured"
  std::optional<int> first_invalid;  // first flagged level, if any
};

using RFunction = std::function<double(const ParamMap&)>;
using Validity = std::function<bool(const ParamMap&)>;

/// E_0 = 0, E_n = sum_{k=1..n} R(a_k). Level n is flagged when R(a_k) <= 0
/// for some k <= n or when `validity(a_n)` fails.
Spectrum algebraic_spectrum(const RFunction& r, const ParameterTransform& t, const ParamMap& a0,
                            int n_max, const Validity& validity = {},
                            std::string r_provenance = "closed-form");

/// psi_n(x, a0) = A^dagger(a0) ... A^dagger(a_{n-1}) psi_0(x, a_n), normalized
/// and sign fixed like the oracle states. Throws Error(ConstructionFailure)
/// when the shape-invariance check fails, psi_0(x, a_n) is not normalizable,
/// or the result does not have n nodes.
GridFunction wavefunction_chain(const SuperpotentialFamily& family, const ParamMap& a0,
                                const ParameterTransform& t, int n, const Grid1D& grid);

struct CandidateFamily {
  TransformKind kind;
  std::string parameter;
  double lo;  // scalar search range (alpha, or q)
  double hi;
  std::vector<double> exponents;  // p values for PowerScaling / Projective
};

/// Translation, scaling, power and projective candidates for every
/// parameter of the family, in scan order.
std::vector<CandidateFamily> default_candidates(const SuperpotentialFamily& family);

/// Work bound for search_transform. Trial grids at refinement level L hold
/// 10 * 2^L + 1 points, and a search at level L also runs every lower
/// level, so raising the budget never loses a transform found before.
struct SearchBudget {
  int refinement_level = 2;
  int golden_iterations = 60;
  int orbit_steps = 3;
};

struct TransformMatch {
  ParameterTransform transform;
  ResidualReport report;      // first step, a0 -> a1
  double worst_normalized;    // max over checked orbit steps of stddev / (1 + |mean|)
  int orbit_steps;
};

/// Scans candidates in order; returns the first family whose best transform
/// passes on every checked orbit step, or nullopt.
std::optional<TransformMatch> search_transform(const SuperpotentialFamily& family,
                                               const ParamMap& a0, const Grid1D& grid,
                                               const std::vector<CandidateFamily>& candidates,
                                               const SearchBudget& budget = {});

}  // namespace susyqm
