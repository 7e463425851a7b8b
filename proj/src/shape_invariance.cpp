#include "susyqm/shape_invariance.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "susyqm/errors.hpp"
#include "susyqm/susy.hpp"

namespace susyqm {

namespace {

constexpr double kCycleMatch = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same_params(const ParamMap& a, const ParamMap& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    if (it == b.end() || std::abs(it->second - v) > tol) return false;
  }
  return true;
}

ParamMap with_value(ParamMap a, const std::string& name, double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument,
                "transform produced a non-finite value for parameter '" + name + "'");
  }
  a[name] = v;
  return a;
}

double value_of(const ParamMap& a, const std::string& name) {
  const auto it = a.find(name);
  if (it == a.end()) {
    throw Error(ErrorKind::InvalidArgument, "transform parameter '" + name + "' not in the map");
  }
  return it->second;
}

struct StepResidual {
  double mean;
  double stddev;
  int points;
};

StepResidual step_residual(const SuperpotentialFamily& family, const ParamMap& a0,
                           const ParamMap& a1, const Grid1D& grid) {
  const auto upper = partner_potentials(family, a0, grid);
  const auto lower = partner_potentials(family, a1, grid);
  const int n = grid.n_points();
  const int band = grid.boundary_band();
  const int first = std::min(band + 1, n / 2);
  const int last = std::max(n - 2 - band, first);
  double sum = 0.0;
  int count = 0;
  for (int i = first; i <= last; ++i) {
    sum += upper.v_plus[i] - lower.v_minus[i];
    ++count;
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (int i = first; i <= last; ++i) {
    const double d = upper.v_plus[i] - lower.v_minus[i] - mean;
    ss += d * d;
  }
  return StepResidual{mean, std::sqrt(ss / count), count};
}

double default_tolerance(const SuperpotentialFamily& family) {
  return family.has_analytic_derivative() ? kResidualTolAnalytic : kResidualTolFiniteDifference;
}

ParameterTransform make_transform(const CandidateFamily& c, double value, double exponent) {
  switch (c.kind) {
    case TransformKind::Translation: return Translation{value, c.parameter};
    case TransformKind::Scaling: return Scaling{value, c.parameter};
    case TransformKind::PowerScaling:
      return PowerScaling{value, static_cast<int>(std::lround(exponent)), c.parameter};
    case TransformKind::Projective: return Projective{value, exponent, c.parameter};
    case TransformKind::Cyclic: break;
  }
  throw Error(ErrorKind::InvalidArgument, "cyclic transforms are not searchable");
}

struct Evaluation {
  double worst = std::numeric_limits<double>::infinity();
  std::optional<ResidualReport> first;
};

Evaluation evaluate_transform(const SuperpotentialFamily& family, const ParamMap& a0,
                              const ParameterTransform& t, const Grid1D& grid, int steps,
                              double tol) {
  Evaluation ev;
  try {
    t.validate();
    const auto orbit = iterate_params(t, a0, steps);
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      const auto& from = orbit.sequence[static_cast<std::size_t>(k)];
      const auto& to = orbit.sequence[static_cast<std::size_t>(k) + 1];
      const auto r = step_residual(family, from, to, grid);
      if (!std::isfinite(r.mean) || !std::isfinite(r.stddev)) return ev;
      const double normalized = r.stddev / (1.0 + std::abs(r.mean));
      worst = std::max(worst, normalized);
      if (k == 0) {
        ev.first = ResidualReport{r.mean, r.stddev, normalized < tol, tol,
                                  family.has_analytic_derivative(), from, to, r.points};
      }
    }
    ev.worst = worst;
  } catch (const Error&) {
    ev = Evaluation{};
  }
  return ev;
}

}  // namespace

const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Translation: return "translation";
    case TransformKind::Scaling: return "scaling";
    case TransformKind::PowerScaling: return "power";
    case TransformKind::Projective: return "projective";
    case TransformKind::Cyclic: return "cyclic";
  }
  return "unknown";
}

TransformKind ParameterTransform::kind() const noexcept {
  return static_cast<TransformKind>(v_.index());
}

void ParameterTransform::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  std::visit(overloaded{
                 [&](const Translation& t) {
                   if (!std::isfinite(t.alpha)) bad("translation step must be finite");
                 },
                 [&](const Scaling& t) {
                   if (!(t.q > 0.0 && t.q < 1.0)) bad("scaling needs 0 < q < 1");
                 },
                 [&](const PowerScaling& t) {
                   if (!(t.q > 0.0 && t.q < 1.0)) bad("power scaling needs 0 < q < 1");
                 },
                 [&](const Projective& t) {
                   if (!(t.q > 0.0) || !(t.p < 1.0) || !std::isfinite(t.q) || !std::isfinite(t.p)) {
                     bad("projective transform needs q > 0 and p < 1");
                   }
                 },
                 [&](const Cyclic& t) {
                   if (t.values.empty()) bad("cyclic transform needs a period of at least 1");
                 },
             },
             v_);
}

ParamMap ParameterTransform::apply(const ParamMap& a) const {
  validate();
  return std::visit(
      overloaded{
          [&](const Translation& t) {
            if (t.parameter.empty()) return a;
            return with_value(a, t.parameter, value_of(a, t.parameter) + t.alpha);
          },
          [&](const Scaling& t) {
            if (t.parameter.empty()) return a;
            return with_value(a, t.parameter, t.q * value_of(a, t.parameter));
          },
          [&](const PowerScaling& t) {
            if (t.parameter.empty()) return a;
            return with_value(a, t.parameter, t.q * std::pow(value_of(a, t.parameter), t.p));
          },
          [&](const Projective& t) {
            if (t.parameter.empty()) return a;
            const double v = value_of(a, t.parameter);
            const double denom = 1.0 + t.p * v;
            if (denom == 0.0) {
              throw Error(ErrorKind::InvalidArgument, "projective transform hits 1 + p a = 0");
            }
            return with_value(a, t.parameter, t.q * v / denom);
          },
          [&](const Cyclic& t) {
            for (std::size_t k = 0; k < t.values.size(); ++k) {
              if (same_params(a, t.values[k], kCycleMatch)) {
                return t.values[(k + 1) % t.values.size()];
              }
            }
            throw Error(ErrorKind::InvalidArgument,
                        "parameters {" + susyqm::describe(a) + "} are not on the cycle");
          },
      },
      v_);
}

std::string ParameterTransform::describe() const {
  std::ostringstream out;
  out.precision(12);
  std::visit(overloaded{
                 [&](const Translation& t) {
                   out << "Translation(" << t.alpha << (t.parameter.empty() ? "" : ", " + t.parameter)
                       << ")";
                 },
                 [&](const Scaling& t) {
                   out << "Scaling(" << t.q << (t.parameter.empty() ? "" : ", " + t.parameter)
                       << ")";
                 },
                 [&](const PowerScaling& t) {
                   out << "PowerScaling(" << t.q << ", " << t.p
                       << (t.parameter.empty() ? "" : ", " + t.parameter) << ")";
                 },
                 [&](const Projective& t) {
                   out << "Projective(" << t.q << ", " << t.p
                       << (t.parameter.empty() ? "" : ", " + t.parameter) << ")";
                 },
                 [&](const Cyclic& t) { out << "Cyclic(period " << t.values.size() << ")"; },
             },
             v_);
  return out.str();
}

ParameterOrbit iterate_params(const ParameterTransform& t, const ParamMap& a0, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "orbit length must be non-negative");
  t.validate();
  if (const auto* c = std::get_if<Cyclic>(&t.variant())) {
    if (!same_params(a0, c->values.front(), kCycleMatch)) {
      throw Error(ErrorKind::InvalidArgument, "cyclic orbit must start at the first cycle entry");
    }
  }
  ParameterOrbit orbit{a0, {a0}};
  orbit.sequence.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) orbit.sequence.push_back(t.apply(orbit.sequence.back()));
  return orbit;
}

ResidualReport si_residual(const SuperpotentialFamily& family, const ParamMap& a0,
                           const ParameterTransform& t, const Grid1D& grid,
                           std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(family));
  const ParamMap a1 = t.apply(a0);
  const auto r = step_residual(family, a0, a1, grid);
  const bool pass = r.stddev < tol * (1.0 + std::abs(r.mean));
  return ResidualReport{r.mean, r.stddev, pass, tol, family.has_analytic_derivative(),
                        a0, a1, r.points};
}

Spectrum algebraic_spectrum(const RFunction& r, const ParameterTransform& t, const ParamMap& a0,
                            int n_max, const Validity& validity, std::string r_provenance) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be non-negative");
  const auto orbit = iterate_params(t, a0, n_max);
  Spectrum s;
  s.r_provenance = std::move(r_provenance);
  double energy = 0.0;
  bool valid = !validity || validity(orbit.sequence[0]);
  s.entries.push_back(SpectrumEntry{0, 0.0, valid});
  for (int n = 1; n <= n_max; ++n) {
    const auto& an = orbit.sequence[static_cast<std::size_t>(n)];
    const double rn = r(an);
    energy += rn;
    valid = valid && rn > 0.0 && (!validity || validity(an));
    s.entries.push_back(SpectrumEntry{n, energy, valid});
  }
  for (const auto& e : s.entries) {
    if (!e.valid) {
      s.first_invalid = e.n;
      break;
    }
  }
  return s;
}

GridFunction wavefunction_chain(const SuperpotentialFamily& family, const ParamMap& a0,
                                const ParameterTransform& t, int n, const Grid1D& grid) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be non-negative");
  const auto check = si_residual(family, a0, t, grid);
  if (!check.pass) {
    throw Error(ErrorKind::ConstructionFailure,
                "shape invariance does not hold for " + family.name() + " under " +
                    t.describe() + " (residual stddev " + std::to_string(check.residual_stddev) +
                    ")");
  }
  const auto orbit = iterate_params(t, a0, n);
  const auto ground = zero_mode(family, orbit.sequence.back(), grid, ZeroModeSign::Minus);
  if (!ground.decays()) {
    throw Error(ErrorKind::ConstructionFailure,
                "ground state at a_" + std::to_string(n) + " = {" +
                    describe(orbit.sequence.back()) + "} is not normalizable");
  }
  GridFunction psi = normalize(ground.amplitude);
  for (int k = n - 1; k >= 0; --k) {
    psi = normalize(apply_Adag(family, orbit.sequence[static_cast<std::size_t>(k)], psi));
  }
  psi = fix_sign(psi);
  const int nodes = count_nodes(psi);
  if (nodes != n) {
    throw Error(ErrorKind::ConstructionFailure,
                "chain state for level " + std::to_string(n) + " has " + std::to_string(nodes) +
                    " nodes");
  }
  return psi;
}

std::vector<CandidateFamily> default_candidates(const SuperpotentialFamily& family) {
  const auto& names = family.parameter_names();
  if (names.empty()) return {CandidateFamily{TransformKind::Translation, "", 0.0, 0.0, {}}};
  std::vector<CandidateFamily> out;
  for (const auto& p : names) out.push_back({TransformKind::Translation, p, -5.0, 5.0, {}});
  for (const auto& p : names) out.push_back({TransformKind::Scaling, p, 0.0, 1.0, {}});
  for (const auto& p : names) {
    out.push_back({TransformKind::PowerScaling, p, 0.0, 1.0, {-2.0, -1.0, 2.0, 3.0}});
  }
  for (const auto& p : names) {
    out.push_back({TransformKind::Projective, p, 0.0, 2.0, {-0.5, -0.25, 0.25, 0.5}});
  }
  return out;
}

std::optional<TransformMatch> search_transform(const SuperpotentialFamily& family,
                                               const ParamMap& a0, const Grid1D& grid,
                                               const std::vector<CandidateFamily>& candidates,
                                               const SearchBudget& budget) {
  const double tol = default_tolerance(family);
  const int steps = std::max(budget.orbit_steps, 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  for (const auto& c : candidates) {
    const std::vector<double> exponents = c.exponents.empty() ? std::vector<double>{0.0}
                                                              : c.exponents;
    std::optional<ParameterTransform> best_t;
    Evaluation best;
    auto consider = [&](double value, double exponent) {
      const auto t = make_transform(c, value, exponent);
      auto ev = evaluate_transform(family, a0, t, grid, steps, tol);
      if (ev.worst < best.worst) {
        best = std::move(ev);
        best_t = t;
      }
      return ev.worst;
    };

    for (double exponent : exponents) {
      for (int level = 0; level <= budget.refinement_level; ++level) {
        const int count = (c.hi > c.lo) ? 10 * (1 << level) + 1 : 1;
        const double step = count > 1 ? (c.hi - c.lo) / (count - 1) : 0.0;
        double level_best = std::numeric_limits<double>::infinity();
        double level_arg = c.lo;
        for (int i = 0; i < count; ++i) {
          const double v = c.lo + i * step;
          const double f = consider(v, exponent);
          if (f < level_best) {
            level_best = f;
            level_arg = v;
          }
        }
        // A passing trial value is kept as is; refinement would only trade
        // it for round-off noise.
        if (level_best < tol) break;
        if (count == 1 || !std::isfinite(level_best)) continue;
        // Golden-section refinement around the best trial value.
        double a = std::max(c.lo, level_arg - step);
        double b = std::min(c.hi, level_arg + step);
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = consider(x1, exponent);
        double f2 = consider(x2, exponent);
        for (int it = 0; it < budget.golden_iterations; ++it) {
          if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = consider(x1, exponent);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = consider(x2, exponent);
          }
        }
      }
      if (best.worst < tol) break;
    }
    if (best_t && best.first && best.worst < tol) {
      return TransformMatch{*best_t, *best.first, best.worst, steps};
    }
  }
  return std::nullopt;
}

}  // namespace susyqm
