#include "susyqm/susy.hpp"

#include <algorithm>
#include <cmath>

#include "susyqm/errors.hpp"

namespace susyqm {

namespace {

// exp() overflows just above 709.
constexpr double kMaxExponent = 700.0;

std::vector<double> pointwise(const GridFunction& a, const GridFunction& b,
                              double (*op)(double, double)) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

// Diagonal and first sub-diagonal of a symmetric tridiagonal sparse matrix.
std::pair<std::vector<double>, std::vector<double>> tridiagonal_bands(const SparseMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n > 0 ? n - 1 : 0, 0.0);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      if (r == c) {
        diag[r] = it.value();
      } else if (r == c + 1) {
        off[c] = it.value();
      } else if (r + 1 != c && it.value() != 0.0) {
        throw Error(ErrorKind::InvalidArgument, "sector Hamiltonian is not tridiagonal");
      }
    }
  }
  return {diag, off};
}

}  // namespace

const char* to_string(SusyPhase phase) {
  switch (phase) {
    case SusyPhase::UnbrokenMinus: return "unbroken-minus";
    case SusyPhase::UnbrokenPlus: return "unbroken-plus";
    case SusyPhase::Broken: return "broken";
  }
  return "unknown";
}

PartnerPair partner_potentials(const GridFunction& w, const GridFunction& w_prime) {
  auto vm = pointwise(w, w_prime, [](double a, double b) { return a * a - b; });
  auto vp = pointwise(w, w_prime, [](double a, double b) { return a * a + b; });
  return PartnerPair{GridFunction(w.grid(), std::move(vm)), GridFunction(w.grid(), std::move(vp)),
                     w, w_prime};
}

PartnerPair partner_potentials(const SuperpotentialFamily& family, const ParamMap& params,
                               const Grid1D& grid) {
  return partner_potentials(family.w(grid, params), family.w_prime(grid, params));
}

ZeroMode zero_mode(const GridFunction& w, ZeroModeSign sign) {
  auto exponent = cumulative_integral(w);
  if (sign == ZeroModeSign::Minus) {
    for (double& e : exponent) e = -e;
  }
  const double top = *std::max_element(exponent.begin(), exponent.end());
  const bool log_scaled = top > kMaxExponent;
  const double offset = log_scaled ? top : 0.0;
  std::vector<double> amplitude(exponent.size());
  for (std::size_t i = 0; i < exponent.size(); ++i) amplitude[i] = std::exp(exponent[i] - offset);
  return ZeroMode{sign, GridFunction(w.grid(), std::move(exponent)),
                  GridFunction(w.grid(), std::move(amplitude)), offset, log_scaled};
}

ZeroMode zero_mode(const SuperpotentialFamily& family, const ParamMap& params,
                   const Grid1D& grid, ZeroModeSign sign) {
  return zero_mode(family.w(grid, params), sign);
}

PhaseReport analyze_phase(const GridFunction& w) {
  const auto minus = zero_mode(w, ZeroModeSign::Minus);
  const auto plus = zero_mode(w, ZeroModeSign::Plus);
  const double rm = boundary_ratio(minus.amplitude);
  const double rp = boundary_ratio(plus.amplitude);
  const bool m_ok = rm < kDecayThreshold;
  const bool p_ok = rp < kDecayThreshold;
  SusyPhase phase = SusyPhase::Broken;
  // exp(-int w) and exp(+int w) are reciprocal, so at most one can peak
  // away from both walls; the comparison only matters for w == 0 noise.
  if (m_ok && (!p_ok || rm <= rp)) {
    phase = SusyPhase::UnbrokenMinus;
  } else if (p_ok) {
    phase = SusyPhase::UnbrokenPlus;
  }
  return PhaseReport{phase, rm, rp, kDecayThreshold};
}

PhaseReport analyze_phase(const SuperpotentialFamily& family, const ParamMap& params,
                          const Grid1D& grid) {
  return analyze_phase(family.w(grid, params));
}

SusyPhase susy_phase(const SuperpotentialFamily& family, const ParamMap& params,
                     const Grid1D& grid) {
  return analyze_phase(family, params, grid).phase;
}

GridFunction apply_A(const GridFunction& w, const GridFunction& psi) {
  require_same_grid(w, psi);
  const auto d = derivative(psi, 4);
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = d[i] + w[i] * psi[i];
  return GridFunction(psi.grid(), std::move(out));
}

GridFunction apply_Adag(const GridFunction& w, const GridFunction& psi) {
  require_same_grid(w, psi);
  const auto d = derivative(psi, 4);
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -d[i] + w[i] * psi[i];
  return GridFunction(psi.grid(), std::move(out));
}

GridFunction apply_A(const SuperpotentialFamily& family, const ParamMap& params,
                     const GridFunction& psi) {
  return apply_A(family.w(psi.grid(), params), psi);
}

GridFunction apply_Adag(const SuperpotentialFamily& family, const ParamMap& params,
                        const GridFunction& psi) {
  return apply_Adag(family.w(psi.grid(), params), psi);
}

ChargeMatrices charge_matrices(const SuperpotentialFamily& family, const ParamMap& params,
                               const Grid1D& grid) {
  const int n = grid.n_points();
  const int interior = n - 2;
  const int edges = n - 1;
  const double h = grid.h();

  // The box check and singularity check apply to the node grid.
  (void)family.w(grid, params);
  std::vector<double> mid(static_cast<std::size_t>(edges));
  for (int e = 0; e < edges; ++e) mid[e] = grid.x(e) + 0.5 * h;
  const auto w_mid = family.w_at(mid, params);
  for (int e = 0; e < edges; ++e) {
    if (!std::isfinite(w_mid[e])) {
      throw Error(ErrorKind::Singularity,
                  "w is not finite at edge midpoint x = " + std::to_string(mid[e]));
    }
  }

  // Column j of A is interior node j + 1; edge e joins nodes e and e + 1.
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * edges));
  for (int e = 0; e < edges; ++e) {
    if (e >= 1) t.emplace_back(e, e - 1, -1.0 / h + 0.5 * w_mid[e]);
    if (e + 1 <= interior) t.emplace_back(e, e, 1.0 / h + 0.5 * w_mid[e]);
  }
  ChargeMatrices cm{grid};
  cm.a.resize(edges, interior);
  cm.a.setFromTriplets(t.begin(), t.end());
  cm.a_dagger = SparseMatrix(cm.a.transpose());

  const int dim = interior + edges;
  std::vector<Eigen::Triplet<double>> tq;
  std::vector<Eigen::Triplet<double>> tqd;
  for (int k = 0; k < cm.a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(cm.a, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      tq.emplace_back(interior + r, c, it.value());
      tqd.emplace_back(c, interior + r, it.value());
    }
  }
  cm.q.resize(dim, dim);
  cm.q.setFromTriplets(tq.begin(), tq.end());
  cm.q_dagger.resize(dim, dim);
  cm.q_dagger.setFromTriplets(tqd.begin(), tqd.end());

  const SparseMatrix h_minus = (cm.a_dagger * cm.a).pruned();
  const SparseMatrix h_plus = (cm.a * cm.a_dagger).pruned();
  std::vector<Eigen::Triplet<double>> th;
  for (int k = 0; k < h_minus.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h_minus, k); it; ++it) {
      th.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < h_plus.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h_plus, k); it; ++it) {
      th.emplace_back(interior + static_cast<int>(it.row()), interior + static_cast<int>(it.col()),
                      it.value());
    }
  }
  cm.h_susy.resize(dim, dim);
  cm.h_susy.setFromTriplets(th.begin(), th.end());
  return cm;
}

AlgebraReport verify_algebra(const ChargeMatrices& cm, double tolerance) {
  const SparseMatrix& q = cm.q;
  const SparseMatrix& qd = cm.q_dagger;
  const SparseMatrix& h = cm.h_susy;
  AlgebraReport r{};
  r.q_squared = SparseMatrix(q * q).norm();
  r.q_dagger_squared = SparseMatrix(qd * qd).norm();
  r.anticommutator = SparseMatrix(SparseMatrix(q * qd) + SparseMatrix(qd * q) - h).norm();
  r.q_commutator = SparseMatrix(SparseMatrix(q * h) - SparseMatrix(h * q)).norm();
  r.q_dagger_commutator = SparseMatrix(SparseMatrix(qd * h) - SparseMatrix(h * qd)).norm();
  r.scale = h.norm();
  r.tolerance = tolerance;
  const double limit = tolerance * r.scale;
  r.pass = r.q_squared < limit && r.q_dagger_squared < limit && r.anticommutator < limit &&
           r.q_commutator < limit && r.q_dagger_commutator < limit;
  return r;
}

namespace {

// True when the largest component lies within a boundary band.
bool edge_localized(const Grid1D& grid, const std::vector<double>& v) {
  const int band = grid.boundary_band();
  const auto peak = std::max_element(v.begin(), v.end(), [](double l, double r) {
    return std::abs(l) < std::abs(r);
  });
  const int i = static_cast<int>(peak - v.begin());
  return i < band || i >= static_cast<int>(v.size()) - band;
}

}  // namespace

SectorSpectra charge_sector_spectra(const ChargeMatrices& cm, int k) {
  const SparseMatrix h_minus = cm.a_dagger * cm.a;
  const SparseMatrix h_plus = cm.a * cm.a_dagger;
  const auto [dm, om] = tridiagonal_bands(h_minus);
  const auto [dp, op] = tridiagonal_bands(h_plus);
  SectorSpectra s;
  s.minus = lowest_eigenvalues(dm, om, std::min<int>(k, static_cast<int>(dm.size())));

  // The edge rows of A A^T only see one interior node, so states pinned to
  // either end of the box appear near zero. They are dropped.
  const int edges = static_cast<int>(dp.size());
  const double h = cm.grid.h();
  const Grid1D edge_grid =
      make_grid(cm.grid.x_min() + 0.5 * h, cm.grid.x_max() - 0.5 * h, edges);
  const auto candidates = lowest_eigenvalues(dp, op, std::min(k + 2, edges));
  for (double lambda : candidates) {
    if (static_cast<int>(s.plus.size()) == k) break;
    if (edge_localized(edge_grid, tridiagonal_eigenvector(dp, op, lambda))) continue;
    s.plus.push_back(lambda);
  }
  return s;
}

SuperpotentialEstimate superpotential_from_ground_state(const GridFunction& psi0,
                                                        double mask_threshold) {
  if (count_nodes(psi0) != 0) {
    throw Error(ErrorKind::NodePresent,
                "node present: superpotential extraction needs a nodeless ground state");
  }
  const auto psi = psi0.values();
  const std::size_t n = psi.size();
  const double h = psi0.grid().h();

  // Dominant sign of the state; values of the other sign are tail noise.
  double sum = 0.0;
  for (double v : psi) sum += v;
  const double sign = sum < 0 ? -1.0 : 1.0;
  const double cut = mask_threshold * psi0.max_abs();
  auto good = [&](std::size_t i) { return sign * psi[i] > cut; };

  // w = -(ln psi)', from logarithms of neighbouring ratios so that ln psi
  // itself is never formed.
  std::vector<double> w(n, 0.0);
  std::vector<bool> reliable(n, false);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (good(i - 1) && good(i) && good(i + 1)) {
      w[i] = -std::log(psi[i + 1] / psi[i - 1]) / (2.0 * h);
      reliable[i] = true;
    }
  }
  if (good(0) && good(1) && good(2)) {
    w[0] = -(4.0 * std::log(psi[1] / psi[0]) - std::log(psi[2] / psi[0])) / (2.0 * h);
    reliable[0] = true;
  }
  if (good(n - 1) && good(n - 2) && good(n - 3)) {
    w[n - 1] = (4.0 * std::log(psi[n - 2] / psi[n - 1]) - std::log(psi[n - 3] / psi[n - 1])) /
               (2.0 * h);
    reliable[n - 1] = true;
  }

  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < n; ++i) {
    if (reliable[i]) anchors.push_back(i);
  }
  if (anchors.size() < 2) {
    throw Error(ErrorKind::ZeroNorm, "ground state too small to extract a superpotential");
  }
  // Fill masked nodes: interpolate between reliable neighbours, extrapolate
  // linearly beyond the outermost ones.
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (reliable[i]) continue;
    while (next < anchors.size() && anchors[next] < i) ++next;
    std::size_t a;
    std::size_t b;
    if (next == 0) {
      a = anchors[0];
      b = anchors[1];
    } else if (next == anchors.size()) {
      a = anchors[anchors.size() - 2];
      b = anchors[anchors.size() - 1];
    } else {
      a = anchors[next - 1];
      b = anchors[next];
    }
    const double slope = (w[b] - w[a]) / static_cast<double>(b - a);
    w[i] = w[a] + slope * (static_cast<double>(i) - static_cast<double>(a));
  }
  return SuperpotentialEstimate{GridFunction(psi0.grid(), std::move(w)), std::move(reliable)};
}

Hierarchy build_hierarchy(const GridFunction& potential, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "hierarchy depth must be at least 1");
  Hierarchy out;
  GridFunction current = potential;
  for (int d = 0; d < depth; ++d) {
    std::optional<EigenPair> ground;
    try {
      ground = ground_state(current);
    } catch (const Error& e) {
      if (d == 0 || e.kind() != ErrorKind::NoBoundState) throw;
      out.truncated = true;
      out.stop_reason = "no bound state at depth " + std::to_string(d) + ": " + e.what();
      out.terminal_potential = current;
      return out;
    }
    auto est = superpotential_from_ground_state(ground->state);
    const auto dw = derivative(est.w);
    // V+ - V- = 2 w'; in the absolute energy frame V_{d+1} = V_d + 2 w'.
    std::vector<double> next(current.size());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = current[i] + 2.0 * dw[i];
    const double e0 = ground->energy;
    out.levels.push_back(HierarchyLevel{d, current, e0, std::move(est.w), std::move(*ground)});
    current = GridFunction(potential.grid(), std::move(next));
  }
  return out;
}

}  // namespace susyqm
