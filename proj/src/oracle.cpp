#include "susyqm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "susyqm/errors.hpp"

namespace susyqm {

namespace {

constexpr int kBisectionBudget = 256;
constexpr double kTiny = std::numeric_limits<double>::min();

double off_at(std::span<const double> off, std::size_t i) { return off[i]; }

void check_shape(std::span<const double> diagonal, std::span<const double> off) {
  if (diagonal.empty() || off.size() + 1 != diagonal.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "tridiagonal matrix needs n diagonal and n-1 off-diagonal entries");
  }
}

// Gershgorin interval containing the whole spectrum.
std::pair<double, double> gershgorin(std::span<const double> d, std::span<const double> e) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off_at(e, i - 1));
    if (i + 1 < d.size()) r += std::abs(off_at(e, i));
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0});
  return {lo - pad, hi + pad};
}

}  // namespace

HamiltonianMatrix assemble_hamiltonian(const Grid1D& grid, std::span<const double> potential,
                                       double shift) {
  if (potential.size() != static_cast<std::size_t>(grid.n_points())) {
    throw Error(ErrorKind::InvalidArgument, "potential does not match the grid size");
  }
  if (!std::isfinite(shift)) throw Error(ErrorKind::NonFinite, "non-finite energy shift");
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  HamiltonianMatrix h{grid, {}, -inv_h2, shift};
  h.diagonal.resize(potential.size() - 2);
  for (std::size_t i = 1; i + 1 < potential.size(); ++i) {
    if (!std::isfinite(potential[i])) {
      throw Error(ErrorKind::NonFinite,
                  "non-finite potential at node " + std::to_string(i));
    }
    h.diagonal[i - 1] = 2.0 * inv_h2 + potential[i] - shift;
  }
  return h;
}

HamiltonianMatrix assemble_hamiltonian(const GridFunction& potential, double shift) {
  return assemble_hamiltonian(potential.grid(), potential.values(), shift);
}

int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  int count = 0;
  double q = d[0] - x;
  if (q == 0.0) q = -kTiny;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double ei = off_at(e, i - 1);
    q = d[i] - x - ei * ei / q;
    if (q == 0.0) q = -kTiny;
    if (q < 0) ++count;
  }
  return count;
}

std::vector<double> lowest_eigenvalues(std::span<const double> d, std::span<const double> e,
                                       int k) {
  check_shape(d, e);
  if (k < 1 || static_cast<std::size_t>(k) > d.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "requested " + std::to_string(k) + " eigenvalues of a matrix of dimension " +
                    std::to_string(d.size()));
  }
  const auto [glo, ghi] = gershgorin(d, e);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k));
  double lower_start = glo;
  for (int j = 0; j < k; ++j) {
    // Invariant: count(lo) <= j < count(hi).
    double lo = lower_start;
    double hi = ghi;
    int it = 0;
    for (; it < kBisectionBudget; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(lo), std::abs(hi));
      if (hi - lo <= tol) break;
      if (sturm_count(d, e, mid) <= j) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (it == kBisectionBudget) {
      throw Error(ErrorKind::Convergence,
                  "bisection for eigenvalue " + std::to_string(j) + " exceeded " +
                      std::to_string(kBisectionBudget) + " iterations");
    }
    values.push_back(0.5 * (lo + hi));
    lower_start = lo;
  }
  return values;
}

std::vector<double> tridiagonal_eigenvector(std::span<const double> d,
                                            std::span<const double> e, double lambda) {
  check_shape(d, e);
  const std::size_t n = d.size();
  std::vector<double> z(n, 0.0);
  if (n == 1) {
    z[0] = 1.0;
    return z;
  }
  auto guard = [](double v) { return v == 0.0 ? kTiny : v; };

  std::vector<double> top(n);
  std::vector<double> bottom(n);
  top[0] = guard(d[0] - lambda);
  for (std::size_t i = 1; i < n; ++i) {
    const double ei = off_at(e, i - 1);
    top[i] = guard(d[i] - lambda - ei * ei / top[i - 1]);
  }
  bottom[n - 1] = guard(d[n - 1] - lambda);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double ei = off_at(e, i);
    bottom[i] = guard(d[i] - lambda - ei * ei / bottom[i + 1]);
  }

  std::size_t twist = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = std::abs(top[i] + bottom[i] - (d[i] - lambda));
    if (gamma < best) {
      best = gamma;
      twist = i;
    }
  }

  z[twist] = 1.0;
  for (std::size_t i = twist; i-- > 0;) z[i] = -off_at(e, i) * z[i + 1] / top[i];
  for (std::size_t i = twist + 1; i < n; ++i) z[i] = -off_at(e, i - 1) * z[i - 1] / bottom[i];
  return z;
}

std::vector<EigenPair> solve_lowest(const HamiltonianMatrix& h, int k) {
  const std::size_t dim = h.dimension();
  if (k < 1 || static_cast<std::size_t>(k) > dim) {
    throw Error(ErrorKind::InvalidArgument,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(dim) + "]");
  }
  const std::vector<double> off(dim - 1, h.off_diagonal);
  const auto energies = lowest_eigenvalues(h.diagonal, off, k);

  double scale = 0.0;
  for (double v : h.diagonal) scale = std::max(scale, std::abs(v));
  scale += 2.0 * std::abs(h.off_diagonal);

  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double lambda = energies[static_cast<std::size_t>(j)];
    auto z = tridiagonal_eigenvector(h.diagonal, off, lambda);

    double zz = 0.0;
    double rr = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double r = (h.diagonal[i] - lambda) * z[i];
      if (i > 0) r += h.off_diagonal * z[i - 1];
      if (i + 1 < dim) r += h.off_diagonal * z[i + 1];
      zz += z[i] * z[i];
      rr += r * r;
    }
    if (!(std::sqrt(rr / zz) <= 1e-9 * scale)) {
      throw Error(ErrorKind::Convergence,
                  "eigenvector " + std::to_string(j) + " residual too large after twisted "
                  "factorization (bisection budget " + std::to_string(kBisectionBudget) + ")");
    }

    std::vector<double> full(dim + 2, 0.0);
    std::copy(z.begin(), z.end(), full.begin() + 1);
    auto state = fix_sign(normalize(GridFunction(h.grid, std::move(full))));
    pairs.push_back(EigenPair{j, lambda, std::move(state)});
  }
  return pairs;
}

bool is_bound(const EigenPair& pair) { return boundary_ratio(pair.state) < kDecayThreshold; }

EigenPair ground_state(const GridFunction& potential) {
  auto pairs = solve_lowest(assemble_hamiltonian(potential), 1);
  if (!is_bound(pairs.front())) {
    throw Error(ErrorKind::NoBoundState,
                "lowest state does not decay inside the box (boundary ratio " +
                    std::to_string(boundary_ratio(pairs.front().state)) + ")");
  }
  return std::move(pairs.front());
}

std::vector<EigenPair> bound_states(const GridFunction& potential, int max_levels) {
  const auto h = assemble_hamiltonian(potential);
  const int k = std::min<int>(max_levels, static_cast<int>(h.dimension()));
  auto pairs = solve_lowest(h, k);
  std::vector<EigenPair> bound;
  for (auto& p : pairs) {
    if (!is_bound(p)) break;
    bound.push_back(std::move(p));
  }
  return bound;
}

}  // namespace susyqm
