#pragma once

// Finite-difference bound-state solver for H = -d^2/dx^2 + V(x) (hbar = 2m = 1)
// with Dirichlet walls at both ends of the grid. Every algebraic result in
// the library is checked against this solver.

#include <span>
#include <vector>

#include "susyqm/numerics.hpp"

namespace susyqm {

/// Symmetric tridiagonal discretization over the interior nodes.
struct HamiltonianMatrix {
  Grid1D grid;
  std::vector<double> diagonal;  // 2/h^2 + V(x_i) - shift, i = 1 .. n-2
  double off_diagonal;           // -1/h^2
  double shift;

  std::size_t dimension() const noexcept { return diagonal.size(); }
};

HamiltonianMatrix assemble_hamiltonian(const Grid1D& grid,
                                       std::span<const double> potential,
                                       double shift = 0.0);
HamiltonianMatrix assemble_hamiltonian(const GridFunction& potential, double shift = 0.0);

struct EigenPair {
  int index;            // equals the node count of `state`
  double energy;
  GridFunction state;   // normalized, zero on the two boundary nodes
};

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
int sturm_count(std::span<const double> diagonal, std::span<const double> off_diagonal,
                double x);

/// The `k` smallest eigenvalues, ascending, by Sturm bisection.
/// Throws Error(Convergence) if bisection exceeds its iteration budget.
std::vector<double> lowest_eigenvalues(std::span<const double> diagonal,
                                       std::span<const double> off_diagonal, int k);

/// Eigenvector for an (accurate) eigenvalue via a twisted factorization.
/// Tail components carry high relative accuracy. Not normalized.
std::vector<double> tridiagonal_eigenvector(std::span<const double> diagonal,
                                            std::span<const double> off_diagonal,
                                            double eigenvalue);

/// The k lowest eigenpairs of H. States are normalized with the
/// trapezoidal inner product and signed so the first significant value is
/// positive.
std::vector<EigenPair> solve_lowest(const HamiltonianMatrix& h, int k);

/// True when the state decays inside the box (boundary-band amplitude below
/// kDecayThreshold of the peak).
bool is_bound(const EigenPair& pair);

/// Lowest eigenpair of -d^2/dx^2 + V. Throws Error(NoBoundState) when the
/// state does not decay at the walls.
EigenPair ground_state(const GridFunction& potential);

/// Bound states of V among its lowest `max_levels` eigenpairs, stopping at
/// the first level that fails the decay test.
std::vector<EigenPair> bound_states(const GridFunction& potential, int max_levels);

}  // namespace susyqm
