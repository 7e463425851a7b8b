#pragma once

// Partner potentials, zero modes, the N = 2 charge algebra on the grid,
// intertwining operators and the isospectral hierarchy.

#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "susyqm/numerics.hpp"
#include "susyqm/oracle.hpp"
#include "susyqm/superpotential.hpp"

namespace susyqm {

/// V- = w^2 - w' and V+ = w^2 + w', with the w and w' they were built from.
struct PartnerPair {
  GridFunction v_minus;
  GridFunction v_plus;
  GridFunction w_used;
  GridFunction w_prime_used;
};

PartnerPair partner_potentials(const SuperpotentialFamily& family, const ParamMap& params,
                               const Grid1D& grid);
PartnerPair partner_potentials(const GridFunction& w, const GridFunction& w_prime);

enum class ZeroModeSign { Minus, Plus };

/// exp(-int w) (Minus, annihilated by A) or exp(+int w) (Plus, annihilated
/// by A^dagger), integrated from x_min. When the exponent would overflow the
/// amplitude is stored as exp(exponent - log_offset) and `log_scaled` is set.
struct ZeroMode {
  ZeroModeSign sign;
  GridFunction exponent;
  GridFunction amplitude;
  double log_offset = 0.0;
  bool log_scaled = false;

  bool decays() const { return boundary_ratio(amplitude) < kDecayThreshold; }
};

ZeroMode zero_mode(const GridFunction& w, ZeroModeSign sign);
ZeroMode zero_mode(const SuperpotentialFamily& family, const ParamMap& params,
                   const Grid1D& grid, ZeroModeSign sign);

enum class SusyPhase { UnbrokenMinus, UnbrokenPlus, Broken };

const char* to_string(SusyPhase phase);

struct PhaseReport {
  SusyPhase phase;
  double minus_boundary_ratio;  // boundary-band amplitude of exp(-int w)
  double plus_boundary_ratio;   // same for exp(+int w)
  double decay_threshold;
};

PhaseReport analyze_phase(const GridFunction& w);
PhaseReport analyze_phase(const SuperpotentialFamily& family, const ParamMap& params,
                          const Grid1D& grid);
SusyPhase susy_phase(const SuperpotentialFamily& family, const ParamMap& params,
                     const Grid1D& grid);

/// (d/dx + w) psi, with fourth-order differences for d/dx.
GridFunction apply_A(const GridFunction& w, const GridFunction& psi);
GridFunction apply_A(const SuperpotentialFamily& family, const ParamMap& params,
                     const GridFunction& psi);
/// (-d/dx + w) psi.
GridFunction apply_Adag(const GridFunction& w, const GridFunction& psi);
GridFunction apply_Adag(const SuperpotentialFamily& family, const ParamMap& params,
                        const GridFunction& psi);

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discretized charges on a staggered grid. A maps the n-2 interior node
/// values of psi- to the n-1 edge midpoints:
///   (A u)_e = (u_{e+1} - u_e)/h + w(x_e + h/2) (u_e + u_{e+1})/2,
/// so A^T A uses exactly the 3-point Laplacian of the oracle and A^dagger
/// is the matrix transpose.
struct ChargeMatrices {
  Grid1D grid;
  SparseMatrix a;          // (n-1) x (n-2)
  SparseMatrix a_dagger;   // transpose of a
  SparseMatrix q;          // [[0, 0], [A, 0]]
  SparseMatrix q_dagger;   // [[0, A^T], [0, 0]]
  SparseMatrix h_susy;     // diag(A^T A, A A^T)
};

ChargeMatrices charge_matrices(const SuperpotentialFamily& family, const ParamMap& params,
                               const Grid1D& grid);

/// Frobenius norms of the algebra residuals.
struct AlgebraReport {
  double q_squared;
  double q_dagger_squared;
  double anticommutator;       // ||{Q, Q^dagger} - H||
  double q_commutator;         // ||[Q, H]||
  double q_dagger_commutator;  // ||[Q^dagger, H]||
  double scale;                // ||H||
  double tolerance;            // relative to scale
  bool pass;
};

AlgebraReport verify_algebra(const ChargeMatrices& cm, double tolerance = 1e-10);

/// Smallest eigenvalues of A^T A and A A^T (both symmetric tridiagonal).
/// Eigenpairs of A A^T whose eigenvector peaks inside a boundary band are
/// box artifacts (A^T has a kernel pinned to the walls) and are left out
/// of `plus`.
struct SectorSpectra {
  std::vector<double> minus;
  std::vector<double> plus;
};
SectorSpectra charge_sector_spectra(const ChargeMatrices& cm, int k);

/// w = -psi0'/psi0 evaluated as a ratio. Nodes where psi0 is below
/// `mask_threshold` of its peak are masked (reliable[i] == false) and hold
/// a linear extrapolation of the nearest reliable values.
struct SuperpotentialEstimate {
  GridFunction w;
  std::vector<bool> reliable;
};

SuperpotentialEstimate superpotential_from_ground_state(const GridFunction& psi0,
                                                        double mask_threshold = 1e-12);

struct HierarchyLevel {
  int depth;
  GridFunction potential;   // absolute energy frame of the input potential
  double ground_energy;
  GridFunction w;           // from the ground state of `potential`
  EigenPair ground;
};

struct Hierarchy {
  std::vector<HierarchyLevel> levels;
  bool truncated = false;       // stopped before the requested depth
  std::string stop_reason;
  std::optional<GridFunction> terminal_potential;  // first partner without a bound state
};

/// Repeatedly strips the ground state: V_{k+1} = w_k^2 + w_k' + E_k with
/// w_k = -d/dx ln psi_0 of V_k. Throws Error(NoBoundState) if V itself has
/// no bound state.
Hierarchy build_hierarchy(const GridFunction& potential, int depth);

}  // namespace susyqm
