#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ionwell/grid.hpp"
#include "ionwell/numerov.hpp"

namespace ionwell {

// Numerical controls for the single-coordinate solver.  All quantities are
// dimensionless (lengths in R*, energies in E*).
struct GridSpec {
  double dominance_factor = 1e3;       // 1/x_min^4 >= factor * |E| scale
  double points_per_wavelength = 450;  // ~ kh = 0.014, keeps refinement
                                       // stability and orthonormality tight
  double x_max_margin_omega = 20.0;    // V(x_max) >= E_max + margin * w~
  double x_min_override = 0.0;         // > 0 forces x_min
  double x_max_override = 0.0;         // > 0 forces x_max
};

// One-coordinate trapped problem with the -1/x^4 interaction:
//   H = -(1/(2 mt)) d^2/dx^2 + (1/2) mt w~^2 x^2 - 1/x^4 (+ centrifugal)
// The short-range physics enters as a boundary-condition phase applied at
// x_min where the interaction dominates:
//   1D parity sectors: psi ~ x sin(beta/x + phi) with beta = sqrt(m/mu)
//   3D partial wave l: psi ~ cos(d) j_l(beta/r) + sin(d) y_l(beta/r),
//                      d = -phi - l pi/2
struct QdtProblem {
  double mt = 1.0;       // kinetic mass in units of 2 mu
  double omega_t = 1.0;  // trap frequency, hbar w / E*
  double beta = 1.0;     // sqrt(m/mu)
  double phi = 0.0;      // boundary phase
  bool with_c4 = true;   // false: regular problem (HO limit, tests)
  int l = -1;            // -1: 1D sector; >= 0: 3D partial wave
  int parity = +1;       // 1D only: +1 even, -1 odd (full-line extension)
};

// Bound eigenpairs of one QdtProblem, sampled on a (shared) grid.
// Half-line parity states are normalized so the full-line norm is 1
// (i.e. the grid integral of psi^2 is 1/2); radial states to 1.
struct RadialBasis {
  std::shared_ptr<const MappedGrid> grid;
  Eigen::VectorXd energy;  // ascending
  Eigen::MatrixXd psi;     // (n_states, n_nodes)
  std::vector<int> tag;    // parity (+-1) or partial wave l
  double mass_factor = 1;  // beta used at the boundary (for diagnostics)

  int size() const { return int(energy.size()); }
};

// Grid sized for n_states levels above e_floor of the given problem.
std::shared_ptr<const MappedGrid> make_qdt_grid(const QdtProblem& p,
                                                int n_states, double e_floor,
                                                const GridSpec& gs);

// Solve one sector on the given grid (grid may be shared across sectors).
RadialBasis solve_sector(const QdtProblem& p, int n_states, double e_floor,
                         std::shared_ptr<const MappedGrid> grid);

// Convenience: build grid and solve.
RadialBasis solve_sector(const QdtProblem& p, int n_states, double e_floor,
                         const GridSpec& gs);

// Merge sectors (same grid required), sort by energy.
RadialBasis merge_bases(const std::vector<RadialBasis>& parts);

// Grid moment integral x^j between all pairs: M_kk' = <k| x^j |k'>.
// For 1D parity bases the full-line parity selection rule is applied
// (element vanishes unless parity_k * parity_k' == (-1)^j); for radial
// bases the plain radial integral is returned for every pair.
Eigen::MatrixXd moment_matrix(const RadialBasis& b, int j);

// Same integral evaluated with an independent quadrature rule (composite
// Boole) on the same samples; used for cross-checks.
Eigen::MatrixXd moment_matrix_boole(const RadialBasis& b, int j);

// <k| (1 + 2 x d/dx) |k'> via centered differences in the map coordinate;
// used by the anticommutator identity audit.
Eigen::MatrixXd symmetrized_rp_matrix(const RadialBasis& b);

}  // namespace ionwell
