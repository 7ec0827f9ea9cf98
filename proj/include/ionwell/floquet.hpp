#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ionwell/twobody.hpp"

namespace ionwell {

// Paul-trap drive in the secular approximation plus the leading
// micromotion corrections.  The static ion trap used everywhere else is
// the secular trap w_sec = (Omega/2) sqrt(a + q^2/2); the residual
// time-dependent pieces are
//   V1 = -m_i g^2 w_sec^2 z_i^2 cos(2 Omega t)
//   V2 = -g w_sec {z_i, p_i} sin(Omega t),   g = [2 (1 + 2a/q^2)]^{-1/2}.
struct SecularTrap {
  double a = 0.0, q = 0.0;
  double omega_drive = 0.0;  // Omega~
  double omega_sec = 0.0;    // derived
  double g = 0.0;            // derived
};

// Validates the stability-region inputs (0 <= q < 0.91, a >= 0; a > 0
// requires q > 0) and fills the derived fields.
SecularTrap make_secular_trap(double a, double q, double omega_drive);

// --- Time-averaged micromotion couplings at fixed separation ----------
// Matrix elements of V1/V2 between the ground state and excited
// two-body eigenstates, split by the quadratic monomial (r^2, r R, R^2)
// through which z_i^2 acts.  All three share the prefactor
// g m_i w_sec |E_l - E_0| and are reported in units of hbar w_a.
struct CouplingRow {
  int level = 0;
  double delta_e = 0.0;  // E_l - E_0
  double v_rr = 0.0, v_rR = 0.0, v_RR = 0.0;
};

// n_levels eigenstates are solved; rows are produced for every level
// other than the reference ground state, itself the double-well ground
// identified by ion-ground well character (molecular levels carry no
// such character).  delta_e is signed, so levels below the reference
// appear with negative detuning.  e_cut is a sanity floor: an
// identified ground at or below it is rejected.
std::vector<CouplingRow> micromotion_couplings(const TwoBodyBasis& tb,
                                               double d,
                                               const SecularTrap& trap,
                                               int n_levels,
                                               double e_cut = -2.0);

// --- Floquet block matrix ----------------------------------------------
// Basis |j, l>, j = -j_max..j_max, l = two-body eigenstate at this d:
//   diagonal        eps_{jl} = E_l + j Omega~
//   |j'-j| = 2      -(m_i g^2 w_sec^2 / 2) W
//   j' = j+1        -(g m_i w_sec / 2) (E_l' - E_l) W_{l'l}
// with W the z_i^2 matrix in the eigenbasis and m_i the ion mass.
// Index: (j + j_max)*n + l.
Eigen::MatrixXd build_floquet_matrix(const Eigen::VectorXd& energies,
                                     const Eigen::MatrixXd& w_zi2,
                                     double mass_ion,
                                     const SecularTrap& trap, int j_max);

// Quasi-energy reduced to the first zone [-Omega/2, Omega/2).
double reduce_to_zone(double eps, double omega_drive);

// --- Ground-pair sweep --------------------------------------------------
// Per separation: secular two-body solve, Floquet diagonalization, and
// adiabatic tracking of the two states connected to the unperturbed
// ground pair embedded in class j = 0.  Overlaps are evaluated in the
// d-independent product basis (class-resolved), not in the
// eigenstate-label basis.
struct FloquetSweepPoint {
  double d = 0.0;
  double e_g = 0.0, e_e = 0.0;    // unperturbed (secular) pair energies
  double eps_g = 0.0, eps_e = 0.0;  // tracked quasi-energies (raw)
  double gap_g = 0.0, gap_e = 0.0;  // distance to nearest other state,
                                    // on the quasi-energy circle
  double overlap_g = 0.0, overlap_e = 0.0;  // adiabatic continuity
  bool ok = true;
};

struct FloquetSweep {
  std::vector<FloquetSweepPoint> points;
  int n_levels = 0, j_max = 0;
};

struct FloquetSweepOptions {
  int n_levels = 60;    // two-body eigenstates entering the Floquet block
  int j_max = 2;        // >= 2 so both V1 and V2 classes are present
  double e_cut = -2.0;  // sanity floor under the seeded pair
  int seed_g = -1, seed_e = -1;  // explicit level indices (default: the
                                 // double-well pair identified by
                                 // ion-ground well character)
  double overlap_floor = 0.5;
  int n_threads = 0;  // reserved; the sweep itself is sequential
};

FloquetSweep floquet_sweep(const TwoBodyBasis& tb,
                           const std::vector<double>& d_desc,
                           const SecularTrap& trap,
                           const FloquetSweepOptions& opt);

// Local minima of the per-point neighbor gap along the sweep: the
// avoided-crossing sizes the tracked state runs through.  Returns pairs
// (point index, gap).
std::vector<std::pair<int, double>> floquet_crossing_gaps(
    const FloquetSweep& sweep, bool excited);

}  // namespace ionwell
