#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ionwell/qdt.hpp"
#include "ionwell/tracking.hpp"

namespace ionwell {

// Symmetric quartic double well with minima at +-d and barrier
// b = mass w^2 d^2 / 8 chosen so the local curvature at the minima equals
// mass w^2 (all dimensionless):  V(z) = b (z^2 - d^2)^2 / d^4.
struct DoubleWell {
  double d = 1.0;      // half-separation
  double omega = 1.0;  // local well frequency
  double mass = 1.0;   // particle mass (units of 2 mu)

  double barrier() const { return mass * omega * omega * d * d / 8.0; }
  double value(double z) const {
    double u = z * z - d * d;
    return barrier() * u * u / (d * d * d * d);
  }
};

// Single-coordinate basis for the pinned-ion problem: merged even/odd
// sectors of the trapped -1/x^4 Hamiltonian plus the cached moment
// matrices needed to assemble the double-well Hamiltonian at any d.
struct StaticConfig1D {
  double mass = 1.0;       // atom mass, units of 2 mu
  double beta = 1.0;       // sqrt(m_atom / mu) boundary wavevector factor
  double omega = 1.0;      // local well frequency (dimensionless)
  double phi_even = 0.0;   // short-range phases
  double phi_odd = 0.0;
  int n_states = 106;      // merged basis size (even + odd)
  double e_floor = -60.0;  // lowest retained bound-state energy
  GridSpec grid;
  std::string cache_dir;   // non-empty: reuse solved sectors across runs
};

struct StaticBasis1D {
  RadialBasis basis;       // merged, energies ascending
  Eigen::MatrixXd m2, m4;  // full-line x^2 and x^4 moment matrices
  double mass = 1.0, omega = 1.0;
};

StaticBasis1D build_static_basis_1d(const StaticConfig1D& cfg);

// H_kk' = (E_k + b) delta_kk' + (m w^2 / 4) (M4_kk' / (2 d^2) - 3 M2_kk')
// i.e. the double-well potential expanded over the basis, with the
// harmonic reference already contained in the basis energies.
Eigen::MatrixXd static_hamiltonian_1d(const StaticBasis1D& sb, double d);

// Grid integral of psi_k psi_k' over x > 0 only (no parity factors); used
// to measure left/right localization of ground-pair combinations.
Eigen::MatrixXd half_line_overlap_matrix(const RadialBasis& b);

// Sweep over descending d with the two lowest levels at the largest d
// (the decoupled left/right ground pair) seeded as tracks "g" and "e".
TrackedSweep static_sweep_1d(const StaticBasis1D& sb,
                             const std::vector<double>& d_desc, int n_keep,
                             double overlap_floor = 0.8, int n_threads = 0);

struct TunnellingPoint {
  double d = 0.0;
  double j = 0.0;    // E_e - E_g (dimensionless energy)
  bool valid = true; // false inside crossing windows or when tracking slips
};

// Splitting of two tracked levels, flagged invalid around detected
// crossings (one grid step each side) and wherever tracking lost overlap.
std::vector<TunnellingPoint> tunnelling_rate(const TrackedSweep& sweep,
                                             int track_g = 0, int track_e = 1);

// ---------------------------------------------------------------------------
// Three-dimensional pinned-ion problem, m = 0 azimuthal sector.  The basis
// is built from radial solutions per partial wave l in an isotropic
// reference trap at the transverse frequency; the double well acts along z
// and the residual potential is V_dw(z) - (1/2) m w_perp^2 z^2 with
// z = r cos(theta), giving angular factors <l'0|cos^j(theta)|l0>.
struct StaticConfig3D {
  double mass = 1.0;
  double beta = 1.0;
  double omega = 1.0;       // well frequency along z
  double omega_perp = 1.0;  // transverse confinement
  double phi = 0.0;         // single 3D short-range phase
  int l_max = 6;
  int n_per_l = 10;
  double e_floor = -60.0;
  GridSpec grid;
  std::string cache_dir;
};

struct StaticBasis3D {
  RadialBasis radial;            // merged across l, tag = l
  Eigen::MatrixXd z2, z4;        // <r^j> * C^(j)_{l l'} assembled per pair
  double mass = 1.0, omega = 1.0, omega_perp = 1.0;
};

StaticBasis3D build_static_basis_3d(const StaticConfig3D& cfg);

Eigen::MatrixXd static_hamiltonian_3d(const StaticBasis3D& sb, double d);

TrackedSweep static_sweep_3d(const StaticBasis3D& sb,
                             const std::vector<double>& d_desc, int n_keep,
                             double overlap_floor = 0.8, int n_threads = 0);

}  // namespace ionwell
