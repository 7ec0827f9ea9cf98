#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ionwell {

// Atom/ion pair plus the induced-dipole coefficient C4 of the
// -C4/r^4 long-range attraction.  Exactly one of c4_au,
// polarizability_au (C4 = alpha/2 in atomic units) or r_star_nm must be
// given; the other forms are derived.
struct SpeciesInput {
  std::string atom_name, ion_name;
  double atom_mass_u = 0.0;
  double ion_mass_u = 0.0;
  std::optional<double> c4_au;             // E_h a0^4
  std::optional<double> polarizability_au; // a.u.; C4 = alpha/2
  std::optional<double> r_star_nm;         // length scale directly
};

// Characteristic scales of the atom-ion pair and the dimensionless unit
// system used throughout:
//   length  -> R* = sqrt(2 mu C4 / hbar^2)
//   energy  -> E* = hbar^2 / (2 mu R*^2)
//   time    -> hbar / E*,   hbar = 1
//   mass    -> 2 mu  (so kinetic terms read -(1/(2 m~)) d^2/dx^2)
// In these units the interaction is exactly -1/x^4 and a harmonic term is
// (1/2) m~ w~^2 x^2 with w~ = hbar*omega/E*.
class UnitSystem {
 public:
  static UnitSystem create(const SpeciesInput& in);

  // SI-facing data
  double m_atom_kg = 0, m_ion_kg = 0, m_total_kg = 0, mu_kg = 0;
  double c4_si = 0;        // J m^4
  double r_star_m = 0;     // m
  double e_star_j = 0;     // J
  double e_star_h_hz = 0;  // E*/h, Hz

  // Dimensionless masses (units of 2 mu).
  double mt_atom = 0, mt_ion = 0, mt_total = 0;
  static constexpr double mt_reduced = 0.5;

  // Short-range phase wavevector prefactors: psi ~ x sin(beta/x + phi).
  double beta_atom = 0;                   // sqrt(m_a/mu), atomic coordinate
  static constexpr double beta_rel = 1.0; // relative coordinate

  // nu in kHz (linear frequency, omega = 2 pi nu) -> w~ = hbar omega / E*.
  double omega_tilde(double nu_khz) const { return nu_khz * 1e3 / e_star_h_hz; }
  double nm_to_rstar(double nm) const { return nm * 1e-9 / r_star_m; }
  double rstar_to_nm(double x) const { return x * r_star_m * 1e9; }
  // dimensionless energy -> (E - 0)/h in Hz
  double estar_to_hz(double e) const { return e * e_star_h_hz; }
  double hz_to_estar(double f) const { return f / e_star_h_hz; }
  // dimensionless time unit hbar/E* expressed in ms, and the inverse
  double ms_to_time_tilde(double ms) const;
  double time_tilde_to_ms(double t) const;

  std::string atom_name, ion_name;
};

}  // namespace ionwell
