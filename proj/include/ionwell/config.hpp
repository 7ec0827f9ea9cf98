#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ionwell/species.hpp"

namespace ionwell {

// Strict INI-style run configuration.
//  - sections: [species] [traps] [phases] [grid] [basis] [sweep]
//    [control] [output]
//  - every physical key carries its unit as a suffix (_nm, _khz, _u,
//    _rad, _ms, _estar, _rstar); dimensionless knobs carry none
//  - unknown sections or keys, duplicate keys, and out-of-range values
//    are rejected with the offending name
//  - tier ("acceptance" | "paper") picks basis/sweep defaults; explicit
//    keys override them
struct RunConfig {
  // [species]
  SpeciesInput species;

  // [traps] (harmonic ion trap, or Paul trap via drive_khz/q/a)
  double omega_atom_khz = 0.0;
  double omega_ion_khz = 0.0;   // harmonic ion trap
  double omega_perp_khz = 0.0;  // transverse (3D static problem)
  double drive_khz = 0.0;       // Paul trap drive Omega/2pi
  double trap_q = 0.0, trap_a = 0.0;

  // [phases]
  double phi_even_rad = 0.0, phi_odd_rad = 0.0, phi_3d_rad = 0.0;

  // [grid]
  double dominance_factor = 1e3;
  double points_per_wavelength = 450.0;
  double x_max_margin_omega = 20.0;

  // [basis]
  std::string tier = "acceptance";
  int n_states = 0;  // 1D static basis (0 = tier default)
  int n_rel = 0, n_com = 0;
  int l_max = 6, n_per_l = 10;
  double e_floor_estar = -60.0;
  int floquet_levels = 60, j_max = 2;

  // [sweep]
  double d_min_nm = 0.0, d_max_nm = 0.0;
  int n_d = 0;  // 0 = tier default
  int n_keep = 24, n_branches = 2;
  double e_cut_estar = -2.0;

  // [control]
  double t_total_ms = 0.0, t_ramp_ms = 0.0;
  double d_start_nm = 0.0, d_hold_nm = 0.0;
  double d_floor_rstar = 1.5;
  int n_modes = 5, budget = 2000, restarts = 5;
  std::string protocol = "tunnelling";  // or "entanglement"
  int n_fine = 4000, n_rungs = 320, n_anchors = 12, anchor_levels = 40;
  int n_steps_exact = 2000;
  double theta = 1.0;  // k_B T / (hbar w_i) for thermal-fidelity
  int n_cut = 4;

  // [output]
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool cache = true;

  std::vector<std::string> warnings;

  // tier-resolved values
  int tier_n_states() const;
  int tier_n_rel() const;
  int tier_n_com() const;
  int tier_n_d() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical round-trippable text form of the *effective* configuration
// (after CLI overrides).  Used to derive the run id, so two invocations
// with the same effective settings land in the same archive directory.
std::string serialize_config(const RunConfig& cfg);

}  // namespace ionwell
