#include "ionwell/species.hpp"

#include <cmath>

#include "ionwell/constants.hpp"

namespace ionwell {

UnitSystem UnitSystem::create(const SpeciesInput& in) {
  using namespace consts;
  if (in.atom_mass_u <= 0 || in.ion_mass_u <= 0)
    throw std::invalid_argument("species: masses must be positive");
  int n_given = int(in.c4_au.has_value()) + int(in.polarizability_au.has_value()) +
                int(in.r_star_nm.has_value());
  if (n_given != 1)
    throw std::invalid_argument(
        "species: exactly one of c4_au | polarizability_au | r_star_nm required");

  UnitSystem u;
  u.atom_name = in.atom_name;
  u.ion_name = in.ion_name;
  u.m_atom_kg = in.atom_mass_u * amu;
  u.m_ion_kg = in.ion_mass_u * amu;
  u.m_total_kg = u.m_atom_kg + u.m_ion_kg;
  u.mu_kg = u.m_atom_kg * u.m_ion_kg / u.m_total_kg;

  if (in.r_star_nm) {
    u.r_star_m = *in.r_star_nm * 1e-9;
    u.c4_si = u.r_star_m * u.r_star_m * hbar * hbar / (2.0 * u.mu_kg);
  } else {
    double c4_au = in.c4_au ? *in.c4_au : 0.5 * *in.polarizability_au;
    if (c4_au <= 0) throw std::invalid_argument("species: C4 must be positive");
    u.c4_si = c4_au * c4_atomic_unit;
    u.r_star_m = std::sqrt(2.0 * u.mu_kg * u.c4_si) / hbar;
  }
  u.e_star_j = hbar * hbar / (2.0 * u.mu_kg * u.r_star_m * u.r_star_m);
  u.e_star_h_hz = u.e_star_j / h_planck;

  u.mt_atom = u.m_atom_kg / (2.0 * u.mu_kg);
  u.mt_ion = u.m_ion_kg / (2.0 * u.mu_kg);
  u.mt_total = u.mt_atom + u.mt_ion;
  u.beta_atom = std::sqrt(u.m_atom_kg / u.mu_kg);
  return u;
}

double UnitSystem::ms_to_time_tilde(double ms) const {
  // t~ = t * E*/hbar = t * 2 pi (E*/h)
  return ms * 1e-3 * 2.0 * consts::pi * e_star_h_hz;
}

double UnitSystem::time_tilde_to_ms(double t) const {
  return t / (2.0 * consts::pi * e_star_h_hz) * 1e3;
}

}  // namespace ionwell
