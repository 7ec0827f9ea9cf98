#pragma once

// Physical constants (CODATA 2018, SI).
namespace ionwell::consts {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double amu = 1.66053906660e-27;     // kg
inline constexpr double hartree = 4.3597447222071e-18;  // J
inline constexpr double bohr = 5.29177210903e-11;       // m

// One atomic unit of the r^-4 dispersion coefficient: E_h * a0^4, in J m^4.
inline constexpr double c4_atomic_unit =
    hartree * bohr * bohr * bohr * bohr;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace ionwell::consts
