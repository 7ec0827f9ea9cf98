#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ionwell/qdt.hpp"
#include "ionwell/tracking.hpp"

namespace ionwell {

// Moving-ion problem in center-of-mass/relative coordinates
//   R = (m_i z_i + m_a z_a) / M,  r = z_i - z_a,
//   z_a = R - (m_i/M) r,          z_i = R + (m_a/M) r.
// Reference Hamiltonians: COM harmonic oscillator at
//   w_R^2 = (m_i w_i^2 + m_a w_a^2)/M
// and the trapped -1/r^4 relative problem at
//   w_r^2 = (m_i w_a^2 + m_a w_i^2)/M.
// The residual coupling is quadratic (R r) plus the double well along z_a
// minus its harmonic reference; only the z_a^4 term and the barrier offset
// depend on d, so one cached pair of matrices serves every separation:
//   H(d) = h_static + (m_a w_a^2 / (8 d^2)) z4a + barrier(d) * I.
struct TwoBodyConfig {
  double mass_atom = 1.0, mass_ion = 1.0;  // units of 2 mu
  double omega_atom = 1.0, omega_ion = 1.0;
  double phi_even = 0.0, phi_odd = 0.0;
  int n_rel = 40, n_com = 30;
  double e_floor_rel = -60.0;
  GridSpec grid;
  std::string cache_dir;  // non-empty: reuse solved relative sectors
};

std::pair<double, double> com_rel_frequencies(double omega_atom,
                                              double omega_ion,
                                              double mass_atom,
                                              double mass_ion);

struct TwoBodyBasis {
  double mass_atom = 0, mass_ion = 0, mass_total = 0;
  static constexpr double mass_rel = 0.5;
  double omega_atom = 0, omega_ion = 0, omega_com = 0, omega_rel = 0;
  double kappa = 0;   // m_i / M (z_a = R - kappa r)
  double lambda = 0;  // m_a / M (z_i = R + lambda r)
  int n_com = 0, n_rel = 0;  // index: idx = n * n_rel + k

  RadialBasis rel;                    // merged even/odd relative states
  Eigen::VectorXd e_com;              // (n + 1/2) w_R
  std::vector<Eigen::MatrixXd> xcom;  // exact <n|R^p|n'>, p = 0..4
  std::vector<Eigen::MatrixXd> xrel;  // grid <k|r^q|k'>, q = 0..4

  Eigen::VectorXd e_sum;     // E_n + Eps_k in product order
  Eigen::MatrixXd h_static;  // d-independent part including diag(e_sum)
  Eigen::MatrixXd z4a;       // <z_a^4> in the product basis

  int dim() const { return n_com * n_rel; }
  double barrier(double d) const {
    return mass_atom * omega_atom * omega_atom * d * d / 8.0;
  }
};

TwoBodyBasis build_two_body_basis(const TwoBodyConfig& cfg);

// h(nk, n'k') += coeff * <n|R^p|n'> <k|r^q|k'>  (banded COM factor).
void add_product_moment(const TwoBodyBasis& tb, Eigen::MatrixXd& h,
                        double coeff, int p_com, int q_rel);

// Dense product-basis matrix of a coordinate monomial built on demand
// (kept out of TwoBodyBasis to bound memory at large basis sizes):
// power_atom in {1, 2, 4} -> z_a^power; ion_sq -> z_i^2.
Eigen::MatrixXd atom_coordinate_matrix(const TwoBodyBasis& tb, int power);
Eigen::MatrixXd ion_coordinate_sq_matrix(const TwoBodyBasis& tb);

Eigen::MatrixXd two_body_hamiltonian(const TwoBodyBasis& tb, double d);

// --- Asymptotic product labels ----------------------------------------
// At large d every low eigenstate matches an ion Fock state x an atom
// level localized in one (or a parity combination of both) of the wells.
struct FockLabel {
  int n_ion = -1, n_atom = -1;
  double weight = 0.0;   // summed |<target_L|psi>|^2 + |<target_R|psi>|^2
  double runner_up = 0.0;
  bool ambiguous = false;  // runner-up within the ambiguity margin
};

// Label the lowest n_levels eigenvectors of `point` (computed at
// separation d) against separated-system products with
// n_ion <= n_ion_max, n_atom <= n_atom_max.
std::vector<FockLabel> fock_labels(const TwoBodyBasis& tb,
                                   const SweepPoint& point, double d,
                                   int n_levels, int n_ion_max,
                                   int n_atom_max, double margin = 0.05);

// Level indices of the (g, e) well pair for ion branches
// n_ion = 0..n_branches-1 with the atom in its well ground state.
// Throws when a branch cannot be identified unambiguously.
std::vector<std::array<int, 2>> find_ion_branch_pairs(
    const TwoBodyBasis& tb, const SweepPoint& point, double d,
    int n_branches);

// Left/right localized combinations (g -+ e)/sqrt(2), ordered (left,
// right) by the sign of <z_a>.
std::pair<Eigen::VectorXd, Eigen::VectorXd> localized_pair(
    const TwoBodyBasis& tb, const Eigen::VectorXd& g,
    const Eigen::VectorXd& e);

// Sweep with tracks seeded on the ion-branch well pairs at the first
// (largest) separation: tracks 2b, 2b+1 are the (g, e) pair of branch b.
TrackedSweep two_body_sweep(const TwoBodyBasis& tb,
                            const std::vector<double>& d_desc, int n_keep,
                            int n_branches = 2, double overlap_floor = 0.8,
                            int n_threads = 0);

// |psi(z_i, z_a)| sampled by basis synthesis on a rectangular grid.
Eigen::MatrixXd synthesize_density(const TwoBodyBasis& tb,
                                   const Eigen::VectorXd& coeffs,
                                   const Eigen::VectorXd& zi_nodes,
                                   const Eigen::VectorXd& za_nodes);

}  // namespace ionwell
