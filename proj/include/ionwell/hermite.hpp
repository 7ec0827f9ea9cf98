#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ionwell {

// Harmonic-oscillator eigenfunctions and exact moment matrices for
// H = -(1/(2 mt)) d^2/dx^2 + (1/2) mt w~^2 x^2 (hbar = 1 units):
// E_n = w~ (n + 1/2), length scale x0 = 1/sqrt(mt w~).

// psi_0..psi_{n_max} evaluated at x (normalized, stable recurrence).
Eigen::VectorXd ho_eigenfunctions_at(int n_max, double mt, double omega_t,
                                     double x);

// Allocation-free variant for quadrature hot loops: fills out[0..n_max].
void ho_eigenfunctions_at(int n_max, double mt, double omega_t, double x,
                          double* out);

// Exact <n|x^p|n'> matrices for p = 0..p_max computed from the
// ladder-operator band matrix with padding (no truncation error).
std::vector<Eigen::MatrixXd> ho_moment_matrices(int n, double mt,
                                                double omega_t, int p_max);

}  // namespace ionwell
