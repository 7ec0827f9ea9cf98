#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ionwell/twobody.hpp"

namespace ionwell {

// --- Control waveform ---------------------------------------------------
// Separation schedule d(t) on [0, T]: a C^1 smoothstep
// ramp-in / hold / ramp-out baseline between d_start and d_hold, plus a
// boundary-windowed trigonometric correction
//   sin^2(pi t/T) * sum_k [ a_k sin(w_k t) + b_k cos(w_k t) ],
// w_k = (2 pi k / T)(1 + r_k) with per-restart random r_k in [-1/2, 1/2].
struct Pulse {
  double t_total = 0.0;
  double d_start = 0.0, d_hold = 0.0;
  double t_ramp = 0.0;
  Eigen::VectorXd amp_sin, amp_cos;  // empty = bare baseline
  Eigen::VectorXd omega;

  double baseline(double t) const;
  double operator()(double t) const;
  // extreme sampled separations (range guards), n_samples >= 2
  double min_separation(int n_samples) const;
  double max_separation(int n_samples) const;
};

// --- Reduced propagation model ------------------------------------------
// Subspace spanned by low eigenvectors collected at anchor separations
// (orthonormalized by SVD), with H(d) projected once:
//   H_sub(d) = h0 + s(d) z4 + barrier(d) I,  s(d) = m_a w_a^2/(8 d^2).
// The rung ladder pre-diagonalizes H_sub on a uniform d grid; a pulse is
// propagated by quantizing d(t) to rungs (the barrier term, a global
// phase, is integrated exactly along the way).
struct SubspaceOptions {
  int n_anchors = 12;
  int anchor_levels = 48;
  double svd_rel_floor = 1e-10;
  int n_rungs = 500;
  int n_fine = 4000;  // pulse sampling points for rung quantization
};

class TwoBodyPropagator {
 public:
  TwoBodyPropagator(const TwoBodyBasis& tb, double d_min, double d_max,
                    const SubspaceOptions& opt = {});

  int subspace_dim() const { return int(q_.cols()); }
  double d_min() const { return d_min_; }
  double d_max() const { return d_max_; }

  // || (1 - P) v ||^2: how much of a state the subspace misses.
  double projection_loss(const Eigen::VectorXd& v_full) const;

  // Rung-ladder propagation of a full-basis state; returns the evolved
  // state lifted back to the full basis.
  Eigen::VectorXcd propagate_ladder(const Pulse& pulse,
                                    const Eigen::VectorXcd& psi0_full) const;

 private:
  const TwoBodyBasis& tb_;
  double d_min_ = 0.0, d_max_ = 0.0;
  int n_fine_ = 4000;
  Eigen::MatrixXd q_;                    // full-dim x n_sub
  Eigen::MatrixXd h0_sub_, z4_sub_;      // projected pieces
  std::vector<double> rung_d_;
  std::vector<Eigen::VectorXd> rung_e_;  // eigenvalues per rung
  std::vector<Eigen::MatrixXd> rung_v_;  // eigenvectors per rung
};

// --- Exact-model propagation ----------------------------------------------
// Fourth-order commutator-free Magnus stepper in the full product basis,
// each exponential applied by a Lanczos expansion.  n_steps uniform steps.
Eigen::VectorXcd propagate_exact(const TwoBodyBasis& tb, const Pulse& pulse,
                                 const Eigen::VectorXcd& psi0, int n_steps);

// Same stepper, returning n_samples+1 states at uniform times (t = 0
// included); n_steps is rounded up to a multiple of n_samples.
std::vector<Eigen::VectorXcd> propagate_exact_sampled(
    const TwoBodyBasis& tb, const Pulse& pulse, const Eigen::VectorXcd& psi0,
    int n_steps, int n_samples);

// --- Protocol states ------------------------------------------------------
// Left/right localized well states per ion branch at separation d, from
// the labeled (g, e) pairs; entry n holds branch n_ion = n.
struct BranchStates {
  std::vector<Eigen::VectorXd> left, right;
  std::vector<std::array<int, 2>> pair_levels;
};

BranchStates branch_states(const TwoBodyBasis& tb, double d, int n_branches);

// |<target|psi>|^2
double overlap2(const Eigen::VectorXd& target, const Eigen::VectorXcd& psi);

// --- Thermal average -------------------------------------------------------
// Geometric ion-branch weights p_n = (1 - gamma) gamma^n, gamma =
// exp(-1/theta), theta = k_B T / (hbar w_i); truncated at n_cut without
// renormalization (remainder is o(gamma^{n_cut+1})).  theta = 0 gives
// p = (1, 0, ...).
std::vector<double> thermal_weights(double theta, int n_cut);

}  // namespace ionwell
