#include "ionwell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionwell/constants.hpp"
#include "ionwell/errors.hpp"

namespace ionwell {

using cd = std::complex<double>;

double Pulse::baseline(double t) const {
  auto smooth = [](double u) { return u * u * (3.0 - 2.0 * u); };
  if (t <= 0.0 || t >= t_total) return d_start;
  if (t < t_ramp)
    return d_start + (d_hold - d_start) * smooth(t / t_ramp);
  if (t > t_total - t_ramp)
    return d_start + (d_hold - d_start) * smooth((t_total - t) / t_ramp);
  return d_hold;
}

double Pulse::operator()(double t) const {
  double d = baseline(t);
  if (amp_sin.size() == 0) return d;
  double win = std::sin(consts::pi * t / t_total);
  win *= win;
  double corr = 0.0;
  for (int k = 0; k < amp_sin.size(); ++k)
    corr += amp_sin[k] * std::sin(omega[k] * t) +
            amp_cos[k] * std::cos(omega[k] * t);
  return d + win * corr;
}

double Pulse::min_separation(int n_samples) const {
  n_samples = std::max(n_samples, 2);
  double lo = (*this)(0.0);
  for (int j = 1; j < n_samples; ++j)
    lo = std::min(lo, (*this)(t_total * j / (n_samples - 1.0)));
  return lo;
}

double Pulse::max_separation(int n_samples) const {
  n_samples = std::max(n_samples, 2);
  double hi = (*this)(0.0);
  for (int j = 1; j < n_samples; ++j)
    hi = std::max(hi, (*this)(t_total * j / (n_samples - 1.0)));
  return hi;
}

namespace {

void validate_pulse(const Pulse& p) {
  if (p.t_total <= 0.0 || p.t_ramp <= 0.0 || 2.0 * p.t_ramp > p.t_total)
    throw std::invalid_argument("pulse: need 0 < t_ramp <= T/2");
  if (p.d_start <= 0.0 || p.d_hold <= 0.0)
    throw std::invalid_argument("pulse: separations must be positive");
  if (p.amp_sin.size() != p.amp_cos.size() ||
      p.amp_sin.size() != p.omega.size())
    throw std::invalid_argument("pulse: mode arrays must have equal size");
}

double quartic_coeff(const TwoBodyBasis& tb, double d) {
  return tb.mass_atom * tb.omega_atom * tb.omega_atom / (8.0 * d * d);
}

// real matrix times complex vector
Eigen::VectorXcd mulr(const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
  Eigen::VectorXd re = a * v.real();
  Eigen::VectorXd im = a * v.imag();
  return re + cd(0.0, 1.0) * im;
}

}  // namespace

TwoBodyPropagator::TwoBodyPropagator(const TwoBodyBasis& tb, double d_min,
                                     double d_max,
                                     const SubspaceOptions& opt)
    : tb_(tb), d_min_(d_min), d_max_(d_max), n_fine_(opt.n_fine) {
  if (d_min <= 0.0 || d_max <= d_min)
    throw std::invalid_argument("propagator: need 0 < d_min < d_max");
  const int na = std::max(2, opt.n_anchors);
  const int nl = std::min(opt.anchor_levels, tb.dim());
  Eigen::MatrixXd cols(tb.dim(), na * nl);
  for (int i = 0; i < na; ++i) {
    double d = d_min + (d_max - d_min) * i / (na - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        two_body_hamiltonian(tb, d));
    cols.middleCols(i * nl, nl) = es.eigenvectors().leftCols(nl);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int keep = 0;
  while (keep < sv.size() && sv[keep] > sv[0] * opt.svd_rel_floor) ++keep;
  q_ = svd.matrixU().leftCols(keep);
  h0_sub_ = q_.transpose() * tb.h_static * q_;
  z4_sub_ = q_.transpose() * tb.z4a * q_;

  const int nr = std::max(2, opt.n_rungs);
  rung_d_.resize(nr);
  rung_e_.resize(nr);
  rung_v_.resize(nr);
  for (int k = 0; k < nr; ++k) {
    rung_d_[k] = d_min + (d_max - d_min) * k / (nr - 1.0);
    Eigen::MatrixXd h = h0_sub_ + quartic_coeff(tb, rung_d_[k]) * z4_sub_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    rung_e_[k] = es.eigenvalues();
    rung_v_[k] = es.eigenvectors();
  }
}

double TwoBodyPropagator::projection_loss(const Eigen::VectorXd& v) const {
  Eigen::VectorXd c = q_.transpose() * v;
  return std::max(0.0, v.squaredNorm() - c.squaredNorm());
}

Eigen::VectorXcd TwoBodyPropagator::propagate_ladder(
    const Pulse& pulse, const Eigen::VectorXcd& psi0_full) const {
  validate_pulse(pulse);
  const int nr = int(rung_d_.size());
  Eigen::VectorXcd psi =
      q_.transpose() * psi0_full.real() +
      cd(0.0, 1.0) * (q_.transpose() * psi0_full.imag()).eval();

  const double dt = pulse.t_total / n_fine_;
  double phase = 0.0;
  int cur = -1;
  double t_acc = 0.0;
  auto flush = [&]() {
    if (cur < 0 || t_acc == 0.0) return;
    const Eigen::VectorXd& e = rung_e_[cur];
    const Eigen::MatrixXd& v = rung_v_[cur];
    Eigen::VectorXcd coef = v.transpose() * psi.real();
    coef += cd(0.0, 1.0) * (v.transpose() * psi.imag()).eval();
    for (int i = 0; i < coef.size(); ++i)
      coef[i] *= std::polar(1.0, -e[i] * t_acc);
    psi = mulr(v, coef);
  };
  for (int j = 0; j < n_fine_; ++j) {
    double t = (j + 0.5) * dt;
    double d = pulse(t);
    phase += tb_.barrier(d) * dt;
    double x = (d - d_min_) / (d_max_ - d_min_) * (nr - 1.0);
    int k = int(std::lround(std::clamp(x, 0.0, nr - 1.0)));
    if (k != cur) {
      flush();
      cur = k;
      t_acc = dt;
    } else {
      t_acc += dt;
    }
  }
  flush();
  psi *= std::polar(1.0, -phase);
  return mulr(q_, psi);
}

namespace {

// psi <- exp(-i dt (k1 A1 + k2 A2 + c0)) psi by a Lanczos polynomial
// expansion; halves dt recursively if the Krylov space saturates.
void lanczos_exp(const Eigen::MatrixXd& a1, double k1,
                 const Eigen::MatrixXd& a2, double k2, double c0, double dt,
                 Eigen::VectorXcd& psi, int depth = 0) {
  const int m_max = 48;
  const double tol = 1e-11;
  const int n = int(psi.size());
  double nrm0 = psi.norm();
  if (nrm0 == 0.0) return;

  Eigen::MatrixXcd v(n, m_max + 1);
  Eigen::VectorXd alpha(m_max), beta(m_max + 1);
  beta[0] = 0.0;
  v.col(0) = psi / nrm0;

  int m = 0;
  bool converged = false;
  Eigen::VectorXcd u;
  for (int j = 0; j < m_max; ++j) {
    Eigen::VectorXcd w = k1 * mulr(a1, v.col(j));
    if (k2 != 0.0) w += k2 * mulr(a2, v.col(j));
    if (j > 0) w -= beta[j] * v.col(j - 1);
    alpha[j] = v.col(j).dot(w).real();
    w -= alpha[j] * v.col(j);
    // one full re-orthogonalization pass keeps the small basis clean
    w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w).eval();
    beta[j + 1] = w.norm();
    m = j + 1;

    bool breakdown = beta[j + 1] < 1e-13;
    if (breakdown || j >= 5 || j == m_max - 1) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i + 1];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      Eigen::VectorXcd ph(m);
      for (int i = 0; i < m; ++i)
        ph[i] = std::polar(1.0, -dt * es.eigenvalues()[i]) *
                es.eigenvectors()(0, i);
      u = es.eigenvectors() * ph;
      double err = std::abs(dt) * beta[m] * std::abs(u[m - 1]);
      if (breakdown || err < tol) {
        converged = true;
        break;
      }
    }
    v.col(j + 1) = w / beta[j + 1];
  }
  if (!converged) {
    if (depth > 12)
      throw NumericalError("propagator: Lanczos step failed to converge");
    lanczos_exp(a1, k1, a2, k2, c0, 0.5 * dt, psi, depth + 1);
    lanczos_exp(a1, k1, a2, k2, c0, 0.5 * dt, psi, depth + 1);
    return;
  }
  psi = v.leftCols(m) * (nrm0 * u);
  psi *= std::polar(1.0, -dt * c0);
}

}  // namespace

namespace {

// One fourth-order commutator-free Magnus step over [t, t+dt]: two
// exponentials of Gauss-node Hamiltonian combinations, the first-applied
// factor weighting the earlier node.
void cf4_step(const TwoBodyBasis& tb, const Pulse& pulse, double t, double dt,
              Eigen::VectorXcd& psi) {
  const double rt3 = std::sqrt(3.0);
  const double n1 = 0.5 - rt3 / 6.0, n2 = 0.5 + rt3 / 6.0;  // Gauss nodes
  const double wa = 0.25 + rt3 / 6.0, wb = 0.25 - rt3 / 6.0;
  double da = pulse(t + n1 * dt), db = pulse(t + n2 * dt);
  double s1 = quartic_coeff(tb, da), s2 = quartic_coeff(tb, db);
  double b1 = tb.barrier(da), b2 = tb.barrier(db);
  lanczos_exp(tb.h_static, wa + wb, tb.z4a, wa * s1 + wb * s2,
              wa * b1 + wb * b2, dt, psi);
  lanczos_exp(tb.h_static, wa + wb, tb.z4a, wb * s1 + wa * s2,
              wb * b1 + wa * b2, dt, psi);
}

}  // namespace

Eigen::VectorXcd propagate_exact(const TwoBodyBasis& tb, const Pulse& pulse,
                                 const Eigen::VectorXcd& psi0, int n_steps) {
  validate_pulse(pulse);
  if (n_steps < 1) throw std::invalid_argument("propagator: n_steps >= 1");
  Eigen::VectorXcd psi = psi0;
  const double dt = pulse.t_total / n_steps;
  for (int s = 0; s < n_steps; ++s) cf4_step(tb, pulse, s * dt, dt, psi);
  return psi;
}

std::vector<Eigen::VectorXcd> propagate_exact_sampled(
    const TwoBodyBasis& tb, const Pulse& pulse, const Eigen::VectorXcd& psi0,
    int n_steps, int n_samples) {
  validate_pulse(pulse);
  if (n_steps < 1 || n_samples < 1)
    throw std::invalid_argument("propagator: n_steps, n_samples >= 1");
  const int per = (n_steps + n_samples - 1) / n_samples;
  const double dt = pulse.t_total / (double(per) * n_samples);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(n_samples + 1);
  Eigen::VectorXcd psi = psi0;
  out.push_back(psi);
  for (int k = 0; k < n_samples; ++k) {
    for (int s = 0; s < per; ++s)
      cf4_step(tb, pulse, (double(k) * per + s) * dt, dt, psi);
    out.push_back(psi);
  }
  return out;
}

BranchStates branch_states(const TwoBodyBasis& tb, double d,
                           int n_branches) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      two_body_hamiltonian(tb, d));
  // The level index of the branch-b well pair grows superlinearly with b
  // (2D density of states), so scan generously; the per-level cost is a
  // handful of dot products.
  int n_scan = std::min(tb.dim(), 40 * std::max(1, n_branches));
  SweepPoint pt;
  pt.param = d;
  pt.energies = es.eigenvalues().head(n_scan);
  pt.vectors = es.eigenvectors().leftCols(n_scan);
  auto pairs = find_ion_branch_pairs(tb, pt, d, n_branches);
  BranchStates bs;
  bs.pair_levels = pairs;
  for (int b = 0; b < n_branches; ++b) {
    auto lr = localized_pair(tb, pt.vectors.col(pairs[b][0]),
                             pt.vectors.col(pairs[b][1]));
    bs.left.push_back(lr.first);
    bs.right.push_back(lr.second);
  }
  return bs;
}

double overlap2(const Eigen::VectorXd& target, const Eigen::VectorXcd& psi) {
  cd val(target.dot(psi.real()), target.dot(psi.imag()));
  return std::norm(val);
}

std::vector<double> thermal_weights(double theta, int n_cut) {
  if (n_cut < 0) throw std::invalid_argument("thermal: n_cut >= 0");
  std::vector<double> p(n_cut + 1, 0.0);
  if (theta <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  double gamma = std::exp(-1.0 / theta);
  double w = 1.0 - gamma;
  for (int n = 0; n <= n_cut; ++n) {
    p[n] = w;
    w *= gamma;
  }
  return p;
}

}  // namespace ionwell
