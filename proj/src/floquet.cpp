#include "ionwell/floquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ionwell/errors.hpp"

namespace ionwell {

SecularTrap make_secular_trap(double a, double q, double omega_drive) {
  if (omega_drive <= 0.0)
    throw std::invalid_argument("secular trap: drive frequency must be > 0");
  if (q < 0.0 || a < 0.0)
    throw std::invalid_argument("secular trap: a and q must be >= 0");
  if (q >= 0.91)
    throw std::invalid_argument(
        "secular trap: q outside the validated lowest stability region");
  if (q == 0.0 && a > 0.0)
    throw std::invalid_argument(
        "secular trap: a > 0 with q = 0 leaves the drive factor undefined");
  SecularTrap t;
  t.a = a;
  t.q = q;
  t.omega_drive = omega_drive;
  t.omega_sec = 0.5 * omega_drive * std::sqrt(a + 0.5 * q * q);
  t.g = (q == 0.0) ? std::sqrt(0.5)
                   : 1.0 / std::sqrt(2.0 * (1.0 + 2.0 * a / (q * q)));
  return t;
}

namespace {

// Double-well ground pair by ion-ground well character.  An energy cut
// alone cannot do this: the barrier offset grows with d^2 and pushes the
// molecular+COM tower through any fixed threshold, and for light atoms
// the tower interleaves with the pair.  e_cut stays as a sanity floor on
// the identified pair.
std::array<int, 2> labeled_ground_pair(const TwoBodyBasis& tb,
                                       const Eigen::VectorXd& e,
                                       const Eigen::MatrixXd& c, double d,
                                       double e_cut) {
  SweepPoint pt;
  pt.param = d;
  pt.energies = e;
  pt.vectors = c;
  std::array<int, 2> pair = find_ion_branch_pairs(tb, pt, d, 1)[0];
  if (e[pair[0]] <= e_cut)
    throw NumericalError(
        "identified ground pair lies below the molecular-exclusion cut");
  return pair;
}

}  // namespace

std::vector<CouplingRow> micromotion_couplings(const TwoBodyBasis& tb,
                                               double d,
                                               const SecularTrap& trap,
                                               int n_levels,
                                               double e_cut) {
  n_levels = std::min(n_levels, tb.dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      two_body_hamiltonian(tb, d));
  Eigen::VectorXd e = es.eigenvalues().head(n_levels);
  int g = labeled_ground_pair(tb, e, es.eigenvectors().leftCols(n_levels), d,
                              e_cut)[0];
  Eigen::VectorXd cg = es.eigenvectors().col(g);

  Eigen::MatrixXd r2 = Eigen::MatrixXd::Zero(tb.dim(), tb.dim());
  add_product_moment(tb, r2, 1.0, 0, 2);
  Eigen::VectorXd row_rr =
      es.eigenvectors().leftCols(n_levels).transpose() * (r2 * cg);
  r2.setZero();
  add_product_moment(tb, r2, 1.0, 1, 1);
  Eigen::VectorXd row_rR =
      es.eigenvectors().leftCols(n_levels).transpose() * (r2 * cg);
  r2.setZero();
  add_product_moment(tb, r2, 1.0, 2, 0);
  Eigen::VectorXd row_RR =
      es.eigenvectors().leftCols(n_levels).transpose() * (r2 * cg);

  const double lam = tb.lambda;
  std::vector<CouplingRow> out;
  for (int l = 0; l < n_levels; ++l) {
    if (l == g) continue;
    CouplingRow row;
    row.level = l;
    row.delta_e = e[l] - e[g];
    double f = trap.g * tb.mass_ion * trap.omega_sec *
               std::abs(row.delta_e) / tb.omega_atom;
    row.v_rr = f * lam * lam * std::abs(row_rr[l]);
    row.v_rR = f * lam * std::abs(row_rR[l]);
    row.v_RR = f * std::abs(row_RR[l]);
    out.push_back(row);
  }
  return out;
}

Eigen::MatrixXd build_floquet_matrix(const Eigen::VectorXd& energies,
                                     const Eigen::MatrixXd& w_zi2,
                                     double mass_ion,
                                     const SecularTrap& trap, int j_max) {
  if (j_max < 2)
    throw std::invalid_argument(
        "floquet: j_max >= 2 required so both drive harmonics act");
  const int n = int(energies.size());
  if (w_zi2.rows() != n || w_zi2.cols() != n)
    throw std::invalid_argument("floquet: W dimension mismatch");
  const int nc = 2 * j_max + 1;
  Eigen::MatrixXd w = 0.5 * (w_zi2 + w_zi2.transpose());

  // c1: sin(Omega t) anticommutator term ({z_i,p_i} elements are
  // i m_i (E'-E) W), c2: cos(2 Omega t) term
  const double c1 = 0.5 * trap.g * mass_ion * trap.omega_sec;
  const double c2 =
      0.5 * mass_ion * trap.g * trap.g * trap.omega_sec * trap.omega_sec;
  Eigen::MatrixXd b(n, n);
  for (int lp = 0; lp < n; ++lp)
    for (int l = 0; l < n; ++l)
      b(lp, l) = -c1 * (energies[lp] - energies[l]) * w(lp, l);

  Eigen::MatrixXd hf = Eigen::MatrixXd::Zero(nc * n, nc * n);
  for (int jb = 0; jb < nc; ++jb) {
    int j = jb - j_max;
    hf.block(jb * n, jb * n, n, n).diagonal() =
        energies.array() + j * trap.omega_drive;
    if (jb + 1 < nc) {
      hf.block((jb + 1) * n, jb * n, n, n) = b;
      hf.block(jb * n, (jb + 1) * n, n, n) = b.transpose();
    }
    if (jb + 2 < nc) {
      hf.block((jb + 2) * n, jb * n, n, n) = -c2 * w;
      hf.block(jb * n, (jb + 2) * n, n, n) = -c2 * w;
    }
  }
  return hf;
}

double reduce_to_zone(double eps, double omega_drive) {
  double r = std::remainder(eps, omega_drive);
  if (r >= 0.5 * omega_drive) r -= omega_drive;
  return r;
}

namespace {

struct TrackState {
  Eigen::VectorXd vec;  // product x class representation
  int idx = -1;
  double overlap = 0.0;
};

void match_state(const Eigen::MatrixXd& p, TrackState& st) {
  Eigen::VectorXd o = p.transpose() * st.vec;
  int best = 0;
  double bv = -1.0;
  for (int k = 0; k < o.size(); ++k)
    if (std::abs(o[k]) > bv) {
      bv = std::abs(o[k]);
      best = k;
    }
  st.idx = best;
  st.overlap = bv;
  st.vec = p.col(best);
}

// Distance on the quasi-energy circle to the nearest spectator state.
// States whose pair_weight exceeds 1/2 are class copies of the tracked
// pair itself (the same physical states repeated at multiples of Omega,
// displaced only by block-truncation artifacts) and are not gaps.
double circle_gap(const Eigen::VectorXd& eps, int idx, double omega,
                  const Eigen::VectorXd& pair_weight) {
  double best = 0.5 * omega;
  for (int k = 0; k < eps.size(); ++k) {
    if (k == idx || pair_weight[k] > 0.5) continue;
    double dist = std::abs(std::remainder(eps[k] - eps[idx], omega));
    best = std::min(best, dist);
  }
  return best;
}

}  // namespace

FloquetSweep floquet_sweep(const TwoBodyBasis& tb,
                           const std::vector<double>& d_desc,
                           const SecularTrap& trap,
                           const FloquetSweepOptions& opt) {
  if (d_desc.empty())
    throw std::invalid_argument("floquet_sweep: empty separation list");
  const int n = std::min(opt.n_levels, tb.dim());
  const int nc = 2 * opt.j_max + 1;
  Eigen::MatrixXd zi2 = ion_coordinate_sq_matrix(tb);

  FloquetSweep sweep;
  sweep.n_levels = n;
  sweep.j_max = opt.j_max;
  sweep.points.resize(d_desc.size());

  TrackState fg, fe;            // Floquet-tracked pair
  Eigen::VectorXd ug, ue;       // unperturbed pair, product basis
  for (size_t ip = 0; ip < d_desc.size(); ++ip) {
    double d = d_desc[ip];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        two_body_hamiltonian(tb, d));
    Eigen::MatrixXd c = es.eigenvectors().leftCols(n);
    Eigen::VectorXd e = es.eigenvalues().head(n);

    FloquetSweepPoint pt;
    pt.d = d;

    int g_idx, e_idx;
    if (ip == 0) {
      if (opt.seed_g >= 0 && opt.seed_e >= 0) {
        g_idx = opt.seed_g;
        e_idx = opt.seed_e;
      } else {
        std::array<int, 2> pair = labeled_ground_pair(tb, e, c, d, opt.e_cut);
        g_idx = pair[0];
        e_idx = pair[1];
      }
      if (e_idx >= n)
        throw std::invalid_argument("floquet_sweep: seed outside basis");
      ug = c.col(g_idx);
      ue = c.col(e_idx);
    } else {
      Eigen::VectorXd og = (c.transpose() * ug).cwiseAbs();
      Eigen::VectorXd oe = (c.transpose() * ue).cwiseAbs();
      og.maxCoeff(&g_idx);
      oe.maxCoeff(&e_idx);
      ug = c.col(g_idx);
      ue = c.col(e_idx);
    }
    pt.e_g = e[g_idx];
    pt.e_e = e[e_idx];

    Eigen::MatrixXd w = c.transpose() * zi2 * c;
    Eigen::MatrixXd hf =
        build_floquet_matrix(e, w, tb.mass_ion, trap, opt.j_max);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esf(hf);

    // physical (product x class) representation of every Floquet state
    Eigen::MatrixXd p(nc * tb.dim(), nc * n);
    for (int jb = 0; jb < nc; ++jb)
      p.middleRows(jb * tb.dim(), tb.dim()) =
          c * esf.eigenvectors().middleRows(jb * n, n);

    if (ip == 0) {
      fg.vec = Eigen::VectorXd::Zero(nc * tb.dim());
      fe.vec = Eigen::VectorXd::Zero(nc * tb.dim());
      fg.vec.segment(opt.j_max * tb.dim(), tb.dim()) = ug;
      fe.vec.segment(opt.j_max * tb.dim(), tb.dim()) = ue;
    }
    match_state(p, fg);
    match_state(p, fe);

    // per-state weight inside the tracked pair's class manifold
    Eigen::VectorXd pw = Eigen::VectorXd::Zero(nc * n);
    for (const Eigen::VectorXd* u : {&ug, &ue})
      for (int jb = 0; jb < nc; ++jb)
        pw += (p.middleRows(jb * tb.dim(), tb.dim()).transpose() * *u)
                  .cwiseAbs2();

    pt.eps_g = esf.eigenvalues()[fg.idx];
    pt.eps_e = esf.eigenvalues()[fe.idx];
    pt.overlap_g = fg.overlap;
    pt.overlap_e = fe.overlap;
    pt.gap_g = circle_gap(esf.eigenvalues(), fg.idx, trap.omega_drive, pw);
    pt.gap_e = circle_gap(esf.eigenvalues(), fe.idx, trap.omega_drive, pw);
    pt.ok = fg.overlap >= opt.overlap_floor &&
            fe.overlap >= opt.overlap_floor && fg.idx != fe.idx;
    sweep.points[ip] = pt;
  }
  return sweep;
}

std::vector<std::pair<int, double>> floquet_crossing_gaps(
    const FloquetSweep& sweep, bool excited) {
  std::vector<std::pair<int, double>> out;
  const auto& pts = sweep.points;
  auto gap_of = [&](int i) {
    return excited ? pts[i].gap_e : pts[i].gap_g;
  };
  for (int i = 1; i + 1 < int(pts.size()); ++i) {
    if (gap_of(i) < gap_of(i - 1) && gap_of(i) <= gap_of(i + 1))
      out.push_back({i, gap_of(i)});
  }
  return out;
}

}  // namespace ionwell
