#include "ionwell/twobody.hpp"

#include "ionwell/archive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ionwell/errors.hpp"
#include "ionwell/hermite.hpp"
#include "ionwell/parallel.hpp"

namespace ionwell {

std::pair<double, double> com_rel_frequencies(double omega_atom,
                                              double omega_ion,
                                              double mass_atom,
                                              double mass_ion) {
  if (omega_atom < 0 || omega_ion < 0 || mass_atom <= 0 || mass_ion <= 0)
    throw std::invalid_argument("com_rel_frequencies: non-positive input");
  double m = mass_atom + mass_ion;
  double w_com = std::sqrt((mass_ion * omega_ion * omega_ion +
                            mass_atom * omega_atom * omega_atom) /
                           m);
  double w_rel = std::sqrt((mass_ion * omega_atom * omega_atom +
                            mass_atom * omega_ion * omega_ion) /
                           m);
  return {w_com, w_rel};
}

void add_product_moment(const TwoBodyBasis& tb, Eigen::MatrixXd& h,
                        double coeff, int p_com, int q_rel) {
  const Eigen::MatrixXd& a = tb.xcom.at(p_com);
  const Eigen::MatrixXd& b = tb.xrel.at(q_rel);
  const int nr = tb.n_rel;
  for (int n = 0; n < tb.n_com; ++n)
    for (int m = 0; m < tb.n_com; ++m) {
      if (std::abs(n - m) > p_com) continue;  // oscillator band structure
      double f = coeff * a(n, m);
      if (f == 0.0) continue;
      h.block(n * nr, m * nr, nr, nr) += f * b;
    }
}

namespace {

Eigen::MatrixXd product_moment(const TwoBodyBasis& tb, double coeff,
                               int p_com, int q_rel) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(tb.dim(), tb.dim());
  add_product_moment(tb, h, coeff, p_com, q_rel);
  return h;
}

// Linear interpolation of a relative eigenfunction (uniform in the grid's
// map coordinate); odd-parity continuation for r < 0.
double rel_value(const RadialBasis& b, int k, double r) {
  const MappedGrid& g = *b.grid;
  double ar = std::abs(r);
  if (ar <= g.x_min() || ar >= g.x_max()) return 0.0;
  double u = (g.s_of_x(ar) - g.s0) / g.h;
  int i = int(u);
  if (i < 0) i = 0;
  if (i > g.n() - 2) i = g.n() - 2;
  double f = u - i;
  double v = (1.0 - f) * b.psi(k, i) + f * b.psi(k, i + 1);
  return (r < 0 && b.tag[k] < 0) ? -v : v;
}

}  // namespace

TwoBodyBasis build_two_body_basis(const TwoBodyConfig& cfg) {
  TwoBodyBasis tb;
  tb.mass_atom = cfg.mass_atom;
  tb.mass_ion = cfg.mass_ion;
  tb.mass_total = cfg.mass_atom + cfg.mass_ion;
  double mu = cfg.mass_atom * cfg.mass_ion / tb.mass_total;
  if (std::abs(mu - TwoBodyBasis::mass_rel) > 1e-9)
    throw std::invalid_argument(
        "two-body masses must be given in units of twice the reduced mass");
  tb.omega_atom = cfg.omega_atom;
  tb.omega_ion = cfg.omega_ion;
  std::tie(tb.omega_com, tb.omega_rel) = com_rel_frequencies(
      cfg.omega_atom, cfg.omega_ion, cfg.mass_atom, cfg.mass_ion);
  tb.kappa = cfg.mass_ion / tb.mass_total;
  tb.lambda = cfg.mass_atom / tb.mass_total;
  tb.n_com = cfg.n_com;
  tb.n_rel = cfg.n_rel;

  // Relative problem: reduced mass 1/2, boundary wavevector factor 1.
  int n_half = (cfg.n_rel + 1) / 2;
  QdtProblem even{TwoBodyBasis::mass_rel, tb.omega_rel, 1.0, cfg.phi_even,
                  true, -1, +1};
  QdtProblem odd = even;
  odd.phi = cfg.phi_odd;
  odd.parity = -1;
  auto grid = make_qdt_grid(even, n_half, cfg.e_floor_rel, cfg.grid);
  RadialBasis merged = merge_bases(
      {solve_sector_cached(even, n_half, cfg.e_floor_rel, cfg.grid, grid,
                           cfg.cache_dir),
       solve_sector_cached(odd, n_half, cfg.e_floor_rel, cfg.grid, grid,
                           cfg.cache_dir)});
  if (merged.size() > cfg.n_rel) {
    RadialBasis cut;
    cut.grid = merged.grid;
    cut.mass_factor = merged.mass_factor;
    cut.energy = merged.energy.head(cfg.n_rel);
    cut.psi = merged.psi.topRows(cfg.n_rel);
    cut.tag.assign(merged.tag.begin(), merged.tag.begin() + cfg.n_rel);
    merged = std::move(cut);
  }
  tb.rel = std::move(merged);

  tb.xcom = ho_moment_matrices(tb.n_com, tb.mass_total, tb.omega_com, 4);
  tb.xrel.resize(5);
  for (int q = 0; q <= 4; ++q) tb.xrel[q] = moment_matrix(tb.rel, q);

  tb.e_com.resize(tb.n_com);
  for (int n = 0; n < tb.n_com; ++n)
    tb.e_com[n] = tb.omega_com * (n + 0.5);
  tb.e_sum.resize(tb.dim());
  for (int n = 0; n < tb.n_com; ++n)
    for (int k = 0; k < tb.n_rel; ++k)
      tb.e_sum[n * tb.n_rel + k] = tb.e_com[n] + tb.rel.energy[k];

  // d-independent residual: quadratic COM-relative coupling plus the
  // double well minus its own harmonic reference,
  //   mu (w_i^2 - w_a^2) R r + [V_dw(z_a) - (1/2) m_a w_a^2 z_a^2]
  // whose d-independent piece is -(3/4) m_a w_a^2 z_a^2.
  const double k1 = tb.kappa, k2 = k1 * k1, k3 = k2 * k1, k4 = k2 * k2;
  tb.h_static = Eigen::MatrixXd::Zero(tb.dim(), tb.dim());
  tb.h_static.diagonal() = tb.e_sum;
  double cross = TwoBodyBasis::mass_rel *
                 (tb.omega_ion * tb.omega_ion - tb.omega_atom * tb.omega_atom);
  add_product_moment(tb, tb.h_static, cross, 1, 1);
  double za2 = -0.75 * tb.mass_atom * tb.omega_atom * tb.omega_atom;
  add_product_moment(tb, tb.h_static, za2, 2, 0);
  add_product_moment(tb, tb.h_static, -2.0 * k1 * za2, 1, 1);
  add_product_moment(tb, tb.h_static, k2 * za2, 0, 2);

  tb.z4a = Eigen::MatrixXd::Zero(tb.dim(), tb.dim());
  add_product_moment(tb, tb.z4a, 1.0, 4, 0);
  add_product_moment(tb, tb.z4a, -4.0 * k1, 3, 1);
  add_product_moment(tb, tb.z4a, 6.0 * k2, 2, 2);
  add_product_moment(tb, tb.z4a, -4.0 * k3, 1, 3);
  add_product_moment(tb, tb.z4a, k4, 0, 4);
  return tb;
}

Eigen::MatrixXd atom_coordinate_matrix(const TwoBodyBasis& tb, int power) {
  const double k1 = tb.kappa;
  switch (power) {
    case 1: {
      Eigen::MatrixXd h = product_moment(tb, 1.0, 1, 0);
      add_product_moment(tb, h, -k1, 0, 1);
      return h;
    }
    case 2: {
      Eigen::MatrixXd h = product_moment(tb, 1.0, 2, 0);
      add_product_moment(tb, h, -2.0 * k1, 1, 1);
      add_product_moment(tb, h, k1 * k1, 0, 2);
      return h;
    }
    case 4:
      return tb.z4a;
    default:
      throw std::invalid_argument("atom_coordinate_matrix: power not cached");
  }
}

Eigen::MatrixXd ion_coordinate_sq_matrix(const TwoBodyBasis& tb) {
  const double l1 = tb.lambda;
  Eigen::MatrixXd h = product_moment(tb, 1.0, 2, 0);
  add_product_moment(tb, h, 2.0 * l1, 1, 1);
  add_product_moment(tb, h, l1 * l1, 0, 2);
  return h;
}

Eigen::MatrixXd two_body_hamiltonian(const TwoBodyBasis& tb, double d) {
  if (d <= 0.0) throw std::invalid_argument("half-separation d must be > 0");
  double s = tb.mass_atom * tb.omega_atom * tb.omega_atom / (8.0 * d * d);
  Eigen::MatrixXd h = tb.h_static + s * tb.z4a;
  h.diagonal().array() += tb.barrier(d);
  return h;
}

// --- Asymptotic product labels ----------------------------------------

namespace {

// Coefficient expansion over the product basis of separated-system
// targets  chi_{n_i}(z_i) * eta_{n_a}(z_a -+ d): quadrature over the
// COM coordinate (Simpson on a uniform grid) and the relative grid
// (native weights, parity continuation to r < 0).  All targets share
// one pass over the quadrature points.
struct TargetExpander {
  const TwoBodyBasis& tb;
  int n_ion_max, n_atom_max;
  double d;
  std::vector<double> com_node, com_wt;
  Eigen::MatrixXd f_w;  // (n_com, n_R): com weight * f_n(R_i)

  TargetExpander(const TwoBodyBasis& basis, double sep, int ni, int na)
      : tb(basis), n_ion_max(ni), n_atom_max(na), d(sep) {
    if (ni < 0 || na < 0 || ni > 30 || na > 30)
      throw std::invalid_argument("fock_labels: quantum-number range");
    double x0_com = 1.0 / std::sqrt(tb.mass_total * tb.omega_com);
    double x0_atom = 1.0 / std::sqrt(tb.mass_atom * tb.omega_atom);
    double ext = x0_com * (std::sqrt(2.0 * tb.n_com + 1.0) + 6.0);
    ext = std::max(
        ext, d + x0_atom * (std::sqrt(2.0 * n_atom_max + 1.0) + 6.0));
    double x0_ion = 1.0 / std::sqrt(tb.mass_ion * tb.omega_ion);
    double step = std::min({x0_com, x0_ion, x0_atom}) / 6.0;
    int n = int(2.0 * ext / step) | 1;  // odd count for Simpson
    n = std::max(n, 201);
    com_node.resize(n);
    com_wt.resize(n);
    double h = 2.0 * ext / (n - 1);
    for (int i = 0; i < n; ++i) {
      com_node[i] = -ext + i * h;
      double s = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      com_wt[i] = s * h / 3.0;
    }
    f_w.resize(tb.n_com, n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd f = ho_eigenfunctions_at(tb.n_com - 1, tb.mass_total,
                                               tb.omega_com, com_node[i]);
      f_w.col(i) = com_wt[i] * f;
    }
  }

  // t_side[ni*(n_atom_max+1)+na][n*n_rel+k] for side = left/right.
  void expand_all(std::vector<Eigen::VectorXd>& t_left,
                  std::vector<Eigen::VectorXd>& t_right) const {
    const MappedGrid& g = *tb.rel.grid;
    // The solver grid oversamples these smooth integrands by a large
    // factor (it resolves every short-range oscillation); a strided
    // subset still leaves tens of points per oscillation.
    const int stride = std::clamp(g.n() / 4000, 1, 16);
    std::vector<int> js;
    for (int j = 0; j < g.n(); j += stride) js.push_back(j);
    const int n_r = int(js.size());
    const int n_c = int(com_node.size());
    const int ni1 = n_ion_max + 1, na1 = n_atom_max + 1;
    const int n_lab = ni1 * na1;
    std::vector<Eigen::MatrixXd> acc(
        2 * n_lab, Eigen::MatrixXd::Zero(tb.n_com, tb.n_rel));

    const int chunk = 256;
    // chi[s][q], eta_*[s][q]: factor tables on the (R_i, r_j) tile for
    // sign branch s (0: +r, 1: -r) and quantum number q.
    std::array<std::vector<Eigen::MatrixXd>, 2> chi, eta_l, eta_r;
    for (int s = 0; s < 2; ++s) {
      chi[s].assign(ni1, Eigen::MatrixXd(n_c, chunk));
      eta_l[s].assign(na1, Eigen::MatrixXd(n_c, chunk));
      eta_r[s].assign(na1, Eigen::MatrixXd(n_c, chunk));
    }
    Eigen::MatrixXd pw(tb.n_rel, chunk), pw_tag(tb.n_rel, chunk);

    for (int j0 = 0; j0 < n_r; j0 += chunk) {
      const int nb = std::min(chunk, n_r - j0);
      parallel_for(nb, 0, [&](int jj) {
        double bi[32], ba[32];
        const int node = js[j0 + jj];
        for (int s = 0; s < 2; ++s) {
          double r = (s == 0 ? 1.0 : -1.0) * g.x[node];
          for (int i = 0; i < n_c; ++i) {
            double zi = com_node[i] + tb.lambda * r;
            double za = com_node[i] - tb.kappa * r;
            ho_eigenfunctions_at(n_ion_max, tb.mass_ion, tb.omega_ion, zi,
                                 bi);
            for (int q = 0; q < ni1; ++q) chi[s][q](i, jj) = bi[q];
            ho_eigenfunctions_at(n_atom_max, tb.mass_atom, tb.omega_atom,
                                 za + d, ba);
            for (int q = 0; q < na1; ++q) eta_l[s][q](i, jj) = ba[q];
            ho_eigenfunctions_at(n_atom_max, tb.mass_atom, tb.omega_atom,
                                 za - d, ba);
            for (int q = 0; q < na1; ++q) eta_r[s][q](i, jj) = ba[q];
          }
        }
        double w = stride * g.w[node];
        for (int k = 0; k < tb.n_rel; ++k) {
          double v = w * tb.rel.psi(k, node);
          pw(k, jj) = v;
          pw_tag(k, jj) = tb.rel.tag[k] * v;
        }
      });
      parallel_for(2 * n_lab, 0, [&](int t) {
        int side = t / n_lab;
        int ni = (t % n_lab) / na1, na = (t % n_lab) % na1;
        const auto& eta = (side == 0) ? eta_l : eta_r;
        Eigen::MatrixXd tp = chi[0][ni].leftCols(nb).cwiseProduct(
            eta[0][na].leftCols(nb));
        Eigen::MatrixXd tm = chi[1][ni].leftCols(nb).cwiseProduct(
            eta[1][na].leftCols(nb));
        acc[t] += (f_w * tp) * pw.leftCols(nb).transpose() +
                  (f_w * tm) * pw_tag.leftCols(nb).transpose();
      });
    }

    t_left.resize(n_lab);
    t_right.resize(n_lab);
    for (int lab = 0; lab < n_lab; ++lab) {
      Eigen::MatrixXd tl = acc[lab].transpose();  // (n_rel, n_com)
      t_left[lab] = Eigen::Map<Eigen::VectorXd>(tl.data(), tb.dim());
      Eigen::MatrixXd tr = acc[n_lab + lab].transpose();
      t_right[lab] = Eigen::Map<Eigen::VectorXd>(tr.data(), tb.dim());
    }
  }
};

}  // namespace

std::vector<FockLabel> fock_labels(const TwoBodyBasis& tb,
                                   const SweepPoint& point, double d,
                                   int n_levels, int n_ion_max,
                                   int n_atom_max, double margin) {
  n_levels = std::min<int>(n_levels, int(point.energies.size()));
  TargetExpander ex(tb, d, n_ion_max, n_atom_max);
  std::vector<Eigen::VectorXd> t_left, t_right;
  ex.expand_all(t_left, t_right);
  const int n_lab = (n_ion_max + 1) * (n_atom_max + 1);

  std::vector<FockLabel> out(n_levels);
  for (int l = 0; l < n_levels; ++l) {
    Eigen::VectorXd c = point.vectors.col(l);
    FockLabel lab;
    for (int idx = 0; idx < n_lab; ++idx) {
      double ol = t_left[idx].dot(c);
      double orr = t_right[idx].dot(c);
      double w = ol * ol + orr * orr;
      if (w > lab.weight) {
        lab.runner_up = lab.weight;
        lab.weight = w;
        lab.n_ion = idx / (n_atom_max + 1);
        lab.n_atom = idx % (n_atom_max + 1);
      } else if (w > lab.runner_up) {
        lab.runner_up = w;
      }
    }
    lab.ambiguous = (lab.weight - lab.runner_up) < margin;
    out[l] = lab;
  }
  return out;
}

namespace {

// w(l, b) = |<L_{b,0}|psi_l>|^2 + |<R_{b,0}|psi_l>|^2: how much of
// eigenstate l belongs to ion branch b with the atom in a well ground
// state.
Eigen::MatrixXd ion_ground_weights(const TwoBodyBasis& tb,
                                   const SweepPoint& point, double d,
                                   int n_branches) {
  TargetExpander ex(tb, d, n_branches, 0);
  std::vector<Eigen::VectorXd> t_left, t_right;
  ex.expand_all(t_left, t_right);
  const int n_scan = int(point.energies.size());
  Eigen::MatrixXd w(n_scan, n_branches);
  for (int l = 0; l < n_scan; ++l) {
    Eigen::VectorXd c = point.vectors.col(l);
    for (int b = 0; b < n_branches; ++b) {
      double ol = t_left[b].dot(c), orr = t_right[b].dot(c);
      w(l, b) = ol * ol + orr * orr;
    }
  }
  return w;
}

// Non-throwing variant: {-1, -1} marks a branch whose pair could not be
// identified unambiguously at this separation.  The pair is the two
// levels carrying the most branch weight; near a spectator crossing the
// weight spreads over three levels and the choice is rejected.
std::vector<std::array<int, 2>> try_ion_branch_pairs(const TwoBodyBasis& tb,
                                                     const SweepPoint& point,
                                                     double d,
                                                     int n_branches) {
  const Eigen::MatrixXd w = ion_ground_weights(tb, point, d, n_branches);
  std::vector<std::array<int, 2>> pairs(n_branches, {-1, -1});
  for (int b = 0; b < n_branches; ++b) {
    int l1 = -1, l2 = -1, l3 = -1;  // by descending weight
    for (int l = 0; l < w.rows(); ++l) {
      const double v = w(l, b);
      if (l1 < 0 || v > w(l1, b)) {
        l3 = l2, l2 = l1, l1 = l;
      } else if (l2 < 0 || v > w(l2, b)) {
        l3 = l2, l2 = l;
      } else if (l3 < 0 || v > w(l3, b)) {
        l3 = l;
      }
    }
    if (l2 < 0 || w(l2, b) < 0.25) continue;
    if (l3 >= 0 && w(l2, b) - w(l3, b) < 0.05) continue;
    pairs[b] = {std::min(l1, l2), std::max(l1, l2)};
  }
  return pairs;
}

}  // namespace

std::vector<std::array<int, 2>> find_ion_branch_pairs(
    const TwoBodyBasis& tb, const SweepPoint& point, double d,
    int n_branches) {
  auto pairs = try_ion_branch_pairs(tb, point, d, n_branches);
  for (int b = 0; b < n_branches; ++b)
    if (pairs[b][0] < 0)
      throw NumericalError(
          "asymptotic labeling could not identify the well pair of ion "
          "branch " +
          std::to_string(b) +
          "; increase the starting separation or the kept level count");
  return pairs;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> localized_pair(
    const TwoBodyBasis& tb, const Eigen::VectorXd& g,
    const Eigen::VectorXd& e) {
  Eigen::MatrixXd za = atom_coordinate_matrix(tb, 1);
  Eigen::VectorXd plus = (g + e) / std::sqrt(2.0);
  Eigen::VectorXd minus = (g - e) / std::sqrt(2.0);
  double mp = plus.dot(za * plus);
  if (mp < 0.0) return {plus, minus};
  return {minus, plus};
}

TrackedSweep two_body_sweep(const TwoBodyBasis& tb,
                            const std::vector<double>& d_desc, int n_keep,
                            int n_branches, double overlap_floor,
                            int n_threads) {
  if (d_desc.empty())
    throw std::invalid_argument("two_body_sweep: empty separation list");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      two_body_hamiltonian(tb, d_desc.front()));
  SweepPoint first;
  first.param = d_desc.front();
  int keep = n_keep;
  if (keep <= 0 || keep > tb.dim()) keep = tb.dim();
  first.energies = es.eigenvalues().head(keep);
  first.vectors = es.eigenvectors().leftCols(keep);
  auto pairs = find_ion_branch_pairs(tb, first, d_desc.front(), n_branches);

  std::vector<TrackSeed> seeds;
  for (int b = 0; b < n_branches; ++b) {
    seeds.push_back({"n" + std::to_string(b) + "_g", pairs[b][0], {}});
    seeds.push_back({"n" + std::to_string(b) + "_e", pairs[b][1], {}});
  }
  TrackedSweep ts = tracked_sweep(
      [&tb](double d) { return two_body_hamiltonian(tb, d); }, d_desc,
      n_keep, seeds, overlap_floor, n_threads);

  // Continuity tracking takes the adiabatic branch through narrow
  // spectator crossings, but the pair splitting is defined for the
  // labeled (n_ion, well ground) states; re-rail each point onto the
  // labels wherever they are unambiguous.  Points where the labeling is
  // ambiguous (weight spread over three levels mid-crossing) keep the
  // continuity result and are marked as crossing windows.
  const int np = int(ts.points.size());
  std::vector<CrossingEvent> marks;
  for (int k = 1; k < np; ++k) {
    auto pk =
        try_ion_branch_pairs(tb, ts.points[k], ts.points[k].param, n_branches);
    for (int b = 0; b < n_branches; ++b) {
      if (pk[b][0] < 0) {
        for (int s = 0; s < 2; ++s) {
          CrossingEvent ev;
          ev.track = 2 * b + s;
          ev.point = k;
          ev.param_center = ts.points[k].param;
          ev.partner_level = -1;
          ev.resolved = false;
          marks.push_back(ev);
        }
        continue;
      }
      for (int s = 0; s < 2; ++s) {
        Track& tr = ts.tracks[2 * b + s];
        tr.level[k] = pk[b][s];
        tr.energy[k] = ts.points[k].energies[pk[b][s]];
        tr.ok[k] = 1;
      }
    }
  }
  for (Track& tr : ts.tracks)
    for (int k = 1; k < np; ++k)
      tr.continuity[k] = std::abs(
          ts.points[k - 1].vectors.col(tr.level[k - 1]).dot(
              ts.points[k].vectors.col(tr.level[k])));
  ts.crossings.clear();
  for (int ti = 0; ti < int(ts.tracks.size()); ++ti) {
    auto evs = detect_avoided_crossings(ts, ti);
    ts.crossings.insert(ts.crossings.end(), evs.begin(), evs.end());
    // diabatic level jumps: a spectator crossed through this rail
    const Track& tr = ts.tracks[ti];
    for (int k = 1; k < np; ++k) {
      if (tr.level[k] == tr.level[k - 1]) continue;
      CrossingEvent ev;
      ev.track = ti;
      ev.point = k;
      ev.param_center =
          0.5 * (ts.points[k - 1].param + ts.points[k].param);
      ev.gap = std::abs(tr.energy[k] -
                        ts.points[k].energies[tr.level[k - 1]]);
      ev.partner_level = tr.level[k - 1];
      ev.resolved = true;
      ts.crossings.push_back(ev);
    }
  }
  ts.crossings.insert(ts.crossings.end(), marks.begin(), marks.end());
  return ts;
}

Eigen::MatrixXd synthesize_density(const TwoBodyBasis& tb,
                                   const Eigen::VectorXd& coeffs,
                                   const Eigen::VectorXd& zi_nodes,
                                   const Eigen::VectorXd& za_nodes) {
  Eigen::Map<const Eigen::MatrixXd> c(coeffs.data(), tb.n_rel, tb.n_com);
  Eigen::MatrixXd out(zi_nodes.size(), za_nodes.size());
  Eigen::VectorXd phi(tb.n_rel);
  for (int a = 0; a < zi_nodes.size(); ++a)
    for (int b = 0; b < za_nodes.size(); ++b) {
      double zi = zi_nodes[a], za = za_nodes[b];
      double cr = (tb.mass_ion * zi + tb.mass_atom * za) / tb.mass_total;
      double r = zi - za;
      Eigen::VectorXd f = ho_eigenfunctions_at(tb.n_com - 1, tb.mass_total,
                                               tb.omega_com, cr);
      for (int k = 0; k < tb.n_rel; ++k) phi[k] = rel_value(tb.rel, k, r);
      out(a, b) = std::abs(f.dot(c.transpose() * phi));
    }
  return out;
}

}  // namespace ionwell
