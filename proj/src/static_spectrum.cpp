#include "ionwell/static_spectrum.hpp"

#include "ionwell/archive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionwell/clebsch.hpp"
#include "ionwell/errors.hpp"

namespace ionwell {

StaticBasis1D build_static_basis_1d(const StaticConfig1D& cfg) {
  if (cfg.n_states < 2)
    throw std::invalid_argument("static basis needs at least 2 states");
  int n_half = (cfg.n_states + 1) / 2;

  QdtProblem even{cfg.mass, cfg.omega, cfg.beta, cfg.phi_even,
                  true,     -1,        +1};
  QdtProblem odd = even;
  odd.phi = cfg.phi_odd;
  odd.parity = -1;

  auto grid = make_qdt_grid(even, n_half, cfg.e_floor, cfg.grid);
  RadialBasis be = solve_sector_cached(even, n_half, cfg.e_floor, cfg.grid,
                                       grid, cfg.cache_dir);
  RadialBasis bo = solve_sector_cached(odd, n_half, cfg.e_floor, cfg.grid,
                                       grid, cfg.cache_dir);
  RadialBasis merged = merge_bases({be, bo});

  // Trim to the requested size (lowest-energy states win).
  if (merged.size() > cfg.n_states) {
    RadialBasis cut;
    cut.grid = merged.grid;
    cut.mass_factor = merged.mass_factor;
    cut.energy = merged.energy.head(cfg.n_states);
    cut.psi = merged.psi.topRows(cfg.n_states);
    cut.tag.assign(merged.tag.begin(), merged.tag.begin() + cfg.n_states);
    merged = std::move(cut);
  }

  StaticBasis1D sb;
  sb.basis = std::move(merged);
  sb.m2 = moment_matrix(sb.basis, 2);
  sb.m4 = moment_matrix(sb.basis, 4);
  sb.mass = cfg.mass;
  sb.omega = cfg.omega;
  return sb;
}

Eigen::MatrixXd static_hamiltonian_1d(const StaticBasis1D& sb, double d) {
  if (d <= 0.0) throw std::invalid_argument("half-separation d must be > 0");
  const double mw2 = sb.mass * sb.omega * sb.omega;
  const double barrier = mw2 * d * d / 8.0;
  Eigen::MatrixXd h =
      (mw2 / 4.0) * (sb.m4 / (2.0 * d * d) - 3.0 * sb.m2);
  for (int k = 0; k < sb.basis.size(); ++k)
    h(k, k) += sb.basis.energy[k] + barrier;
  return h;
}

Eigen::MatrixXd half_line_overlap_matrix(const RadialBasis& b) {
  Eigen::Map<const Eigen::VectorXd> w(b.grid->w.data(), b.grid->n());
  return b.psi * w.asDiagonal() * b.psi.transpose();
}

namespace {

// The deep 1/x^4 bound states survive the double-well projection as
// low-lying levels localized at the ion; the tunnelling pair is the lowest
// adjacent pair extended over the wells, <x^2> ~ d^2 instead of O(1).
int lowest_well_pair(const Eigen::MatrixXd& h, const Eigen::MatrixXd& x2,
                     double d, int n_keep) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const int n = std::min<int>(n_keep, es.eigenvectors().cols());
  const double floor = d * d / 4.0;
  int prev_ok = -2;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd v = es.eigenvectors().col(i);
    if (v.dot(x2 * v) > floor) {
      if (prev_ok == i - 1) return i - 1;
      prev_ok = i;
    } else {
      prev_ok = -2;
    }
  }
  throw NumericalError(
      "no adjacent pair of well-localized levels at the largest separation; "
      "raise n_keep or the basis size");
}

}  // namespace

TrackedSweep static_sweep_1d(const StaticBasis1D& sb,
                             const std::vector<double>& d_desc, int n_keep,
                             double overlap_floor, int n_threads) {
  if (d_desc.empty()) throw std::invalid_argument("empty sweep");
  const int g = lowest_well_pair(static_hamiltonian_1d(sb, d_desc.front()),
                                 sb.m2, d_desc.front(), n_keep);
  std::vector<TrackSeed> seeds{{"g", g, {}}, {"e", g + 1, {}}};
  return tracked_sweep(
      [&sb](double d) { return static_hamiltonian_1d(sb, d); }, d_desc,
      n_keep, seeds, overlap_floor, n_threads);
}

std::vector<TunnellingPoint> tunnelling_rate(const TrackedSweep& sweep,
                                             int track_g, int track_e) {
  const Track& g = sweep.tracks.at(track_g);
  const Track& e = sweep.tracks.at(track_e);
  const int np = int(sweep.points.size());
  std::vector<TunnellingPoint> out(np);
  for (int j = 0; j < np; ++j) {
    out[j].d = sweep.points[j].param;
    out[j].j = e.energy[j] - g.energy[j];
    out[j].valid = g.ok[j] && e.ok[j] && out[j].j >= 0.0;
  }
  for (const CrossingEvent& ev : sweep.crossings) {
    if (ev.track != track_g && ev.track != track_e) continue;
    for (int j = std::max(0, ev.point - 1);
         j <= std::min(np - 1, ev.point + 1); ++j)
      out[j].valid = false;
  }
  return out;
}

StaticBasis3D build_static_basis_3d(const StaticConfig3D& cfg) {
  if (cfg.l_max < 0 || cfg.n_per_l < 1)
    throw std::invalid_argument("3d basis needs l_max >= 0, n_per_l >= 1");

  QdtProblem p0{cfg.mass, cfg.omega_perp, cfg.beta, cfg.phi, true, 0, +1};
  auto grid = make_qdt_grid(p0, cfg.n_per_l, cfg.e_floor, cfg.grid);

  std::vector<RadialBasis> parts(cfg.l_max + 1);
  for (int l = 0; l <= cfg.l_max; ++l) {
    QdtProblem pl = p0;
    pl.l = l;
    parts[l] = solve_sector_cached(pl, cfg.n_per_l, cfg.e_floor, cfg.grid,
                                   grid, cfg.cache_dir);
  }
  RadialBasis merged = merge_bases(parts);

  Eigen::MatrixXd r2 = moment_matrix(merged, 2);
  Eigen::MatrixXd r4 = moment_matrix(merged, 4);

  StaticBasis3D sb;
  const int n = merged.size();
  sb.z2.resize(n, n);
  sb.z4.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      sb.z2(a, b) = r2(a, b) * angular_cos_moment(2, merged.tag[a],
                                                  merged.tag[b]);
      sb.z4(a, b) = r4(a, b) * angular_cos_moment(4, merged.tag[a],
                                                  merged.tag[b]);
    }
  sb.radial = std::move(merged);
  sb.mass = cfg.mass;
  sb.omega = cfg.omega;
  sb.omega_perp = cfg.omega_perp;
  return sb;
}

Eigen::MatrixXd static_hamiltonian_3d(const StaticBasis3D& sb, double d) {
  if (d <= 0.0) throw std::invalid_argument("half-separation d must be > 0");
  const double mw2 = sb.mass * sb.omega * sb.omega;
  const double mwp2 = sb.mass * sb.omega_perp * sb.omega_perp;
  const double barrier = mw2 * d * d / 8.0;
  // Residual on top of the isotropic reference:
  //   V_dw(z) - (1/2) m w_perp^2 z^2
  //     = barrier + (m w^2 / (8 d^2)) z^4 - (m w^2/4 + m w_perp^2/2) z^2
  Eigen::MatrixXd h = (mw2 / (8.0 * d * d)) * sb.z4 -
                      (mw2 / 4.0 + mwp2 / 2.0) * sb.z2;
  for (int k = 0; k < sb.radial.size(); ++k)
    h(k, k) += sb.radial.energy[k] + barrier;
  return h;
}

TrackedSweep static_sweep_3d(const StaticBasis3D& sb,
                             const std::vector<double>& d_desc, int n_keep,
                             double overlap_floor, int n_threads) {
  if (d_desc.empty()) throw std::invalid_argument("empty sweep");
  const int g = lowest_well_pair(static_hamiltonian_3d(sb, d_desc.front()),
                                 sb.z2, d_desc.front(), n_keep);
  std::vector<TrackSeed> seeds{{"g", g, {}}, {"e", g + 1, {}}};
  return tracked_sweep(
      [&sb](double d) { return static_hamiltonian_3d(sb, d); }, d_desc,
      n_keep, seeds, overlap_floor, n_threads);
}

}  // namespace ionwell
