#include "ionwell/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionwell/errors.hpp"
#include "ionwell/parallel.hpp"

namespace ionwell {

namespace {

// Greedy maximum-overlap matching of tracks onto distinct levels.
// overlap(t, l) = |<seed_t | column_l>|.  Returns the level per track.
std::vector<int> assign_distinct(const Eigen::MatrixXd& overlap) {
  const int nt = int(overlap.rows());
  const int nl = int(overlap.cols());
  std::vector<int> pick(nt, -1);
  std::vector<char> track_done(nt, 0), level_used(nl, 0);
  for (int round = 0; round < nt; ++round) {
    double best = -1.0;
    int bt = -1, bl = -1;
    for (int t = 0; t < nt; ++t) {
      if (track_done[t]) continue;
      for (int l = 0; l < nl; ++l) {
        if (level_used[l]) continue;
        if (overlap(t, l) > best) {
          best = overlap(t, l);
          bt = t;
          bl = l;
        }
      }
    }
    if (bt < 0) break;
    pick[bt] = bl;
    track_done[bt] = 1;
    level_used[bl] = 1;
  }
  return pick;
}

}  // namespace

TrackedSweep tracked_sweep(const AssembleFn& assemble,
                           const std::vector<double>& params, int n_keep,
                           const std::vector<TrackSeed>& seeds,
                           double overlap_floor, int n_threads) {
  if (params.empty()) throw std::invalid_argument("tracked_sweep: no params");

  TrackedSweep sweep;
  sweep.points.resize(params.size());
  parallel_for(int(params.size()), n_threads, [&](int i) {
    Eigen::MatrixXd h = assemble(params[i]);
    if (h.rows() != h.cols())
      throw NumericalError("tracked_sweep: non-square Hamiltonian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
      throw NumericalError("tracked_sweep: diagonalization failed");
    int keep = n_keep;
    if (keep <= 0 || keep > h.rows()) keep = int(h.rows());
    sweep.points[i].param = params[i];
    sweep.points[i].energies = es.eigenvalues().head(keep);
    sweep.points[i].vectors = es.eigenvectors().leftCols(keep);
  });

  const int np = int(params.size());
  const int nt = int(seeds.size());
  const int nl = int(sweep.points[0].energies.size());
  sweep.tracks.resize(nt);

  // Seed assignment at the first point.
  {
    Eigen::MatrixXd overlap(nt, nl);
    for (int t = 0; t < nt; ++t) {
      if (seeds[t].vector.size() > 0) {
        overlap.row(t) =
            (seeds[t].vector.transpose() * sweep.points[0].vectors)
                .cwiseAbs();
      } else {
        if (seeds[t].level < 0 || seeds[t].level >= nl)
          throw std::invalid_argument("tracked_sweep: seed level out of range");
        overlap.row(t).setZero();
        overlap(t, seeds[t].level) = 1.0;
      }
    }
    std::vector<int> pick = assign_distinct(overlap);
    for (int t = 0; t < nt; ++t) {
      Track& tr = sweep.tracks[t];
      tr.label = seeds[t].label;
      tr.level.assign(np, -1);
      tr.energy.assign(np, 0.0);
      tr.continuity.assign(np, 1.0);
      tr.ok.assign(np, 1);
      tr.level[0] = pick[t];
      tr.energy[0] = sweep.points[0].energies[pick[t]];
    }
  }

  // Follow each track by eigenvector continuity.
  Eigen::MatrixXd prev(int(sweep.points[0].vectors.rows()), nt);
  for (int t = 0; t < nt; ++t)
    prev.col(t) = sweep.points[0].vectors.col(sweep.tracks[t].level[0]);

  for (int j = 1; j < np; ++j) {
    const Eigen::MatrixXd& cols = sweep.points[j].vectors;
    Eigen::MatrixXd overlap = (prev.transpose() * cols).cwiseAbs();
    std::vector<int> pick = assign_distinct(overlap);
    for (int t = 0; t < nt; ++t) {
      Track& tr = sweep.tracks[t];
      tr.level[j] = pick[t];
      tr.energy[j] = sweep.points[j].energies[pick[t]];
      tr.continuity[j] = overlap(t, pick[t]);
      tr.ok[j] = overlap(t, pick[t]) >= overlap_floor ? 1 : 0;
      prev.col(t) = cols.col(pick[t]);
    }
  }

  for (int t = 0; t < nt; ++t) {
    auto events = detect_avoided_crossings(sweep, t);
    sweep.crossings.insert(sweep.crossings.end(), events.begin(),
                           events.end());
  }
  return sweep;
}

std::vector<CrossingEvent> detect_avoided_crossings(const TrackedSweep& sweep,
                                                    int track_index) {
  std::vector<CrossingEvent> events;
  const Track& tr = sweep.tracks.at(track_index);
  const int np = int(sweep.points.size());
  if (np < 3) return events;

  // Gap from the tracked level to its nearest sorted neighbour, per point.
  std::vector<double> gap(np);
  std::vector<int> partner(np);
  for (int j = 0; j < np; ++j) {
    const Eigen::VectorXd& e = sweep.points[j].energies;
    int i = tr.level[j];
    double gd = i > 0 ? e[i] - e[i - 1] : std::numeric_limits<double>::max();
    double gu = i + 1 < e.size() ? e[i + 1] - e[i]
                                 : std::numeric_limits<double>::max();
    if (gd <= gu) {
      gap[j] = gd;
      partner[j] = i - 1;
    } else {
      gap[j] = gu;
      partner[j] = i + 1;
    }
  }

  for (int j = 1; j + 1 < np; ++j) {
    if (!(gap[j] < gap[j - 1] && gap[j] <= gap[j + 1])) continue;
    if (partner[j] < 0 || partner[j] >= sweep.points[j].energies.size())
      continue;

    CrossingEvent ev;
    ev.track = track_index;
    ev.point = j;
    ev.param_center = sweep.points[j].param;
    ev.gap = gap[j];
    ev.partner_level = partner[j];

    // Exchange test: does the partner's character move from one side of the
    // track to the other in sorted order across the minimum?
    Eigen::VectorXd w = sweep.points[j].vectors.col(partner[j]);
    auto best_level = [&](int point) {
      Eigen::VectorXd ov =
          (w.transpose() * sweep.points[point].vectors).cwiseAbs();
      int idx = 0;
      ov.maxCoeff(&idx);
      return std::pair<int, double>(idx, ov[idx]);
    };
    auto [before, ov_before] = best_level(j - 1);
    auto [after, ov_after] = best_level(j + 1);
    if (ov_before < 0.5 || ov_after < 0.5) {
      ev.resolved = false;  // several levels mix; grid too coarse here
    } else {
      int side_before = before - tr.level[j - 1];
      int side_after = after - tr.level[j + 1];
      if (side_before == 0 || side_after == 0 ||
          (side_before > 0) == (side_after > 0))
        continue;  // no character exchange: curvature of a regular gap
    }

    // Refine with a parabola through gap^2 (exact for a linear two-level
    // crossing g^2 = gap_min^2 + slope^2 (d - d0)^2).
    double d0 = sweep.points[j - 1].param, d1 = sweep.points[j].param,
           d2 = sweep.points[j + 1].param;
    double q0 = gap[j - 1] * gap[j - 1], q1 = gap[j] * gap[j],
           q2 = gap[j + 1] * gap[j + 1];
    double den = (d0 - d1) * (d0 - d2) * (d1 - d2);
    if (den != 0.0) {
      double a = (d2 * (q1 - q0) + d1 * (q0 - q2) + d0 * (q2 - q1)) / den;
      double b = (d2 * d2 * (q0 - q1) + d1 * d1 * (q2 - q0) +
                  d0 * d0 * (q1 - q2)) /
                 den;
      if (a > 0.0) {
        double dv = -b / (2.0 * a);
        double lo = std::min(d0, d2), hi = std::max(d0, d2);
        if (dv >= lo && dv <= hi) {
          double c =
              q1 - a * d1 * d1 - b * d1;  // parabola constant term
          double qv = a * dv * dv + b * dv + c;
          ev.param_center = dv;
          ev.gap = std::sqrt(std::max(qv, 0.0));
        }
      }
    }
    events.push_back(ev);
  }
  return events;
}

}  // namespace ionwell
