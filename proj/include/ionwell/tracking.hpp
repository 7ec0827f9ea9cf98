#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace ionwell {

// One diagonalization of a parameter sweep.
struct SweepPoint {
  double param = 0.0;        // sweep parameter (inter-well half-separation d)
  Eigen::VectorXd energies;  // ascending, lowest n_keep levels
  Eigen::MatrixXd vectors;   // basis_dim x n_keep, orthonormal columns
};

// A level followed through the sweep by eigenvector continuity.
struct Track {
  std::string label;
  std::vector<int> level;          // sorted level index per sweep point
  std::vector<double> energy;      // tracked energy per sweep point
  std::vector<double> continuity;  // |<v_prev|v_here>| per step (first = 1)
  std::vector<char> ok;            // 0 where continuity fell below the floor
};

// Narrow gap minimum where two levels exchange character.
struct CrossingEvent {
  int track = -1;             // index into TrackedSweep::tracks
  int point = -1;             // sweep-point index of the sampled minimum
  double param_center = 0.0;  // refined gap-minimum location
  double gap = 0.0;           // refined minimum gap (energy units)
  int partner_level = -1;     // sorted level index of the partner there
  bool resolved = true;       // false when the exchange test is inconclusive
};

struct TrackedSweep {
  std::vector<SweepPoint> points;  // in sweep order (largest d first)
  std::vector<Track> tracks;
  std::vector<CrossingEvent> crossings;  // all tracks, detection post-pass
};

using AssembleFn = std::function<Eigen::MatrixXd(double)>;

// Seed a track either by sorted level index at the first sweep point or by
// a reference vector in the fixed basis (matched by maximum overlap).
struct TrackSeed {
  std::string label;
  int level = -1;           // used when vector is empty
  Eigen::VectorXd vector;   // optional explicit seed state
};

// Diagonalize assemble(p) for each p in params (in the given order; pass the
// largest separation first so seeds are set in the decoupled regime), keep
// the lowest n_keep levels, follow seeds by maximum eigenvector overlap and
// run crossing detection on every track.  When the best overlap at a step
// falls below overlap_floor the tracks are reassigned jointly (greedy
// maximum-overlap matching over distinct levels) and the step is marked
// not-ok.  Diagonalizations run in parallel; tracking is a sequential pass.
TrackedSweep tracked_sweep(const AssembleFn& assemble,
                           const std::vector<double>& params, int n_keep,
                           const std::vector<TrackSeed>& seeds,
                           double overlap_floor = 0.8, int n_threads = 0);

// Gap minima of one track against its adjacent levels.  A minimum counts as
// an avoided crossing when the eigenvector exchange test confirms that the
// track and the partner swap character across the minimum; the gap and
// location are refined by a parabola through gap^2 (exact for a two-level
// linear crossing).  Inconclusive exchanges are reported with
// resolved = false.
std::vector<CrossingEvent> detect_avoided_crossings(const TrackedSweep& sweep,
                                                    int track_index);

}  // namespace ionwell
