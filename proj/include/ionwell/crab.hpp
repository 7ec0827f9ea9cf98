#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "ionwell/dynamics.hpp"

namespace ionwell {

// --- Derivative-free simplex minimizer ----------------------------------
struct OptimTracePoint {
  int eval = 0;
  double value = 0.0;
  double best = 0.0;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int n_evals = 0;
};

// Standard Nelder-Mead (reflect/expand/contract/shrink).  simplex0 holds
// dim+1 vertex columns; stops on budget, vertex spread < x_tol, or value
// spread < f_tol.  Every evaluation is appended to *trace when given.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::MatrixXd& simplex0, int budget, double x_tol, double f_tol,
    std::vector<OptimTracePoint>* trace = nullptr);

// --- Randomized trigonometric pulse search -------------------------------
// Optimizes the windowed correction coefficients (a_k, b_k) of a Pulse
// around a fixed baseline.  Mode frequencies are re-randomized each
// restart: w_k = (2 pi k / T)(1 + r_k), r_k uniform in [-1/2, 1/2].
// The bare baseline is a vertex of every initial simplex, so the result
// never scores worse than the baseline.  Schedules whose sampled minimum
// separation drops below d_floor (or, when d_ceil > 0, whose maximum
// exceeds d_ceil) are rejected with a graded penalty without being
// propagated; if no evaluated schedule is ever feasible the search
// throws instead of returning a penalty score.
struct CrabOptions {
  int n_modes = 5;
  int budget = 2000;  // total objective evaluations across all restarts
  int restarts = 5;
  std::uint64_t seed = 1;
  double d_floor = 1.5;
  double d_ceil = 0.0;     // 0 disables; else keeps the search inside the
                           // range the objective's propagator covers
  double amp_scale = 0.0;  // 0 = auto: |d_start - d_hold| / 10
  int floor_samples = 800;
};

struct CrabResult {
  Pulse pulse;                        // best found (baseline if no gain)
  double objective = 0.0;             // value of `pulse`
  double baseline_objective = 0.0;
  int n_evals = 0;
  std::vector<OptimTracePoint> trace;
};

CrabResult crab_optimize(const Pulse& baseline,
                         const std::function<double(const Pulse&)>& objective,
                         const CrabOptions& opt);

}  // namespace ionwell
