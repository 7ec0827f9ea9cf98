#include "ionwell/crab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ionwell/constants.hpp"
#include "ionwell/errors.hpp"

namespace ionwell {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::MatrixXd& simplex0, int budget, double x_tol, double f_tol,
    std::vector<OptimTracePoint>* trace) {
  const int dim = int(simplex0.rows());
  if (simplex0.cols() != dim + 1)
    throw std::invalid_argument("nelder_mead: simplex needs dim+1 vertices");
  if (budget < dim + 2)
    throw std::invalid_argument("nelder_mead: budget below simplex size");

  int n_evals = 0;
  double best_seen = std::numeric_limits<double>::infinity();
  auto eval = [&](const Eigen::VectorXd& x) {
    double v = f(x);
    ++n_evals;
    best_seen = std::min(best_seen, v);
    if (trace) trace->push_back({n_evals, v, best_seen});
    return v;
  };

  Eigen::MatrixXd s = simplex0;
  Eigen::VectorXd fv(dim + 1);
  for (int i = 0; i <= dim && n_evals < budget; ++i) fv[i] = eval(s.col(i));

  std::vector<int> order(dim + 1);
  auto sort_simplex = [&]() {
    for (int i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    Eigen::MatrixXd s2(dim, dim + 1);
    Eigen::VectorXd f2(dim + 1);
    for (int i = 0; i <= dim; ++i) {
      s2.col(i) = s.col(order[i]);
      f2[i] = fv[order[i]];
    }
    s = s2;
    fv = f2;
  };

  sort_simplex();
  while (n_evals < budget) {
    double x_spread = 0.0;
    for (int i = 1; i <= dim; ++i)
      x_spread = std::max(x_spread, (s.col(i) - s.col(0)).norm());
    if (x_spread < x_tol || fv[dim] - fv[0] < f_tol) break;

    Eigen::VectorXd centroid = s.leftCols(dim).rowwise().mean();
    Eigen::VectorXd xr = centroid + (centroid - s.col(dim));
    double fr = eval(xr);
    if (fr < fv[0]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - s.col(dim));
      double fe = n_evals < budget ? eval(xe) : fr;
      if (fe < fr) {
        s.col(dim) = xe;
        fv[dim] = fe;
      } else {
        s.col(dim) = xr;
        fv[dim] = fr;
      }
    } else if (fr < fv[dim - 1]) {
      s.col(dim) = xr;
      fv[dim] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * ((fr < fv[dim] ? xr : s.col(dim)) -
                                             centroid);
      double fc = n_evals < budget ? eval(xc) : fr;
      if (fc < std::min(fr, fv[dim])) {
        s.col(dim) = xc;
        fv[dim] = fc;
      } else {
        for (int i = 1; i <= dim && n_evals < budget; ++i) {
          s.col(i) = s.col(0) + 0.5 * (s.col(i) - s.col(0));
          fv[i] = eval(s.col(i));
        }
      }
    }
    sort_simplex();
  }
  sort_simplex();
  return {s.col(0), fv[0], n_evals};
}

CrabResult crab_optimize(const Pulse& baseline,
                         const std::function<double(const Pulse&)>& objective,
                         const CrabOptions& opt) {
  if (opt.n_modes < 1 || opt.restarts < 1 || opt.budget < opt.restarts)
    throw std::invalid_argument("crab: bad budget/restart/mode counts");
  const int dim = 2 * opt.n_modes;
  const double t = baseline.t_total;
  double amp = opt.amp_scale > 0.0
                   ? opt.amp_scale
                   : std::abs(baseline.d_start - baseline.d_hold) / 10.0;

  bool any_feasible = false;
  auto guarded = [&](const Pulse& p) {
    double lo = p.min_separation(opt.floor_samples);
    if (lo < opt.d_floor) return 4.0 + (opt.d_floor - lo);
    if (opt.d_ceil > 0.0) {
      double hi = p.max_separation(opt.floor_samples);
      if (hi > opt.d_ceil) return 4.0 + (hi - opt.d_ceil);
    }
    any_feasible = true;
    return objective(p);
  };

  CrabResult res;
  res.pulse = baseline;
  res.baseline_objective = guarded(baseline);
  res.objective = res.baseline_objective;
  res.n_evals = 1;
  res.trace.push_back({1, res.baseline_objective, res.baseline_objective});

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);

  int remaining = opt.budget - 1;
  for (int rs = 0; rs < opt.restarts && remaining > 0; ++rs) {
    Eigen::VectorXd omega(opt.n_modes);
    for (int k = 0; k < opt.n_modes; ++k)
      omega[k] = 2.0 * consts::pi * (k + 1) / t * (1.0 + uni(rng));

    auto pulse_of = [&](const Eigen::VectorXd& x) {
      Pulse p = baseline;
      p.omega = omega;
      p.amp_sin = x.head(opt.n_modes);
      p.amp_cos = x.tail(opt.n_modes);
      return p;
    };
    auto g = [&](const Eigen::VectorXd& x) { return guarded(pulse_of(x)); };

    Eigen::MatrixXd simplex = Eigen::MatrixXd::Zero(dim, dim + 1);
    for (int i = 0; i < dim; ++i) simplex(i, i + 1) = amp;

    int rs_budget = remaining / (opt.restarts - rs);
    if (rs_budget < dim + 2) break;
    std::vector<OptimTracePoint> local;
    NelderMeadResult nm = nelder_mead(g, simplex, rs_budget, 1e-10, 1e-12,
                                      &local);
    remaining -= nm.n_evals;
    for (const auto& pt : local) {
      ++res.n_evals;
      double best = std::min(res.trace.back().best, pt.value);
      res.trace.push_back({res.n_evals, pt.value, best});
    }
    if (nm.value < res.objective) {
      res.objective = nm.value;
      res.pulse = pulse_of(nm.x);
    }
  }
  if (!any_feasible)
    throw NumericalError(
        "pulse search: every evaluated schedule, the baseline included, "
        "violates the separation bounds");
  return res;
}

}  // namespace ionwell
