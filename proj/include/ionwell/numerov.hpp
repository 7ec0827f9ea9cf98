#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ionwell/grid.hpp"

namespace ionwell {

// Renormalized Numerov integration of  -(1/(2 mt)) psi'' + U(x) psi = E psi
// on a MappedGrid.  Works on the transformed function phi = psi/sqrt(x'(s))
// with phi'' = Qs phi, Qs = 2 mt (U - E) x'^2 + corr.  Ratios of the
// "hatted" values F = (1 - h^2 Qs/12) phi are propagated outward from the
// boundary start values and inward from psi(x_max) = 0; eigenvalues are
// located by node-count bisection on the matching point (the outermost
// classical turning point) and polished on the log-derivative mismatch.
class NumerovSolver {
 public:
  // start(E) -> raw psi values at the first two nodes.
  using StartFn = std::function<std::pair<double, double>(double)>;

  NumerovSolver(std::shared_ptr<const MappedGrid> grid, double mt,
                std::vector<double> u_nodes, StartFn start);

  struct Shot {
    int nodes = 0;
    double mismatch = 0.0;
    int i_match = 0;
  };
  Shot shoot(double e) const;

  // Lowest n_states eigenvalues above e_floor, refined to |dE| < tol_abs.
  // scale_hint ~ expected level spacing (used for the upward scan).
  std::vector<double> eigenvalues(double e_floor, int n_states,
                                  double scale_hint,
                                  double tol_abs = 1e-10) const;

  // Normalized eigenfunction samples psi(x_i); norm_target is the value of
  // integral psi^2 dx over the grid (0.5 for half-line parity states).
  Eigen::VectorXd eigenfunction(double e, double norm_target = 1.0) const;

  const MappedGrid& grid() const { return *grid_; }
  double mt() const { return mt_; }

 private:
  void fill_t(double e, std::vector<double>& t) const;
  int match_index(const std::vector<double>& t) const;

  std::shared_ptr<const MappedGrid> grid_;
  double mt_;
  std::vector<double> u_;
  StartFn start_;
};

}  // namespace ionwell
