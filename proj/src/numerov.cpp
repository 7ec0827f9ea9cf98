#include "ionwell/numerov.hpp"

#include <algorithm>
#include <cmath>

#include "ionwell/errors.hpp"

namespace ionwell {

namespace {
inline double guard(double r) {
  // keep ratios away from exact zero so 1/r stays finite
  if (r == 0.0) return 1e-300;
  return r;
}
}  // namespace

NumerovSolver::NumerovSolver(std::shared_ptr<const MappedGrid> grid, double mt,
                             std::vector<double> u_nodes, StartFn start)
    : grid_(std::move(grid)), mt_(mt), u_(std::move(u_nodes)),
      start_(std::move(start)) {
  if (int(u_.size()) != grid_->n())
    throw NumericalError("numerov: potential samples do not match grid");
}

void NumerovSolver::fill_t(double e, std::vector<double>& t) const {
  const auto& g = *grid_;
  const int n = g.n();
  const double h2_12 = g.h * g.h / 12.0;
  t.resize(n);
  double tmax = 0.0;
  for (int i = 0; i < n; ++i) {
    double qs = 2.0 * mt_ * (u_[i] - e) * g.gp[i] * g.gp[i] + g.corr[i];
    t[i] = h2_12 * qs;
    tmax = std::max(tmax, std::abs(t[i]));
  }
  if (tmax > 0.5)
    throw NumericalError(
        "numerov: oscillation undersampled (|h^2 Q/12| = " +
        std::to_string(tmax) + " > 0.5); increase points_per_wavelength");
}

int NumerovSolver::match_index(const std::vector<double>& t) const {
  // outermost classically allowed node (Qs < 0), clipped to the interior
  int n = int(t.size());
  int m = 2;
  for (int i = n - 3; i >= 2; --i)
    if (t[i] < 0) { m = i; break; }
  return std::min(std::max(m, 2), n - 3);
}

NumerovSolver::Shot NumerovSolver::shoot(double e) const {
  const auto& g = *grid_;
  const int n = g.n();
  std::vector<double> t;
  fill_t(e, t);
  const int m = match_index(t);

  auto uu = [&](int i) { return (2.0 + 10.0 * t[i]) / (1.0 - t[i]); };

  auto [psi0, psi1] = start_(e);
  double f0 = (1.0 - t[0]) * psi0 / std::sqrt(g.gp[0]);
  double f1 = (1.0 - t[1]) * psi1 / std::sqrt(g.gp[1]);
  int nodes = 0;
  double r = guard(f1 / guard(f0));  // R_i = F_{i+1}/F_i
  if (r < 0) ++nodes;
  for (int i = 1; i < m; ++i) {
    r = guard(uu(i) - 1.0 / r);
    if (r < 0) ++nodes;
  }
  double r_out = r;  // R_{m-1} = F_m/F_{m-1}

  double v = 0.0;  // V_i = F_{i+1}/F_i, inward; F_{n-1} = 0
  for (int i = n - 2; i > m; --i) {
    if (v < 0) ++nodes;
    v = guard(1.0 / (uu(i) - v));
  }
  if (v < 0) ++nodes;

  Shot s;
  s.nodes = nodes;
  s.i_match = m;
  s.mismatch = v + 1.0 / r_out - uu(m);
  return s;
}

std::vector<double> NumerovSolver::eigenvalues(double e_floor, int n_states,
                                               double scale_hint,
                                               double tol_abs) const {
  // Sturm-style counter: split node count plus the seam-pivot sign of the
  // matching mismatch equals the number of eigenvalues below E.
  auto count = [this](double e, double* d = nullptr) {
    Shot s = shoot(e);
    if (d) *d = s.mismatch;
    return s.nodes + (s.mismatch > 0 ? 1 : 0);
  };

  std::vector<double> out;
  if (n_states <= 0) return out;
  double step = std::max(scale_hint, 1e-6);
  const int base = count(e_floor);

  double lo = e_floor;
  for (int k = 0; k < n_states; ++k) {
    const int want = base + k;  // count <= want below E_k, > want above
    double a = lo, b;
    double up = step;
    for (int iter = 0;; ++iter) {
      b = a + up;
      if (count(b) > want) break;
      a = b;
      up *= 2.0;
      if (iter > 200)
        throw NumericalError("numerov: eigenvalue scan failed to bracket");
    }
    // bisect on the counter; switch to Illinois on the mismatch once the
    // bracket straddles its zero crossing cleanly
    double da, db;
    int ca = count(a, &da), cb = count(b, &db);
    while (b - a > tol_abs) {
      if (ca == want && cb == want + 1 && da < 0 && db > 0) break;
      double mid = 0.5 * (a + b), dm;
      int cm = count(mid, &dm);
      if (cm > want) { b = mid; cb = cm; db = dm; }
      else           { a = mid; ca = cm; da = dm; }
    }
    double e_ref;
    if (b - a <= tol_abs) {
      e_ref = 0.5 * (a + b);
    } else {
      double x0 = a, x1 = b, f0 = da, f1 = db;
      e_ref = 0.5 * (a + b);
      for (int it = 0; it < 100; ++it) {
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > a && x2 < b)) x2 = 0.5 * (x0 + x1);
        double f2 = shoot(x2).mismatch;
        if (f2 == 0.0 || std::abs(x1 - x0) < tol_abs) { e_ref = x2; break; }
        if ((f2 > 0) == (f1 > 0)) {
          x1 = x2; f1 = f2;
          f0 *= 0.5;  // Illinois damping
        } else {
          x0 = x1; f0 = f1;
          x1 = x2; f1 = f2;
        }
        e_ref = x1;
      }
    }
    out.push_back(e_ref);
    lo = e_ref + std::max(tol_abs * 10.0, std::abs(e_ref) * 1e-14);
    step = scale_hint;
  }
  return out;
}

Eigen::VectorXd NumerovSolver::eigenfunction(double e,
                                             double norm_target) const {
  const auto& g = *grid_;
  const int n = g.n();
  std::vector<double> t;
  fill_t(e, t);
  const int m = match_index(t);
  auto uu = [&](int i) { return (2.0 + 10.0 * t[i]) / (1.0 - t[i]); };

  std::vector<double> rr(m), vv(n - 1);
  auto [psi0, psi1] = start_(e);
  double f0 = (1.0 - t[0]) * psi0 / std::sqrt(g.gp[0]);
  double f1 = (1.0 - t[1]) * psi1 / std::sqrt(g.gp[1]);
  rr[0] = guard(f1 / guard(f0));
  for (int i = 1; i < m; ++i) rr[i] = guard(uu(i) - 1.0 / rr[i - 1]);
  double v = 0.0;
  for (int i = n - 2; i > m; --i) {
    vv[i] = v;
    v = guard(1.0 / (uu(i) - v));
  }
  vv[m] = v;

  Eigen::VectorXd f(n);
  f[m] = 1.0;
  for (int i = m - 1; i >= 0; --i) f[i] = f[i + 1] / rr[i];
  for (int i = m; i < n - 1; ++i) f[i + 1] = vv[i] * f[i];
  f[n - 1] = 0.0;

  Eigen::VectorXd psi(n);
  double nrm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    psi[i] = f[i] / (1.0 - t[i]) * std::sqrt(g.gp[i]);
    if (!std::isfinite(psi[i]))
      throw NumericalError("numerov: NaN in eigenfunction at x = " +
                           std::to_string(g.x[i]));
    nrm2 += g.w[i] * psi[i] * psi[i];
  }
  psi *= std::sqrt(norm_target / nrm2);
  // sign convention: positive in the outer lobe (last antinode)
  if (psi[m] < 0) psi = -psi;
  return psi;
}

}  // namespace ionwell
