#include "ionwell/qdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ionwell/bessel.hpp"
#include "ionwell/constants.hpp"
#include "ionwell/errors.hpp"

namespace ionwell {

namespace {

std::function<double(double)> potential_of(const QdtProblem& p) {
  double mt = p.mt, w2 = p.omega_t * p.omega_t;
  double lc = p.l > 0 ? p.l * (p.l + 1.0) / (2.0 * mt) : 0.0;
  bool c4 = p.with_c4;
  return [mt, w2, lc, c4](double x) {
    double u = 0.5 * mt * w2 * x * x;
    if (lc > 0) u += lc / (x * x);
    if (c4) u -= 1.0 / (x * x * x * x);
    return u;
  };
}

// Boundary start values at the first two grid nodes.
NumerovSolver::StartFn start_of(const QdtProblem& p, const MappedGrid& g) {
  double x0 = g.x[0], x1 = g.x[1];
  if (p.with_c4) {
    if (p.l < 0) {
      // psi ~ x sin(beta/x + phi), the zero-energy short-range solution
      double beta = p.beta, phi = p.phi;
      double v0 = x0 * std::sin(beta / x0 + phi);
      double v1 = x1 * std::sin(beta / x1 + phi);
      return [v0, v1](double) { return std::make_pair(v0, v1); };
    }
    // psi ~ cos(d) j_l(beta/r) + sin(d) y_l(beta/r), d = -phi - l pi/2;
    // pole-free for every phase (pure y_l at d = pi/2)
    double delta = -p.phi - p.l * consts::pi / 2.0;
    double cd = std::cos(delta), sd = std::sin(delta);
    std::vector<double> j, y;
    sph_bessel_jy(p.l, p.beta / x0, j, y);
    double v0 = cd * j[p.l] + sd * y[p.l];
    sph_bessel_jy(p.l, p.beta / x1, j, y);
    double v1 = cd * j[p.l] + sd * y[p.l];
    return [v0, v1](double) { return std::make_pair(v0, v1); };
  }
  // regular problems (interaction removed): Taylor start at the origin
  double mt = p.mt, w2 = p.omega_t * p.omega_t;
  if (p.l < 0 && p.parity > 0) {
    return [x1, mt, w2](double e) {
      double q = -2.0 * mt * e;
      double h2 = x1 * x1;
      return std::make_pair(
          1.0, 1.0 + 0.5 * q * h2 +
                   (q * q + 2.0 * mt * mt * w2) * h2 * h2 / 24.0);
    };
  }
  int leff = p.l < 0 ? 1 : p.l;  // odd 1D behaves like l = 1
  return [x0, x1, mt, leff](double e) {
    double cc = -2.0 * mt * e / (4.0 * leff + 6.0);
    auto f = [&](double x) {
      return std::pow(x, leff + 1.0) * (1.0 + cc * x * x);
    };
    return std::make_pair(f(x0), f(x1));
  };
}

}  // namespace

std::shared_ptr<const MappedGrid> make_qdt_grid(const QdtProblem& p,
                                                int n_states, double e_floor,
                                                const GridSpec& gs) {
  // top-of-basis energy estimate: sector levels are spaced ~ 2 w~
  double e_top = p.omega_t * (2.0 * (n_states + 2) + 6.0) + std::abs(p.l) * p.omega_t;
  double e_ref = std::max(e_top, std::abs(e_floor));
  auto pot = potential_of(p);

  double x_min, x_max, c;
  if (p.with_c4) {
    c = p.beta;
    if (gs.x_min_override > 0) {
      x_min = gs.x_min_override;
      if (1.0 / std::pow(x_min, 4) < gs.dominance_factor * e_ref)
        throw NumericalError(
            "grid: x_min violates interaction-dominance requirement");
    } else {
      x_min = std::pow(gs.dominance_factor * e_ref, -0.25);
    }
  } else {
    c = 0.0;
    x_min = 0.0;
    if (p.l > 0) {
      // keep the centrifugal term representable at the first node
      double k_max = std::sqrt(2.0 * p.mt * e_top);
      double h_est = 2.0 * consts::pi / (k_max * gs.points_per_wavelength);
      x_min = 4.0 * h_est * std::sqrt(p.l * (p.l + 1.0) + 1.0);
    }
  }
  // confinement: (1/2) mt w^2 x_max^2 >= e_top + margin * w~
  x_max = gs.x_max_override > 0
              ? gs.x_max_override
              : std::sqrt(2.0 * (e_top + gs.x_max_margin_omega * p.omega_t) /
                          (p.mt * p.omega_t * p.omega_t));
  auto g = MappedGrid::build(x_min, x_max, c, pot, p.mt, e_top,
                             p.with_c4 ? p.beta : 0.0,
                             gs.points_per_wavelength);
  return std::make_shared<const MappedGrid>(std::move(g));
}

RadialBasis solve_sector(const QdtProblem& p, int n_states, double e_floor,
                         std::shared_ptr<const MappedGrid> grid) {
  auto pot = potential_of(p);
  std::vector<double> u(grid->n());
  for (int i = 0; i < grid->n(); ++i) u[i] = pot(grid->x[i]);
  // regular problems never look below the potential minimum
  if (!p.with_c4) e_floor = std::max(e_floor, 0.0);

  NumerovSolver solver(grid, p.mt, std::move(u), start_of(p, *grid));
  auto evs = solver.eigenvalues(e_floor, n_states, 2.0 * p.omega_t);

  RadialBasis b;
  b.grid = grid;
  b.mass_factor = p.beta;
  b.energy = Eigen::Map<Eigen::VectorXd>(evs.data(), evs.size());
  b.psi.resize(int(evs.size()), grid->n());
  double norm_target = (p.l < 0) ? 0.5 : 1.0;
  for (int k = 0; k < int(evs.size()); ++k)
    b.psi.row(k) = solver.eigenfunction(evs[k], norm_target).transpose();
  b.tag.assign(evs.size(), p.l < 0 ? p.parity : p.l);
  return b;
}

RadialBasis solve_sector(const QdtProblem& p, int n_states, double e_floor,
                         const GridSpec& gs) {
  return solve_sector(p, n_states, e_floor, make_qdt_grid(p, n_states, e_floor, gs));
}

RadialBasis merge_bases(const std::vector<RadialBasis>& parts) {
  if (parts.empty()) throw NumericalError("merge_bases: nothing to merge");
  int total = 0;
  for (const auto& p : parts) {
    if (p.grid.get() != parts[0].grid.get())
      throw NumericalError("merge_bases: sectors must share one grid");
    total += p.size();
  }
  struct Ref { double e; int part, row; };
  std::vector<Ref> refs;
  refs.reserve(total);
  for (int ip = 0; ip < int(parts.size()); ++ip)
    for (int k = 0; k < parts[ip].size(); ++k)
      refs.push_back({parts[ip].energy[k], ip, k});
  std::stable_sort(refs.begin(), refs.end(),
                   [](const Ref& a, const Ref& b) { return a.e < b.e; });

  RadialBasis out;
  out.grid = parts[0].grid;
  out.mass_factor = parts[0].mass_factor;
  out.energy.resize(total);
  out.psi.resize(total, parts[0].grid->n());
  out.tag.resize(total);
  for (int k = 0; k < total; ++k) {
    const auto& r = refs[k];
    out.energy[k] = r.e;
    out.psi.row(k) = parts[r.part].psi.row(r.row);
    out.tag[k] = parts[r.part].tag[r.row];
  }
  return out;
}

Eigen::MatrixXd moment_matrix(const RadialBasis& b, int j) {
  const auto& g = *b.grid;
  Eigen::VectorXd wx(g.n());
  for (int i = 0; i < g.n(); ++i) wx[i] = g.w[i] * std::pow(g.x[i], j);
  Eigen::MatrixXd m = b.psi * wx.asDiagonal() * b.psi.transpose();

  bool parity_basis =
      !b.tag.empty() &&
      std::all_of(b.tag.begin(), b.tag.end(),
                  [](int t) { return t == 1 || t == -1; });
  if (parity_basis) {
    // full-line extension: factor 2 when parity allows, else exact zero
    int sel = (j % 2 == 0) ? 1 : -1;
    for (int a = 0; a < b.size(); ++a)
      for (int c = 0; c < b.size(); ++c)
        m(a, c) = (b.tag[a] * b.tag[c] == sel) ? 2.0 * m(a, c) : 0.0;
  }
  return m;
}

Eigen::MatrixXd moment_matrix_boole(const RadialBasis& b, int j) {
  const auto& g = *b.grid;
  int n = g.n();
  // composite Boole weights on the uniform s grid; trailing remainder of
  // two intervals handled by Simpson
  Eigen::VectorXd wb = Eigen::VectorXd::Zero(n);
  int i = 0;
  static const double bw[5] = {7, 32, 12, 32, 7};
  while (i + 4 <= n - 1 - ((n - 1) % 4 == 2 ? 2 : 0)) {
    for (int k = 0; k < 5; ++k) wb[i + k] += bw[k] * 2.0 * g.h / 45.0;
    i += 4;
  }
  if (i < n - 1) {  // two leftover intervals
    wb[i] += g.h / 3.0;
    wb[i + 1] += 4.0 * g.h / 3.0;
    wb[i + 2] += g.h / 3.0;
  }
  Eigen::VectorXd wx(n);
  for (int k = 0; k < n; ++k) wx[k] = wb[k] * g.gp[k] * std::pow(g.x[k], j);
  Eigen::MatrixXd m = b.psi * wx.asDiagonal() * b.psi.transpose();
  bool parity_basis =
      !b.tag.empty() &&
      std::all_of(b.tag.begin(), b.tag.end(),
                  [](int t) { return t == 1 || t == -1; });
  if (parity_basis) {
    int sel = (j % 2 == 0) ? 1 : -1;
    for (int a = 0; a < b.size(); ++a)
      for (int c = 0; c < b.size(); ++c)
        m(a, c) = (b.tag[a] * b.tag[c] == sel) ? 2.0 * m(a, c) : 0.0;
  }
  return m;
}

Eigen::MatrixXd symmetrized_rp_matrix(const RadialBasis& b) {
  const auto& g = *b.grid;
  const int n = g.n(), ns = b.size();
  // d psi/dx = (d psi/ds)/x'(s), centered differences in s
  Eigen::MatrixXd dpsi(ns, n);
  for (int k = 0; k < ns; ++k) {
    for (int i = 1; i < n - 1; ++i)
      dpsi(k, i) = (b.psi(k, i + 1) - b.psi(k, i - 1)) / (2.0 * g.h) / g.gp[i];
    dpsi(k, 0) = (b.psi(k, 1) - b.psi(k, 0)) / g.h / g.gp[0];
    dpsi(k, n - 1) = (b.psi(k, n - 1) - b.psi(k, n - 2)) / g.h / g.gp[n - 1];
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.w.data(), n);
  Eigen::VectorXd wx(n);
  for (int i = 0; i < n; ++i) wx[i] = g.w[i] * g.x[i];
  // A = <psi_k | psi_k' + 2 x dpsi_k'> ; equal-parity rule on full line
  Eigen::MatrixXd m =
      b.psi * w.asDiagonal() * b.psi.transpose() +
      2.0 * (b.psi * wx.asDiagonal() * dpsi.transpose());
  bool parity_basis =
      !b.tag.empty() &&
      std::all_of(b.tag.begin(), b.tag.end(),
                  [](int t) { return t == 1 || t == -1; });
  if (parity_basis) {
    for (int a = 0; a < ns; ++a)
      for (int c = 0; c < ns; ++c)
        m(a, c) = (b.tag[a] == b.tag[c]) ? 2.0 * m(a, c) : 0.0;
  }
  return m;
}

}  // namespace ionwell
