#include "ionwell/grid.hpp"

#include <algorithm>

#include "ionwell/constants.hpp"
#include "ionwell/errors.hpp"

namespace ionwell {

MappedGrid MappedGrid::build(double x_min, double x_max, double c,
                             const std::function<double(double)>& potential,
                             double mt, double e_max, double beta,
                             double points_per_wavelength) {
  if (!(x_min >= 0) || !(x_max > x_min) || (c > 0 && x_min == 0))
    throw NumericalError("grid: need 0 <= x_min < x_max (x_min > 0 when mapped)");
  MappedGrid g;
  g.b = 1.0;
  g.c = c;

  // Scan for the largest local s-space wavevector at the top energy.
  double s_lo = g.s_of_x(x_min), s_hi = g.s_of_x(x_max);
  double ks_max = beta > 0 ? beta / (c + g.b * x_min * x_min) : 0.0;
  const int n_scan = 4000;
  for (int i = 0; i <= n_scan; ++i) {
    double s = s_lo + (s_hi - s_lo) * i / n_scan;
    double xx = g.x_of_s(s);
    double k2 = 2.0 * mt * (e_max - potential(xx));
    if (k2 > 0) ks_max = std::max(ks_max, std::sqrt(k2) * g.gp_of_x(xx));
  }
  if (ks_max <= 0) ks_max = 1.0;

  double h = 2.0 * consts::pi / (ks_max * points_per_wavelength);
  int n = int(std::ceil((s_hi - s_lo) / h)) + 1;
  if (n % 2 == 0) ++n;  // odd node count for composite Simpson
  if (n < 9) n = 9;
  g.h = (s_hi - s_lo) / (n - 1);
  g.s0 = s_lo;

  g.x.resize(n);
  g.gp.resize(n);
  g.corr.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = g.s0 + i * g.h;
    double xx = (i == 0) ? x_min : (i == n - 1 ? x_max : g.x_of_s(s));
    g.x[i] = xx;
    if (c == 0.0) {
      g.gp[i] = 1.0 / g.b;
      g.corr[i] = 0.0;
    } else {
      double den = c + g.b * xx * xx;
      g.gp[i] = xx * xx / den;
      double x4 = xx * xx * xx * xx;
      g.corr[i] = 3.0 * g.b * c * x4 / (den * den * den * den);
    }
    double simp = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    g.w[i] = simp * g.h / 3.0 * g.gp[i];
  }
  return g;
}

}  // namespace ionwell
