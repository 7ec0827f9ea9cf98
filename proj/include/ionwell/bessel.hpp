#pragma once

#include <cmath>
#include <vector>

namespace ionwell {

// Spherical Bessel functions j_l(x), y_l(x) for 0 <= l <= l_max by upward
// recurrence (stable here: used only for x = beta/r >~ l in the short-range
// boundary region).
inline void sph_bessel_jy(int l_max, double x, std::vector<double>& j,
                          std::vector<double>& y) {
  j.assign(l_max + 1, 0.0);
  y.assign(l_max + 1, 0.0);
  double sx = std::sin(x), cx = std::cos(x);
  j[0] = sx / x;
  y[0] = -cx / x;
  if (l_max >= 1) {
    j[1] = sx / (x * x) - cx / x;
    y[1] = -cx / (x * x) - sx / x;
  }
  for (int l = 2; l <= l_max; ++l) {
    double f = (2.0 * l - 1.0) / x;
    j[l] = f * j[l - 1] - j[l - 2];
    y[l] = f * y[l - 1] - y[l - 2];
  }
}

}  // namespace ionwell
