#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace ionwell {

// Radial grid defined by the coordinate map  s(x) = b x - c/x  sampled
// uniformly in s.  With c ~ beta the short-range phase beta/x becomes a
// constant-frequency oscillation in s (the map equidistributes the r^-4
// oscillation), while for large x the grid tends to uniform spacing h/b.
// Solving in s requires the Liouville transform psi = sqrt(x'(s)) * phi;
// phi'' = [Q(x) x'(s)^2 + corr(s)] phi with corr = 3 b c x^4/(c + b x^2)^4.
// c = 0 reduces to a plain uniform grid.
struct MappedGrid {
  double b = 1.0, c = 0.0;
  double s0 = 0.0, h = 0.0;
  std::vector<double> x;     // node positions (monotone increasing)
  std::vector<double> gp;    // x'(s) at nodes
  std::vector<double> corr;  // Liouville correction at nodes
  std::vector<double> w;     // quadrature weights: integral f dx ~ sum w f(x)

  int n() const { return int(x.size()); }
  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }

  double s_of_x(double xx) const {
    return c == 0.0 ? b * xx : b * xx - c / xx;
  }
  double x_of_s(double s) const {
    if (c == 0.0) return s / b;
    return (s + std::sqrt(s * s + 4.0 * b * c)) / (2.0 * b);
  }
  double gp_of_x(double xx) const {
    return c == 0.0 ? 1.0 / b : xx * xx / (c + b * xx * xx);
  }

  // Builds the grid with a uniform s-step chosen so that the local
  // wavevector k_s = sqrt(max(0, 2 mt (e_max - U))) * x'(s) (and the
  // short-range value beta/(c + b x^2)) is resolved with at least
  // points_per_wavelength nodes per 2 pi.
  static MappedGrid build(double x_min, double x_max, double c,
                          const std::function<double(double)>& potential,
                          double mt, double e_max, double beta,
                          double points_per_wavelength);
};

}  // namespace ionwell
