#include "ionwell/hermite.hpp"

#include <cmath>

#include "ionwell/constants.hpp"

namespace ionwell {

void ho_eigenfunctions_at(int n_max, double mt, double omega_t, double x,
                          double* out) {
  double x0 = 1.0 / std::sqrt(mt * omega_t);
  double xi = x / x0;
  double norm = 1.0 / std::sqrt(x0);
  double h0 = std::exp(-0.5 * xi * xi) / std::pow(consts::pi, 0.25);
  out[0] = norm * h0;
  if (n_max >= 1) out[1] = std::sqrt(2.0) * xi * out[0];
  for (int n = 1; n < n_max; ++n)
    out[n + 1] = std::sqrt(2.0 / (n + 1.0)) * xi * out[n] -
                 std::sqrt(n / (n + 1.0)) * out[n - 1];
}

Eigen::VectorXd ho_eigenfunctions_at(int n_max, double mt, double omega_t,
                                     double x) {
  Eigen::VectorXd h(n_max + 1);
  ho_eigenfunctions_at(n_max, mt, omega_t, x, h.data());
  return h;
}

std::vector<Eigen::MatrixXd> ho_moment_matrices(int n, double mt,
                                                double omega_t, int p_max) {
  int np = n + p_max;  // pad so truncated products stay exact
  double x0 = 1.0 / std::sqrt(mt * omega_t);
  Eigen::MatrixXd x_mat = Eigen::MatrixXd::Zero(np, np);
  for (int i = 0; i + 1 < np; ++i)
    x_mat(i, i + 1) = x_mat(i + 1, i) = x0 * std::sqrt((i + 1.0) / 2.0);

  std::vector<Eigen::MatrixXd> out;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(np, np);
  out.push_back(acc.topLeftCorner(n, n));
  for (int p = 1; p <= p_max; ++p) {
    acc = acc * x_mat;
    out.push_back(acc.topLeftCorner(n, n));
  }
  return out;
}

}  // namespace ionwell
