#include "graphsurf/spectral.hpp"

#include <cmath>
#include <complex>

namespace graphsurf {

Eigen::MatrixXd periodic_spectral_derivative(int n, double period, int order) {
  using cplx = std::complex<double>;
  const double two_pi = 2.0 * M_PI;
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(n, n);
  // rows: synthesis at node j, columns: analysis of node l
  for (int m = 0; m < n; ++m) {
    int signed_m = (m <= n / 2) ? m : m - n;
    if (order == 1 && n % 2 == 0 && m == n / 2) signed_m = 0; // drop Nyquist for odd orders
    const double kappa = two_pi * signed_m / period;
    const cplx factor = (order == 1) ? cplx(0.0, kappa) : cplx(-kappa * kappa, 0.0);
    for (int j = 0; j < n; ++j) {
      const cplx synth = std::polar(1.0, two_pi * m * j / n);
      for (int l = 0; l < n; ++l) {
        const cplx anal = std::polar(1.0, -two_pi * m * l / n) / static_cast<double>(n);
        result(j, l) += synth * factor * anal;
      }
    }
  }
  return result.real();
}

Eigen::MatrixXd periodic_fd4_derivative(int n, double period, int order) {
  const double h = period / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (order == 1) {
    const double c1 = 2.0 / (3.0 * h), c2 = -1.0 / (12.0 * h);
    for (int j = 0; j < n; ++j) {
      d(j, (j + 1) % n) += c1;
      d(j, (j - 1 + n) % n) -= c1;
      d(j, (j + 2) % n) += c2;
      d(j, (j - 2 + n) % n) -= c2;
    }
  } else {
    const double h2 = h * h;
    const double c0 = -5.0 / (2.0 * h2), c1 = 4.0 / (3.0 * h2), c2 = -1.0 / (12.0 * h2);
    for (int j = 0; j < n; ++j) {
      d(j, j) += c0;
      d(j, (j + 1) % n) += c1;
      d(j, (j - 1 + n) % n) += c1;
      d(j, (j + 2) % n) += c2;
      d(j, (j - 2 + n) % n) += c2;
    }
  }
  return d;
}

std::vector<double> fejer1_weights(int n) {
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    const double theta = (2.0 * j + 1.0) * M_PI / (2.0 * n);
    double sum = 0.0;
    for (int m = 1; m <= n / 2; ++m) sum += std::cos(2.0 * m * theta) / (4.0 * m * m - 1.0);
    w[j] = (2.0 / n) * (1.0 - 2.0 * sum);
  }
  return w;
}

} // namespace graphsurf
