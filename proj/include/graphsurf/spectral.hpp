#ifndef GRAPHSURF_SPECTRAL_HPP
#define GRAPHSURF_SPECTRAL_HPP

#include <Eigen/Dense>

namespace graphsurf {

/// Dense trigonometric differentiation matrix of given order (1 or 2) for a
/// uniform periodic grid of n points covering [0, period). Assembled as
/// synthesis * diag((ik)^order) * analysis; exact for band-limited data.
/// The Nyquist mode is dropped for odd orders and kept for order 2.
Eigen::MatrixXd periodic_spectral_derivative(int n, double period, int order);

/// Dense 4th-order centered finite-difference derivative matrix (order 1 or 2)
/// on the same periodic grid.
Eigen::MatrixXd periodic_fd4_derivative(int n, double period, int order);

/// Fejer quadrature weights for nodes x_j = cos(theta_j),
/// theta_j = (2j+1)*pi/(2n). Sum to 2; exact for polynomials of degree < n.
std::vector<double> fejer1_weights(int n);

} // namespace graphsurf

#endif
