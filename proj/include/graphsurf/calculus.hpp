#ifndef GRAPHSURF_CALCULUS_HPP
#define GRAPHSURF_CALCULUS_HPP

#include <utility>

#include "graphsurf/tensor_field.hpp"

namespace graphsurf {

/// Covariant derivative of a covariant tensor field; the new derivative slot
/// comes first: (grad T)_{j i_1...i_m} = d_j T_{i...} - sum_s Gamma^k_{j i_s} T_{..k..}.
TensorField covariant_derivative(const TensorField& t);

/// Covariant Hessian and Laplace-Beltrami of a scalar field:
/// hess_ij = d_i d_j u - Gamma^k_{ij} d_k u, lap = g^{ij} hess_ij.
std::pair<TensorField, TensorField> hessian_and_laplacian(const TensorField& u);

/// k-fold covariant derivative, k in [1,4].
TensorField iterated_covariant_derivative(const TensorField& t, int k);

/// Quadrature integral of a scalar field against the area measure.
double integrate_dmu(const TensorField& u);

/// Volume of the hypersurface (integral of 1).
double surface_volume(const BundlePtr& bundle);

/// Residual of the identity relating the rough Laplacian of B to second
/// derivatives of H and cubic curvature terms; identically zero analytically.
TensorField simons_residual(const BundlePtr& bundle);

/// Max over the grid and index triples of |grad_i B_jk - grad_j B_ik|.
double codazzi_residual(const BundlePtr& bundle);

} // namespace graphsurf

#endif
