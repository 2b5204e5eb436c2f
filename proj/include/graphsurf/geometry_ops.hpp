#ifndef GRAPHSURF_GEOMETRY_OPS_HPP
#define GRAPHSURF_GEOMETRY_OPS_HPP

#include <utility>

#include "graphsurf/geometry_bundle.hpp"
#include "graphsurf/height_field.hpp"
#include "graphsurf/tensor_field.hpp"

namespace graphsurf {

/// Graph over the flat torus from the closed-form expressions
/// g = I + dpsi (x) dpsi, B = -Hess psi / sqrt(1+|dpsi|^2).
BundlePtr flat_graph_geometry(const HeightField& psi, DerivScheme scheme = DerivScheme::Spectral);

/// Graph over any base: embeds phi = x + psi nu0, differentiates on the grid
/// and assembles metric, normal, second fundamental form and mean curvature.
BundlePtr embedded_graph_geometry(const BasePtr& base, const HeightField& psi,
                                  DerivScheme scheme = DerivScheme::Spectral);

/// Copy of the bundle with Gamma^i_{jk} filled from grid derivatives of g.
BundlePtr christoffel(const BundlePtr& bundle);

/// embedded_graph_geometry followed by christoffel.
BundlePtr build_geometry(const BasePtr& base, const HeightField& psi,
                         DerivScheme scheme = DerivScheme::Spectral);

/// Gauss relation R_ijkl = B_ik B_jl - B_il B_jk as a rank-4 field.
TensorField riemann_from_b(const BundlePtr& bundle);

/// Differential of the graph map and its volume distortion J_Psi.
JacobianData graph_map_jacobian(const BasePtr& base, const HeightField& psi);

/// Signed distance (negative inside) and nearest-point projection of an
/// ambient point onto the base.
std::pair<double, std::vector<double>> tubular_projection(const BaseManifold& base,
                                                          const std::vector<double>& x);

/// The second fundamental form / mean curvature of a bundle as tensor fields.
TensorField b_field(const BundlePtr& bundle);
TensorField h_field(const BundlePtr& bundle);

} // namespace graphsurf

#endif
