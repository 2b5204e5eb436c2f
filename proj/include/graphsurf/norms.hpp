#ifndef GRAPHSURF_NORMS_HPP
#define GRAPHSURF_NORMS_HPP

#include <span>

#include "graphsurf/tensor_field.hpp"

namespace graphsurf {

/// (integral of |T|^p dmu)^(1/p) with the pointwise metric tensor norm;
/// p = infinity returns the grid sup (a lower bound of the continuum sup).
double lp_norm(const TensorField& t, double p);

/// Sum-of-terms Sobolev norm: sum_{j=0..k} lp_norm of the j-th covariant
/// derivative.
double wkp_norm(const TensorField& u, int k, double p);

/// Direct double-sum fractional seminorm with ambient chordal distances and
/// the diagonal excluded.
double gagliardo_seminorm(const TensorField& u, double s, double p);

enum class HolderComponents { Chart, Ambient };

struct HolderNorm {
  double norm;     // sup |T| + seminorm
  double seminorm; // max over grid pairs of sum_c |T_c(x)-T_c(y)| / |x-y|^alpha
};

/// Grid-pair Holder norm of a tensor field. Components are taken either in
/// the parameter chart (default) or projected to ambient canonical
/// coordinates through the tangent projection.
HolderNorm holder_norm(const TensorField& t, double alpha,
                       HolderComponents comps = HolderComponents::Chart);

/// Raw pair-sup kernel on an explicit point cloud with plain Euclidean
/// distances; the building block of holder_norm.
double pairwise_holder_seminorm(std::span<const double> points, int point_dim,
                                std::span<const double> values, std::size_t ncomp, double alpha);

/// Average of a scalar field against dmu.
double mean_dmu(const TensorField& u);

/// Tangent vectors of the surface (d_a phi) recovered from the bundle,
/// npts * n * (n+1), ambient components.
std::vector<double> surface_tangents(const GeometryBundle& bundle);

} // namespace graphsurf

#endif
