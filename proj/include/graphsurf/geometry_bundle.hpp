#ifndef GRAPHSURF_GEOMETRY_BUNDLE_HPP
#define GRAPHSURF_GEOMETRY_BUNDLE_HPP

#include <iosfwd>
#include <memory>
#include <vector>

#include "graphsurf/base_manifold.hpp"

namespace graphsurf {

/// Pointwise geometric data of a graph hypersurface sampled on the base grid.
/// Immutable after construction; christoffel() returns a copy with the
/// connection coefficients filled in.
struct GeometryBundle {
  BasePtr base;
  DerivScheme scheme = DerivScheme::Spectral;

  std::vector<double> g;          // npts * n * n, symmetric
  std::vector<double> g_inv;      // npts * n * n
  std::vector<double> sqrt_det_g; // npts
  std::vector<double> nu;         // npts * (n+1), unit
  std::vector<double> b;          // npts * n * n, symmetric
  std::vector<double> h;          // npts
  std::vector<double> gamma;      // npts * n * n * n, Gamma^i_{jk}, empty until filled
  std::vector<double> embedding;  // npts * (n+1)
  bool has_gamma = false;

  int dim() const { return base->dim; }
  std::size_t npoints() const { return base->npoints(); }

  const double* g_at(std::size_t p) const { return &g[p * dim() * dim()]; }
  const double* g_inv_at(std::size_t p) const { return &g_inv[p * dim() * dim()]; }
  const double* b_at(std::size_t p) const { return &b[p * dim() * dim()]; }
  const double* gamma_at(std::size_t p) const { return &gamma[p * dim() * dim() * dim()]; }
  const double* nu_at(std::size_t p) const { return &nu[p * (dim() + 1)]; }
  const double* embedding_at(std::size_t p) const { return &embedding[p * (dim() + 1)]; }
};

using BundlePtr = std::shared_ptr<const GeometryBundle>;

/// Per-point differential of the graph map Psi: M0 -> M and its n-volume
/// distortion factor.
struct JacobianData {
  BasePtr base;
  std::vector<double> dpsi; // npts * (n+1) * n, ambient columns dPsi(d_a)
  std::vector<double> jpsi; // npts
};

/// Flat debugging dump: grid index, embedding, g, B, H, sqrt(det g) per row.
void dump_csv(const GeometryBundle& bundle, std::ostream& os);

} // namespace graphsurf

#endif
