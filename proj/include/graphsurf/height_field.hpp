#ifndef GRAPHSURF_HEIGHT_FIELD_HPP
#define GRAPHSURF_HEIGHT_FIELD_HPP

#include <span>
#include <string>
#include <vector>

#include "graphsurf/base_manifold.hpp"

namespace graphsurf {

/// Truncated spectral basis on a base grid: real Fourier modes with max-norm
/// band limit on the torus, real spherical harmonics up to degree `band` on
/// the sphere. Coefficient vectors index the elements in a fixed order.
class SpectralBasis {
public:
  SpectralBasis(const BaseManifold& base, int band_limit);

  int size() const { return static_cast<int>(decay_.size()); }
  int band_limit() const { return band_; }

  /// Sum of coeffs[i] * phi_i sampled on the grid.
  std::vector<double> synthesize(const BaseManifold& base, std::span<const double> coeffs) const;

  /// Per-element decay weight 1/(1 + |k|^2) (torus) or 1/(1 + l^2) (sphere).
  const std::vector<double>& decay_weights() const { return decay_; }

  std::string describe(int element) const;

  /// Index of the torus element cos<k,x> (trig=0) or sin<k,x> (trig=1);
  /// -1 if outside the band.
  int torus_element(const std::vector<int>& k, int trig) const;

private:
  BaseKind kind_;
  int band_ = 0;
  // torus: canonical wave vectors (constant first), each with cos/sin slots
  std::vector<std::vector<int>> waves_;
  std::vector<int> element_wave_;  // element -> wave index
  std::vector<int> element_trig_;  // 0 = cos, 1 = sin
  // sphere: (l, m, trig) per element
  std::vector<int> sph_l_, sph_m_, sph_trig_;
  std::vector<double> decay_;
};

/// A scalar height function on the base grid, stored both as grid samples and
/// as the spectral coefficients that synthesize them.
class HeightField {
public:
  static HeightField zero(BasePtr base);
  static HeightField from_coeffs(BasePtr base, std::vector<double> coeffs, int band_limit);
  /// Convenience: c_cos * cos<k,x> + c_sin * sin<k,x> on a torus base.
  static HeightField torus_mode(BasePtr base, std::vector<int> k, double c_cos, double c_sin);

  const BasePtr& base() const { return base_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int band_limit() const { return band_; }

  /// sup |psi| + sup |grad psi| over grid points, gradient in the base metric.
  double c1_norm() const;
  /// c1_norm plus the grid-pair Holder seminorm of the differential.
  double c1_alpha_norm(double alpha) const;

  HeightField scaled(double factor) const;

private:
  HeightField() = default;
  BasePtr base_;
  std::vector<double> values_;
  std::vector<double> coeffs_;
  int band_ = 0;
};

} // namespace graphsurf

#endif
