#ifndef GRAPHSURF_TESTS_ORACLES_HPP
#define GRAPHSURF_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "graphsurf/base_manifold.hpp"
#include "graphsurf/height_field.hpp"

// Test-local oracles, independent of the library's derivative machinery.

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

inline graphsurf::BasePtr torus2(int n, double period = 2.0 * kPi) {
  return graphsurf::BaseManifold::flat_torus({period, period}, {n, n});
}

inline graphsurf::BasePtr sphere(int nt = 64, int np = 128, double radius = 1.0) {
  return graphsurf::BaseManifold::sphere(radius, nt, np);
}

/// Constant height field on the sphere (band-0 spherical harmonic).
inline graphsurf::HeightField sphere_constant(const graphsurf::BasePtr& base, double value) {
  return graphsurf::HeightField::from_coeffs(base, {value * std::sqrt(4.0 * kPi)}, 0);
}

/// Plain 4th-order centered difference of samples on a periodic axis,
/// written directly from the stencil (no shared code with the library).
inline std::vector<double> fd4_periodic(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) {
    const double fp1 = f[(j + 1) % n], fm1 = f[(j - 1 + n) % n];
    const double fp2 = f[(j + 2) % n], fm2 = f[(j - 2 + n) % n];
    d[j] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
  }
  return d;
}

/// Trapezoidal quadrature of a smooth periodic function on [0, 2pi)^2.
inline double torus_quad(int n, const std::function<double(double, double)>& f) {
  const double h = 2.0 * kPi / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += f(i * h, j * h);
  return acc * h * h;
}

} // namespace oracles

#endif
