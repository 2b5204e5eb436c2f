#ifndef GRAPHSURF_GRID_HPP
#define GRAPHSURF_GRID_HPP

#include <cstddef>
#include <vector>

namespace graphsurf {

/// Structured product grid over the parameter domain of a base manifold.
/// Row-major layout: the last axis varies fastest.
struct Grid {
  std::vector<int> shape;
  std::vector<std::size_t> strides;
  std::vector<std::vector<double>> coords;       // node coordinates per axis
  std::vector<std::vector<double>> axis_weights; // quadrature weights per axis
  std::size_t npoints = 0;

  int ndim() const { return static_cast<int>(shape.size()); }

  std::size_t flat_index(const int* idx) const {
    std::size_t f = 0;
    for (int a = 0; a < ndim(); ++a) f += static_cast<std::size_t>(idx[a]) * strides[a];
    return f;
  }

  void unravel(std::size_t flat, int* idx) const {
    for (int a = 0; a < ndim(); ++a) {
      idx[a] = static_cast<int>(flat / strides[a]);
      flat %= strides[a];
    }
  }

  /// Product of the per-axis quadrature weights at a flat index.
  double weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = ndim() - 1; a >= 0; --a) {
      const int i = static_cast<int>(flat % shape[a]);
      // walk indices from the fastest axis outward
      w *= axis_weights[a][i];
      flat /= shape[a];
    }
    return w;
  }

  static Grid product(std::vector<int> shape) {
    Grid g;
    g.shape = std::move(shape);
    const int nd = g.ndim();
    g.strides.assign(nd, 1);
    for (int a = nd - 2; a >= 0; --a)
      g.strides[a] = g.strides[a + 1] * static_cast<std::size_t>(g.shape[a + 1]);
    g.npoints = 1;
    for (int a = 0; a < nd; ++a) g.npoints *= static_cast<std::size_t>(g.shape[a]);
    g.coords.resize(nd);
    g.axis_weights.resize(nd);
    return g;
  }
};

} // namespace graphsurf

#endif
