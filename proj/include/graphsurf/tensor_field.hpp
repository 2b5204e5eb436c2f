#ifndef GRAPHSURF_TENSOR_FIELD_HPP
#define GRAPHSURF_TENSOR_FIELD_HPP

#include <functional>
#include <vector>

#include "graphsurf/geometry_bundle.hpp"

namespace graphsurf {

/// A covariant rank-m tensor field sampled on the grid of a geometry bundle.
/// Storage is point-major with n^m components per point; component multi-index
/// (i_1,...,i_m) flattens base-n with i_1 most significant.
class TensorField {
public:
  TensorField(BundlePtr bundle, int rank);
  static TensorField scalar(BundlePtr bundle, std::vector<double> values);
  /// Sample f(parameter coordinates) on the grid.
  static TensorField scalar(BundlePtr bundle, const std::function<double(const double*)>& f);

  int rank() const { return rank_; }
  std::size_t ncomp() const { return ncomp_; }
  const BundlePtr& bundle() const { return bundle_; }
  std::size_t npoints() const { return bundle_->npoints(); }

  double value(std::size_t pt, std::size_t comp = 0) const { return data_[pt * ncomp_ + comp]; }
  double& value(std::size_t pt, std::size_t comp = 0) { return data_[pt * ncomp_ + comp]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Digits of a flat component index in base n (length = rank).
  const std::vector<int>& comp_digits(std::size_t comp) const { return digits_[comp]; }
  /// Sign a chart component picks up when continued across a sphere pole.
  int theta_parity(std::size_t comp) const;

  /// Pointwise tensor norm sqrt(g(T,T)) at every grid point.
  std::vector<double> pointwise_norms() const;

  void check_finite() const;

private:
  BundlePtr bundle_;
  int rank_ = 0;
  std::size_t ncomp_ = 1;
  std::vector<double> data_;
  std::vector<std::vector<int>> digits_;
};

} // namespace graphsurf

#endif
