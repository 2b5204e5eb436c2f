#include "graphsurf/tensor_field.hpp"

#include <cmath>

#include "graphsurf/errors.hpp"

namespace graphsurf {

TensorField::TensorField(BundlePtr bundle, int rank) : bundle_(std::move(bundle)), rank_(rank) {
  if (rank < 0) throw Error(ErrorKind::InvalidField, "tensor rank must be >= 0");
  const int n = bundle_->dim();
  ncomp_ = 1;
  for (int s = 0; s < rank_; ++s) ncomp_ *= static_cast<std::size_t>(n);
  data_.assign(bundle_->npoints() * ncomp_, 0.0);
  digits_.resize(ncomp_);
  for (std::size_t c = 0; c < ncomp_; ++c) {
    digits_[c].assign(rank_, 0);
    std::size_t rem = c;
    for (int s = rank_ - 1; s >= 0; --s) {
      digits_[c][s] = static_cast<int>(rem % n);
      rem /= n;
    }
  }
}

TensorField TensorField::scalar(BundlePtr bundle, std::vector<double> values) {
  TensorField t(std::move(bundle), 0);
  if (values.size() != t.npoints())
    throw Error(ErrorKind::InvalidField, "value count does not match grid");
  t.data_ = std::move(values);
  return t;
}

TensorField TensorField::scalar(BundlePtr bundle, const std::function<double(const double*)>& f) {
  TensorField t(std::move(bundle), 0);
  const Grid& grid = t.bundle_->base->grid;
  const int nd = grid.ndim();
  std::vector<int> idx(nd);
  std::vector<double> x(nd);
  for (std::size_t p = 0; p < grid.npoints; ++p) {
    grid.unravel(p, idx.data());
    for (int a = 0; a < nd; ++a) x[a] = grid.coords[a][idx[a]];
    t.data_[p] = f(x.data());
  }
  return t;
}

int TensorField::theta_parity(std::size_t comp) const {
  int count = 0;
  for (int d : digits_[comp])
    if (d == 0) ++count;
  return (count % 2 == 0) ? +1 : -1;
}

std::vector<double> TensorField::pointwise_norms() const {
  const GeometryBundle& bundle = *bundle_;
  const int n = bundle.dim();
  const std::size_t np = npoints();
  std::vector<double> out(np);
  if (rank_ == 0) {
    for (std::size_t p = 0; p < np; ++p) out[p] = std::fabs(data_[p]);
    return out;
  }
  std::vector<double> raised(ncomp_), work(ncomp_);
  for (std::size_t p = 0; p < np; ++p) {
    const double* ginv = bundle.g_inv_at(p);
    const double* tp = &data_[p * ncomp_];
    for (std::size_t c = 0; c < ncomp_; ++c) raised[c] = tp[c];
    // raise one slot at a time
    std::size_t stride = ncomp_ / n; // stride of slot 0
    for (int s = 0; s < rank_; ++s) {
      for (std::size_t c = 0; c < ncomp_; ++c) {
        const std::size_t i = (c / stride) % n;
        const std::size_t rest = c - i * stride;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += ginv[i * n + k] * raised[rest + k * stride];
        work[c] = acc;
      }
      raised.swap(work);
      stride /= n;
    }
    double norm2 = 0.0;
    for (std::size_t c = 0; c < ncomp_; ++c) norm2 += raised[c] * tp[c];
    out[p] = std::sqrt(std::max(0.0, norm2));
  }
  return out;
}

void TensorField::check_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidField, "non-finite tensor entry");
}

} // namespace graphsurf
