#include "graphsurf/calculus.hpp"

#include <cmath>

#include "graphsurf/errors.hpp"
#include "graphsurf/geometry_ops.hpp"

namespace graphsurf {

namespace {

void require_gamma(const GeometryBundle& bundle) {
  if (!bundle.has_gamma)
    throw Error(ErrorKind::IncompleteBundle, "bundle has no Christoffel symbols");
}

} // namespace

TensorField covariant_derivative(const TensorField& t) {
  const BundlePtr& bundle = t.bundle();
  require_gamma(*bundle);
  t.check_finite();

  const BaseManifold& base = *bundle->base;
  const int n = base.dim;
  const int rank = t.rank();
  const std::size_t np = t.npoints();
  const std::size_t ncomp = t.ncomp();

  TensorField out(bundle, rank + 1);
  // partial derivatives of every component
  std::vector<double> comp(np), deriv(np);
  for (std::size_t c = 0; c < ncomp; ++c) {
    for (std::size_t p = 0; p < np; ++p) comp[p] = t.value(p, c);
    const int parity = base.kind == BaseKind::Sphere ? t.theta_parity(c) : +1;
    for (int j = 0; j < n; ++j) {
      base.axis_derivative(comp.data(), deriv.data(), j, 1, parity, bundle->scheme);
      const std::size_t oc = static_cast<std::size_t>(j) * ncomp + c;
      for (std::size_t p = 0; p < np; ++p) out.value(p, oc) = deriv[p];
    }
  }
  if (rank == 0) return out;

  // connection corrections, one per covariant slot
  for (std::size_t p = 0; p < np; ++p) {
    const double* gam = bundle->gamma_at(p);
    for (std::size_t c = 0; c < ncomp; ++c) {
      const std::vector<int>& dg = t.comp_digits(c);
      for (int j = 0; j < n; ++j) {
        double corr = 0.0;
        std::size_t stride = ncomp / n; // stride of slot 0
        for (int s = 0; s < rank; ++s) {
          const std::size_t base_c = c - static_cast<std::size_t>(dg[s]) * stride;
          for (int k = 0; k < n; ++k)
            corr += gam[(k * n + j) * n + dg[s]] * t.value(p, base_c + k * stride);
          stride /= n;
        }
        out.value(p, static_cast<std::size_t>(j) * ncomp + c) -= corr;
      }
    }
  }
  return out;
}

std::pair<TensorField, TensorField> hessian_and_laplacian(const TensorField& u) {
  if (u.rank() != 0)
    throw Error(ErrorKind::InvalidField, "hessian_and_laplacian expects a scalar field");
  const BundlePtr& bundle = u.bundle();
  require_gamma(*bundle);
  u.check_finite();

  const BaseManifold& base = *bundle->base;
  const int n = base.dim;
  const std::size_t np = u.npoints();

  std::vector<std::vector<double>> grad(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    base.axis_derivative(u.data().data(), grad[a].data(), a, 1, +1, bundle->scheme);

  TensorField hess(bundle, 2);
  std::vector<double> tmp(np);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        base.axis_derivative(u.data().data(), tmp.data(), i, 2, +1, bundle->scheme);
      } else {
        // d_i acting on the 1-form component d_j u (theta-odd when j is the
        // latitude axis)
        const int parity = (base.kind == BaseKind::Sphere && j == 0) ? -1 : +1;
        base.axis_derivative(grad[j].data(), tmp.data(), i, 1, parity, bundle->scheme);
      }
      const std::size_t oc = static_cast<std::size_t>(i) * n + j;
      for (std::size_t p = 0; p < np; ++p) hess.value(p, oc) = tmp[p];
    }
  }

  TensorField lap(bundle, 0);
  for (std::size_t p = 0; p < np; ++p) {
    const double* gam = bundle->gamma_at(p);
    const double* gi = bundle->g_inv_at(p);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double corr = 0.0;
        for (int k = 0; k < n; ++k) corr += gam[(k * n + i) * n + j] * grad[k][p];
        const std::size_t oc = static_cast<std::size_t>(i) * n + j;
        hess.value(p, oc) -= corr;
        acc += gi[i * n + j] * hess.value(p, oc);
      }
    }
    lap.value(p) = acc;
  }
  return {std::move(hess), std::move(lap)};
}

TensorField iterated_covariant_derivative(const TensorField& t, int k) {
  if (k < 1 || k > 4)
    throw Error(ErrorKind::UnsupportedOrder, "iterated derivative supports k in [1,4]");
  TensorField cur = covariant_derivative(t);
  for (int s = 1; s < k; ++s) cur = covariant_derivative(cur);
  cur.check_finite();
  return cur;
}

double integrate_dmu(const TensorField& u) {
  if (u.rank() != 0) throw Error(ErrorKind::InvalidField, "integrate_dmu expects a scalar field");
  const GeometryBundle& bundle = *u.bundle();
  const Grid& grid = bundle.base->grid;
  double sum = 0.0, comp = 0.0; // Kahan compensation
  for (std::size_t p = 0; p < grid.npoints; ++p) {
    const double term = u.value(p) * bundle.sqrt_det_g[p] * grid.weight(p);
    const double y = term - comp;
    const double t2 = sum + y;
    comp = (t2 - sum) - y;
    sum = t2;
  }
  return sum;
}

double surface_volume(const BundlePtr& bundle) {
  TensorField one(bundle, 0);
  for (std::size_t p = 0; p < one.npoints(); ++p) one.value(p) = 1.0;
  return integrate_dmu(one);
}

TensorField simons_residual(const BundlePtr& bundle) {
  require_gamma(*bundle);
  const int n = bundle->dim();
  const std::size_t np = bundle->npoints();

  const TensorField bt = b_field(bundle);
  const TensorField d2b = iterated_covariant_derivative(bt, 2); // (l,m,i,j)
  const auto [hess_h, lap_h] = hessian_and_laplacian(h_field(bundle));
  const std::vector<double> b_norm = bt.pointwise_norms();

  TensorField res(bundle, 2);
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  const std::size_t n3 = n2 * n;
  for (std::size_t p = 0; p < np; ++p) {
    const double* gi = bundle->g_inv_at(p);
    const double* bb = bundle->b_at(p);
    const double hh = bundle->h[p];
    const double b2 = b_norm[p] * b_norm[p];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double lap_b = 0.0;
        for (int l = 0; l < n; ++l)
          for (int mm = 0; mm < n; ++mm)
            lap_b += gi[l * n + mm] *
                     d2b.value(p, static_cast<std::size_t>(l) * n3 + mm * n2 + i * n + j);
        double bsq = 0.0; // (B g^{-1} B)_ij
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s) bsq += bb[i * n + l] * gi[l * n + s] * bb[s * n + j];
        res.value(p, static_cast<std::size_t>(i) * n + j) =
            lap_b - hess_h.value(p, static_cast<std::size_t>(i) * n + j) - hh * bsq +
            b2 * bb[i * n + j];
      }
    }
  }
  return res;
}

double codazzi_residual(const BundlePtr& bundle) {
  require_gamma(*bundle);
  const int n = bundle->dim();
  const TensorField db = covariant_derivative(b_field(bundle)); // (i,j,k)
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  double worst = 0.0;
  for (std::size_t p = 0; p < db.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double d = db.value(p, static_cast<std::size_t>(i) * n2 + j * n + k) -
                           db.value(p, static_cast<std::size_t>(j) * n2 + i * n + k);
          worst = std::max(worst, std::fabs(d));
        }
  return worst;
}

} // namespace graphsurf
