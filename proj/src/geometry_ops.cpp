#include "graphsurf/geometry_ops.hpp"

#include <cmath>
#include <cstring>
#include <ostream>

#include "graphsurf/errors.hpp"
#include "graphsurf/linalg.hpp"

namespace graphsurf {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidField, std::string(what) + " has NaN/Inf");
}

// First and (mirrored) second grid derivatives of a scalar sample array.
struct ScalarDerivatives {
  std::vector<std::vector<double>> first;                // [a][pt]
  std::vector<std::vector<std::vector<double>>> second;  // [a][b][pt], b >= a filled, mirrored
};

ScalarDerivatives differentiate_scalar(const BaseManifold& base, const std::vector<double>& values,
                                       DerivScheme scheme) {
  const int n = base.dim;
  const std::size_t np = base.npoints();
  ScalarDerivatives d;
  d.first.assign(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    base.axis_derivative(values.data(), d.first[a].data(), a, 1, +1, scheme);
  d.second.assign(n, std::vector<std::vector<double>>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      d.second[a][b].resize(np);
      if (a == b) {
        base.axis_derivative(values.data(), d.second[a][b].data(), a, 2, +1, scheme);
      } else {
        // mixed partial: d_a of d_b psi; d_b psi flips parity only if b is the
        // latitude axis, which cannot happen here since b > a >= 0
        const int parity = (base.kind == BaseKind::Sphere && b == 0) ? -1 : +1;
        base.axis_derivative(d.first[b].data(), d.second[a][b].data(), a, 1, parity, scheme);
      }
      d.second[b][a] = d.second[a][b];
    }
  }
  return d;
}

} // namespace

BundlePtr flat_graph_geometry(const HeightField& psi, DerivScheme scheme) {
  const BasePtr& base = psi.base();
  if (base->kind != BaseKind::FlatTorus)
    throw Error(ErrorKind::UnsupportedBase, "flat_graph_geometry requires a flat torus base");
  require_finite(psi.values(), "height field");

  const int n = base->dim, m = base->ambient_dim();
  const std::size_t np = base->npoints();
  const ScalarDerivatives d = differentiate_scalar(*base, psi.values(), scheme);

  auto out = std::make_shared<GeometryBundle>();
  out->base = base;
  out->scheme = scheme;
  out->g.resize(np * n * n);
  out->g_inv.resize(np * n * n);
  out->sqrt_det_g.resize(np);
  out->nu.resize(np * m);
  out->b.resize(np * n * n);
  out->h.resize(np);
  out->embedding.resize(np * m);

  for (std::size_t p = 0; p < np; ++p) {
    double grad2 = 0.0;
    for (int a = 0; a < n; ++a) grad2 += d.first[a][p] * d.first[a][p];
    const double w = 1.0 + grad2;
    const double root = std::sqrt(w);
    out->sqrt_det_g[p] = root;

    double* g = &out->g[p * n * n];
    double* gi = &out->g_inv[p * n * n];
    double* bb = &out->b[p * n * n];
    double hh = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        g[a * n + c] = (a == c ? 1.0 : 0.0) + d.first[a][p] * d.first[c][p];
        gi[a * n + c] = (a == c ? 1.0 : 0.0) - d.first[a][p] * d.first[c][p] / w;
        bb[a * n + c] = -d.second[a][c][p] / root;
      }
    }
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) hh += gi[a * n + c] * bb[a * n + c];
    out->h[p] = hh;

    for (int a = 0; a < n; ++a) out->nu[p * m + a] = -d.first[a][p] / root;
    out->nu[p * m + n] = 1.0 / root;
    std::memcpy(&out->embedding[p * m], &base->embed[p * m], sizeof(double) * m);
    out->embedding[p * m + n] = psi.values()[p];
  }
  return out;
}

BundlePtr embedded_graph_geometry(const BasePtr& base, const HeightField& psi,
                                  DerivScheme scheme) {
  if (psi.base().get() != base.get())
    throw Error(ErrorKind::UnsupportedBase, "height field lives on a different base");
  require_finite(psi.values(), "height field");
  const double eps = base->tubular_width();
  for (double v : psi.values())
    if (!(std::fabs(v) < eps))
      throw Error(ErrorKind::LeavesTubularNeighborhood,
                  "height field exceeds the tubular width");

  const int n = base->dim, m = base->ambient_dim();
  const std::size_t np = base->npoints();
  const ScalarDerivatives d = differentiate_scalar(*base, psi.values(), scheme);
  const bool sphere = base->kind == BaseKind::Sphere;
  const double inv_r = sphere ? 1.0 / base->radius : 0.0;

  auto out = std::make_shared<GeometryBundle>();
  out->base = base;
  out->scheme = scheme;
  out->g.resize(np * n * n);
  out->g_inv.resize(np * n * n);
  out->sqrt_det_g.resize(np);
  out->nu.resize(np * m);
  out->b.resize(np * n * n);
  out->h.resize(np);
  out->embedding.resize(np * m);

  std::vector<double> dphi(static_cast<std::size_t>(n) * m);
  std::vector<double> ddphi(static_cast<std::size_t>(n) * n * m);
  for (std::size_t p = 0; p < np; ++p) {
    const double psv = psi.values()[p];
    const double* nu0 = &base->normal[p * m];
    const double* dnu0 = &base->dnormal[p * n * m];

    double* phi = &out->embedding[p * m];
    for (int c = 0; c < m; ++c) phi[c] = base->embed[p * m + c] + psv * nu0[c];

    // first derivatives of the embedding
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < m; ++c)
        dphi[a * m + c] = base->tangent[(p * n + a) * m + c] + d.first[a][p] * nu0[c] +
                          psv * dnu0[a * m + c];

    // second derivatives; d2 nu0 = d2 x / R on the sphere, 0 on the torus
    for (int a = 0; a < n; ++a) {
      for (int c2 = a; c2 < n; ++c2) {
        const double* sec = &base->second[((p * n + a) * n + c2) * m];
        for (int c = 0; c < m; ++c) {
          double v = sec[c] + d.second[a][c2][p] * nu0[c] + d.first[a][p] * dnu0[c2 * m + c] +
                     d.first[c2][p] * dnu0[a * m + c];
          if (sphere) v += psv * sec[c] * inv_r;
          ddphi[(a * n + c2) * m + c] = v;
          ddphi[(c2 * n + a) * m + c] = v;
        }
      }
    }

    double* g = &out->g[p * n * n];
    for (int a = 0; a < n; ++a) {
      for (int c2 = a; c2 < n; ++c2) {
        double acc = 0.0;
        for (int c = 0; c < m; ++c) acc += dphi[a * m + c] * dphi[c2 * m + c];
        g[a * n + c2] = acc;
        g[c2 * n + a] = acc;
      }
    }
    const double det = det_n(n, g);
    if (!(det > 0.0)) throw Error(ErrorKind::DegenerateGraph, "metric determinant <= 0");
    out->sqrt_det_g[p] = std::sqrt(det);
    double* gi = &out->g_inv[p * n * n];
    invert_n(n, g, det, gi);

    // unit normal: project nu0 off the tangent space; the graph condition
    // keeps <nu, nu0> > 0, fixing the outward orientation
    double* nu = &out->nu[p * m];
    double proj[3 * 4]; // g^{ab} <nu0, dphi_a> stored per b
    for (int bx = 0; bx < n; ++bx) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        double dot = 0.0;
        for (int c = 0; c < m; ++c) dot += nu0[c] * dphi[a * m + c];
        acc += gi[a * n + bx] * dot;
      }
      proj[bx] = acc;
    }
    double norm2 = 0.0;
    for (int c = 0; c < m; ++c) {
      double v = nu0[c];
      for (int bx = 0; bx < n; ++bx) v -= proj[bx] * dphi[bx * m + c];
      nu[c] = v;
      norm2 += v * v;
    }
    if (!(norm2 > 1e-14)) throw Error(ErrorKind::DegenerateGraph, "normal projection degenerate");
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (int c = 0; c < m; ++c) nu[c] *= inv_norm;

    double* bb = &out->b[p * n * n];
    for (int a = 0; a < n; ++a) {
      for (int c2 = a; c2 < n; ++c2) {
        double acc = 0.0;
        for (int c = 0; c < m; ++c) acc += ddphi[(a * n + c2) * m + c] * nu[c];
        bb[a * n + c2] = -acc;
        bb[c2 * n + a] = -acc;
      }
    }
    double hh = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c2 = 0; c2 < n; ++c2) hh += gi[a * n + c2] * bb[a * n + c2];
    out->h[p] = hh;
  }
  return out;
}

BundlePtr christoffel(const BundlePtr& bundle) {
  const BaseManifold& base = *bundle->base;
  const int n = base.dim;
  const std::size_t np = base.npoints();

  // grid derivatives of every metric component
  std::vector<std::vector<double>> dg(static_cast<std::size_t>(n) * n * n);
  std::vector<double> comp(np);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      for (std::size_t p = 0; p < np; ++p) comp[p] = bundle->g[p * n * n + j * n + k];
      int parity = 1;
      if (base.kind == BaseKind::Sphere) {
        int zeros = (j == 0 ? 1 : 0) + (k == 0 ? 1 : 0);
        parity = (zeros % 2 == 0) ? +1 : -1;
      }
      for (int l = 0; l < n; ++l) {
        std::vector<double>& slot = dg[(static_cast<std::size_t>(l) * n + j) * n + k];
        slot.resize(np);
        base.axis_derivative(comp.data(), slot.data(), l, 1, parity, bundle->scheme);
        dg[(static_cast<std::size_t>(l) * n + k) * n + j] = slot;
      }
    }
  }

  auto out = std::make_shared<GeometryBundle>(*bundle);
  out->gamma.assign(np * n * n * n, 0.0);
  out->has_gamma = true;
  for (std::size_t p = 0; p < np; ++p) {
    const double* gi = &bundle->g_inv[p * n * n];
    double* gam = &out->gamma[p * n * n * n];
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            const double term = dg[(static_cast<std::size_t>(j) * n + k) * n + l][p] +
                                dg[(static_cast<std::size_t>(k) * n + j) * n + l][p] -
                                dg[(static_cast<std::size_t>(l) * n + j) * n + k][p];
            acc += gi[i * n + l] * term;
          }
          gam[(i * n + j) * n + k] = 0.5 * acc;
          gam[(i * n + k) * n + j] = 0.5 * acc;
        }
      }
    }
  }
  return out;
}

BundlePtr build_geometry(const BasePtr& base, const HeightField& psi, DerivScheme scheme) {
  return christoffel(embedded_graph_geometry(base, psi, scheme));
}

TensorField riemann_from_b(const BundlePtr& bundle) {
  const int n = bundle->dim();
  TensorField r(bundle, 4);
  const std::size_t np = bundle->npoints();
  for (std::size_t p = 0; p < np; ++p) {
    const double* bb = bundle->b_at(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            r.value(p, ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l) =
                bb[i * n + k] * bb[j * n + l] - bb[i * n + l] * bb[j * n + k];
  }
  return r;
}

JacobianData graph_map_jacobian(const BasePtr& base, const HeightField& psi) {
  if (psi.base().get() != base.get())
    throw Error(ErrorKind::UnsupportedBase, "height field lives on a different base");
  const double eps = base->tubular_width();
  for (double v : psi.values())
    if (!(std::fabs(v) < eps))
      throw Error(ErrorKind::LeavesTubularNeighborhood,
                  "height field exceeds the tubular width");

  const int n = base->dim, m = base->ambient_dim();
  const std::size_t np = base->npoints();
  JacobianData out;
  out.base = base;
  out.dpsi.resize(np * m * n);
  out.jpsi.resize(np);

  std::vector<std::vector<double>> grad(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    base->axis_derivative(psi.values().data(), grad[a].data(), a, 1, +1, DerivScheme::Spectral);

  std::vector<double> gm(static_cast<std::size_t>(n) * n);
  for (std::size_t p = 0; p < np; ++p) {
    const double psv = psi.values()[p];
    const double* nu0 = &base->normal[p * m];
    // dPsi(d_a) = d_a x + (d_a psi) nu0 + psi d_a nu0
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < m; ++c)
        out.dpsi[(p * m + c) * n + a] = base->tangent[(p * n + a) * m + c] +
                                        grad[a][p] * nu0[c] +
                                        psv * base->dnormal[(p * n + a) * m + c];
    for (int a = 0; a < n; ++a) {
      for (int c2 = a; c2 < n; ++c2) {
        double acc = 0.0;
        for (int c = 0; c < m; ++c)
          acc += out.dpsi[(p * m + c) * n + a] * out.dpsi[(p * m + c) * n + c2];
        gm[a * n + c2] = acc;
        gm[c2 * n + a] = acc;
      }
    }
    const double det = det_n(n, gm.data());
    if (!(det > 0.0)) throw Error(ErrorKind::DegenerateGraph, "graph map degenerate");
    out.jpsi[p] = std::sqrt(det) / base->sqrt_det_g0[p];
  }
  return out;
}

std::pair<double, std::vector<double>> tubular_projection(const BaseManifold& base,
                                                          const std::vector<double>& x) {
  const int m = base.ambient_dim();
  if (static_cast<int>(x.size()) != m)
    throw Error(ErrorKind::ProjectionUndefined, "ambient point has wrong dimension");
  std::vector<double> foot(m, 0.0);
  if (base.kind == BaseKind::FlatTorus) {
    for (int a = 0; a < base.dim; ++a) {
      double v = std::fmod(x[a], base.periods[a]);
      if (v < 0.0) v += base.periods[a];
      foot[a] = v;
    }
    foot[base.dim] = 0.0;
    return {x[base.dim], foot};
  }
  double r2 = 0.0;
  for (int c = 0; c < m; ++c) r2 += x[c] * x[c];
  const double r = std::sqrt(r2);
  if (r < 1e-12 * base.radius)
    throw Error(ErrorKind::ProjectionUndefined, "projection undefined at the sphere center");
  for (int c = 0; c < m; ++c) foot[c] = base.radius * x[c] / r;
  return {r - base.radius, foot};
}

TensorField b_field(const BundlePtr& bundle) {
  TensorField t(bundle, 2);
  const int n = bundle->dim();
  const std::size_t np = bundle->npoints();
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t c = 0; c < t.ncomp(); ++c) t.value(p, c) = bundle->b[p * n * n + c];
  return t;
}

TensorField h_field(const BundlePtr& bundle) {
  TensorField t(bundle, 0);
  for (std::size_t p = 0; p < bundle->npoints(); ++p) t.value(p) = bundle->h[p];
  return t;
}

void dump_csv(const GeometryBundle& bundle, std::ostream& os) {
  const int n = bundle.dim(), m = n + 1;
  os << "index";
  for (int c = 0; c < m; ++c) os << ",x" << c;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) os << ",g" << a << c;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) os << ",b" << a << c;
  os << ",h,sqrt_det_g\n";
  char buf[64];
  for (std::size_t p = 0; p < bundle.npoints(); ++p) {
    os << p;
    auto emit = [&](double v) {
      std::snprintf(buf, sizeof(buf), ",%.12g", v);
      os << buf;
    };
    for (int c = 0; c < m; ++c) emit(bundle.embedding[p * m + c]);
    for (std::size_t c = 0; c < static_cast<std::size_t>(n) * n; ++c) emit(bundle.g[p * n * n + c]);
    for (std::size_t c = 0; c < static_cast<std::size_t>(n) * n; ++c) emit(bundle.b[p * n * n + c]);
    emit(bundle.h[p]);
    emit(bundle.sqrt_det_g[p]);
    os << "\n";
  }
}

} // namespace graphsurf
