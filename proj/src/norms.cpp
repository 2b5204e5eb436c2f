#include "graphsurf/norms.hpp"

#include <cmath>
#include <limits>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/parallel.hpp"

namespace graphsurf {

namespace {

constexpr std::size_t kPairSumCap = 1u << 16;

bool is_inf(double p) { return std::isinf(p); }

std::vector<double> measure_weights(const GeometryBundle& bundle) {
  const Grid& grid = bundle.base->grid;
  std::vector<double> mu(grid.npoints);
  for (std::size_t p = 0; p < grid.npoints; ++p) mu[p] = bundle.sqrt_det_g[p] * grid.weight(p);
  return mu;
}

double kahan_total(const std::vector<double>& terms) {
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double y = t - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

} // namespace

double lp_norm(const TensorField& t, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "lp_norm requires p >= 1");
  t.check_finite();
  const std::vector<double> norms = t.pointwise_norms();
  if (is_inf(p)) {
    double sup = 0.0;
    for (double v : norms) sup = std::max(sup, v);
    return sup;
  }
  const GeometryBundle& bundle = *t.bundle();
  const Grid& grid = bundle.base->grid;
  double sum = 0.0, comp = 0.0;
  for (std::size_t q = 0; q < grid.npoints; ++q) {
    const double term = std::pow(norms[q], p) * bundle.sqrt_det_g[q] * grid.weight(q);
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return std::pow(sum, 1.0 / p);
}

double wkp_norm(const TensorField& u, int k, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "wkp_norm requires p >= 1");
  if (k < 0 || k > 4) throw Error(ErrorKind::UnsupportedOrder, "wkp_norm supports k in [0,4]");
  double total = lp_norm(u, p);
  TensorField cur = u;
  for (int j = 1; j <= k; ++j) {
    cur = covariant_derivative(cur);
    total += lp_norm(cur, p);
  }
  return total;
}

double gagliardo_seminorm(const TensorField& u, double s, double p) {
  if (u.rank() != 0)
    throw Error(ErrorKind::InvalidField, "gagliardo_seminorm expects a scalar field");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::InvalidExponent, "s must lie in (0,1)");
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "p must be >= 1");
  const GeometryBundle& bundle = *u.bundle();
  const std::size_t np = u.npoints();
  if (np > kPairSumCap)
    throw Error(ErrorKind::GridTooLarge, "pair sum capped at 2^16 grid points");
  const BaseManifold& base = *bundle.base;
  const std::vector<double> mu = measure_weights(bundle);
  const double expo = base.dim + s * p;

  // row-block parallel pair sum; rows are reduced in a fixed order so the
  // result does not depend on the schedule
  std::vector<double> row_sums(np, 0.0);
  parallel_for(np, resolve_threads(0), [&](std::size_t a) {
    const double* xa = bundle.embedding_at(a);
    double acc = 0.0;
    for (std::size_t b = a + 1; b < np; ++b) {
      const double dist = base.ambient_distance(xa, bundle.embedding_at(b));
      const double diff = std::fabs(u.value(a) - u.value(b));
      if (diff == 0.0) continue;
      acc += std::pow(diff, p) / std::pow(dist, expo) * mu[a] * mu[b];
    }
    row_sums[a] = 2.0 * acc; // unordered pairs counted twice
  });
  return std::pow(kahan_total(row_sums), 1.0 / p);
}

std::vector<double> surface_tangents(const GeometryBundle& bundle) {
  const BaseManifold& base = *bundle.base;
  const int n = base.dim, m = base.ambient_dim();
  const std::size_t np = base.npoints();

  // recover psi = <phi - x0, nu0> and differentiate it on the grid
  std::vector<double> psi(np);
  for (std::size_t p = 0; p < np; ++p) {
    double acc = 0.0;
    for (int c = 0; c < m; ++c)
      acc += (bundle.embedding[p * m + c] - base.embed[p * m + c]) * base.normal[p * m + c];
    psi[p] = acc;
  }
  std::vector<std::vector<double>> grad(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    base.axis_derivative(psi.data(), grad[a].data(), a, 1, +1, bundle.scheme);

  std::vector<double> tang(np * n * m);
  for (std::size_t p = 0; p < np; ++p)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < m; ++c)
        tang[(p * n + a) * m + c] = base.tangent[(p * n + a) * m + c] +
                                    grad[a][p] * base.normal[p * m + c] +
                                    psi[p] * base.dnormal[(p * n + a) * m + c];
  return tang;
}

double pairwise_holder_seminorm(std::span<const double> points, int point_dim,
                                std::span<const double> values, std::size_t ncomp, double alpha) {
  const std::size_t np = points.size() / point_dim;
  double worst = 0.0;
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = a + 1; b < np; ++b) {
      double d2 = 0.0;
      for (int c = 0; c < point_dim; ++c) {
        const double d = points[a * point_dim + c] - points[b * point_dim + c];
        d2 += d * d;
      }
      if (d2 <= 0.0) continue;
      double diff = 0.0;
      for (std::size_t c = 0; c < ncomp; ++c)
        diff += std::fabs(values[a * ncomp + c] - values[b * ncomp + c]);
      worst = std::max(worst, diff / std::pow(std::sqrt(d2), alpha));
    }
  }
  return worst;
}

HolderNorm holder_norm(const TensorField& t, double alpha, HolderComponents comps) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::InvalidExponent, "alpha must lie in (0,1]");
  const GeometryBundle& bundle = *t.bundle();
  const BaseManifold& base = *bundle.base;
  const std::size_t np = t.npoints();
  if (np > kPairSumCap)
    throw Error(ErrorKind::GridTooLarge, "pair sum capped at 2^16 grid points");
  t.check_finite();

  const int n = base.dim, m = base.ambient_dim();
  // component table per point, either raw chart components or components of
  // the ambient extension T(pi ., ..., pi .) in the canonical basis
  std::size_t nc = t.ncomp();
  std::vector<double> table;
  if (comps == HolderComponents::Chart || t.rank() == 0) {
    table = t.data();
  } else {
    const std::vector<double> tang = surface_tangents(bundle);
    const int rank = t.rank();
    std::size_t nc_amb = 1;
    for (int s = 0; s < rank; ++s) nc_amb *= static_cast<std::size_t>(m);
    table.assign(np * nc_amb, 0.0);
    // Q_a^j = g^{ab} <d_b phi, e_j>: one raised tangent frame per point
    std::vector<double> q(static_cast<std::size_t>(n) * m);
    std::vector<int> amb_digits(rank);
    for (std::size_t p = 0; p < np; ++p) {
      const double* gi = bundle.g_inv_at(p);
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < m; ++j) {
          double acc = 0.0;
          for (int b = 0; b < n; ++b) acc += gi[a * n + b] * tang[(p * n + b) * m + j];
          q[a * m + j] = acc;
        }
      for (std::size_t ca = 0; ca < nc_amb; ++ca) {
        std::size_t rem = ca;
        for (int s = rank - 1; s >= 0; --s) {
          amb_digits[s] = static_cast<int>(rem % m);
          rem /= m;
        }
        double acc = 0.0;
        for (std::size_t cc = 0; cc < nc; ++cc) {
          const std::vector<int>& dg = t.comp_digits(cc);
          double w = t.value(p, cc);
          for (int s = 0; s < rank; ++s) w *= q[dg[s] * m + amb_digits[s]];
          acc += w;
        }
        table[p * nc_amb + ca] = acc;
      }
    }
    nc = nc_amb;
  }

  std::vector<double> row_sup(np, 0.0);
  parallel_for(np, resolve_threads(0), [&](std::size_t a) {
    const double* xa = bundle.embedding_at(a);
    double worst = 0.0;
    for (std::size_t b = a + 1; b < np; ++b) {
      const double dist = base.ambient_distance(xa, bundle.embedding_at(b));
      if (dist <= 0.0) continue;
      double diff = 0.0;
      for (std::size_t c = 0; c < nc; ++c)
        diff += std::fabs(table[a * nc + c] - table[b * nc + c]);
      worst = std::max(worst, diff / std::pow(dist, alpha));
    }
    row_sup[a] = worst;
  });
  double semi = 0.0;
  for (double w : row_sup) semi = std::max(semi, w);
  const double sup = lp_norm(t, std::numeric_limits<double>::infinity());
  return {sup + semi, semi};
}

double mean_dmu(const TensorField& u) {
  return integrate_dmu(u) / surface_volume(u.bundle());
}

} // namespace graphsurf
