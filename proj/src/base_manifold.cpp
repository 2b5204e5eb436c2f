#include "graphsurf/base_manifold.hpp"

#include <cmath>
#include <cstring>

#include "graphsurf/errors.hpp"
#include "graphsurf/spectral.hpp"

namespace graphsurf {

std::shared_ptr<const BaseManifold> BaseManifold::flat_torus(std::vector<double> periods,
                                                             std::vector<int> grid_shape) {
  if (periods.empty() || periods.size() != grid_shape.size())
    throw Error(ErrorKind::UnsupportedBase, "torus needs matching periods and grid_shape");
  for (double p : periods)
    if (!(p > 0.0)) throw Error(ErrorKind::UnsupportedBase, "torus periods must be positive");
  for (int s : grid_shape)
    if (s < 4 || s % 2 != 0)
      throw Error(ErrorKind::UnsupportedBase, "torus grid axes must be even and >= 4");

  auto base = std::shared_ptr<BaseManifold>(new BaseManifold());
  base->kind = BaseKind::FlatTorus;
  base->dim = static_cast<int>(periods.size());
  base->periods = std::move(periods);
  base->grid = Grid::product(std::move(grid_shape));
  for (int a = 0; a < base->dim; ++a) {
    const int n = base->grid.shape[a];
    const double h = base->periods[a] / n;
    base->grid.coords[a].resize(n);
    base->grid.axis_weights[a].assign(n, h); // periodic trapezoidal
    for (int j = 0; j < n; ++j) base->grid.coords[a][j] = j * h;
  }
  base->build_torus_tables();
  return base;
}

std::shared_ptr<const BaseManifold> BaseManifold::sphere(double radius, int n_theta, int n_phi) {
  if (!(radius > 0.0)) throw Error(ErrorKind::UnsupportedBase, "sphere radius must be positive");
  if (n_theta < 8 || n_phi < 8 || n_phi % 2 != 0)
    throw Error(ErrorKind::UnsupportedBase, "sphere grid needs n_theta >= 8 and even n_phi >= 8");

  auto base = std::shared_ptr<BaseManifold>(new BaseManifold());
  base->kind = BaseKind::Sphere;
  base->dim = 2;
  base->radius = radius;
  base->grid = Grid::product({n_theta, n_phi});

  // Half-cell offset in colatitude keeps the poles off the grid; the nodes are
  // exactly the Fejer nodes in cos(theta), so the matching weights integrate
  // band-limited integrands essentially exactly.
  const double h_theta = M_PI / n_theta;
  base->grid.coords[0].resize(n_theta);
  base->grid.axis_weights[0].resize(n_theta);
  const std::vector<double> fejer = fejer1_weights(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const double theta = (j + 0.5) * h_theta;
    base->grid.coords[0][j] = theta;
    base->grid.axis_weights[0][j] = fejer[j] / std::sin(theta);
  }
  const double h_phi = 2.0 * M_PI / n_phi;
  base->grid.coords[1].resize(n_phi);
  base->grid.axis_weights[1].assign(n_phi, h_phi);
  for (int k = 0; k < n_phi; ++k) base->grid.coords[1][k] = k * h_phi;

  base->build_sphere_tables();
  return base;
}

void BaseManifold::build_torus_tables() {
  const int n = dim, m = ambient_dim();
  const std::size_t np = grid.npoints;
  embed.assign(np * m, 0.0);
  tangent.assign(np * n * m, 0.0);
  second.assign(np * n * n * m, 0.0);
  normal.assign(np * m, 0.0);
  dnormal.assign(np * n * m, 0.0);
  g0.assign(np * n * n, 0.0);
  g0_inv.assign(np * n * n, 0.0);
  sqrt_det_g0.assign(np, 1.0);
  weingarten_op_norm = 0.0;

  std::vector<int> idx(n);
  for (std::size_t p = 0; p < np; ++p) {
    grid.unravel(p, idx.data());
    for (int a = 0; a < n; ++a) {
      embed[p * m + a] = grid.coords[a][idx[a]];
      tangent[(p * n + a) * m + a] = 1.0;
      g0[(p * n + a) * n + a] = 1.0;
      g0_inv[(p * n + a) * n + a] = 1.0;
    }
    normal[p * m + n] = 1.0; // cross-section direction
  }

  axis_ops.resize(n);
  for (int a = 0; a < n; ++a) {
    axis_ops[a].spectral_d1 = periodic_spectral_derivative(grid.shape[a], periods[a], 1);
    axis_ops[a].spectral_d2 = periodic_spectral_derivative(grid.shape[a], periods[a], 2);
    axis_ops[a].fd4_d1 = periodic_fd4_derivative(grid.shape[a], periods[a], 1);
    axis_ops[a].fd4_d2 = periodic_fd4_derivative(grid.shape[a], periods[a], 2);
  }
}

void BaseManifold::build_sphere_tables() {
  const int n = 2, m = 3;
  const std::size_t np = grid.npoints;
  const double R = radius;
  embed.assign(np * m, 0.0);
  tangent.assign(np * n * m, 0.0);
  second.assign(np * n * n * m, 0.0);
  normal.assign(np * m, 0.0);
  dnormal.assign(np * n * m, 0.0);
  g0.assign(np * n * n, 0.0);
  g0_inv.assign(np * n * n, 0.0);
  sqrt_det_g0.assign(np, 0.0);
  weingarten_op_norm = 1.0 / R;

  const int n_phi = grid.shape[1];
  for (int j = 0; j < grid.shape[0]; ++j) {
    const double theta = grid.coords[0][j];
    const double st = std::sin(theta), ct = std::cos(theta);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = grid.coords[1][k];
      const double cp = std::cos(phi), sp = std::sin(phi);
      const std::size_t p = static_cast<std::size_t>(j) * n_phi + k;
      const double nx = st * cp, ny = st * sp, nz = ct;

      embed[p * m + 0] = R * nx;
      embed[p * m + 1] = R * ny;
      embed[p * m + 2] = R * nz;
      normal[p * m + 0] = nx;
      normal[p * m + 1] = ny;
      normal[p * m + 2] = nz;

      // d_theta
      tangent[(p * n + 0) * m + 0] = R * ct * cp;
      tangent[(p * n + 0) * m + 1] = R * ct * sp;
      tangent[(p * n + 0) * m + 2] = -R * st;
      // d_phi
      tangent[(p * n + 1) * m + 0] = -R * st * sp;
      tangent[(p * n + 1) * m + 1] = R * st * cp;
      tangent[(p * n + 1) * m + 2] = 0.0;

      // second derivatives of the embedding
      double* s_tt = &second[((p * n + 0) * n + 0) * m];
      double* s_tp = &second[((p * n + 0) * n + 1) * m];
      double* s_pt = &second[((p * n + 1) * n + 0) * m];
      double* s_pp = &second[((p * n + 1) * n + 1) * m];
      s_tt[0] = -R * st * cp;
      s_tt[1] = -R * st * sp;
      s_tt[2] = -R * ct;
      s_tp[0] = -R * ct * sp;
      s_tp[1] = R * ct * cp;
      s_tp[2] = 0.0;
      std::memcpy(s_pt, s_tp, sizeof(double) * m);
      s_pp[0] = -R * st * cp;
      s_pp[1] = -R * st * sp;
      s_pp[2] = 0.0;

      // outward normal differentiates to tangent/R
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < m; ++c)
          dnormal[(p * n + a) * m + c] = tangent[(p * n + a) * m + c] / R;

      g0[(p * n + 0) * n + 0] = R * R;
      g0[(p * n + 1) * n + 1] = R * R * st * st;
      g0_inv[(p * n + 0) * n + 0] = 1.0 / (R * R);
      g0_inv[(p * n + 1) * n + 1] = 1.0 / (R * R * st * st);
      sqrt_det_g0[p] = R * R * st;
    }
  }

  axis_ops.resize(2);
  axis_ops[1].spectral_d1 = periodic_spectral_derivative(grid.shape[1], 2.0 * M_PI, 1);
  axis_ops[1].spectral_d2 = periodic_spectral_derivative(grid.shape[1], 2.0 * M_PI, 2);
}

double BaseManifold::ambient_distance(const double* p, const double* q) const {
  double s = 0.0;
  if (kind == BaseKind::FlatTorus) {
    for (int a = 0; a < dim; ++a) {
      double d = std::fabs(p[a] - q[a]);
      d = std::fmod(d, periods[a]);
      if (d > 0.5 * periods[a]) d = periods[a] - d;
      s += d * d;
    }
    const double dz = p[dim] - q[dim];
    s += dz * dz;
  } else {
    for (int c = 0; c < 3; ++c) {
      const double d = p[c] - q[c];
      s += d * d;
    }
  }
  return std::sqrt(s);
}

namespace {

// Apply a dense derivative matrix along `axis` of a row-major scalar array.
void apply_matrix_along_axis(const Grid& grid, const Eigen::MatrixXd& op, const double* in,
                             double* out, int axis) {
  const int n = grid.shape[axis];
  const std::size_t stride = grid.strides[axis];
  const std::size_t npts = grid.npoints;
  const std::size_t block = stride;                    // contiguous run per line step
  const std::size_t outer = npts / (block * static_cast<std::size_t>(n));
  std::vector<double> line(n), res(n);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base_off = o * block * n;
    for (std::size_t b = 0; b < block; ++b) {
      for (int j = 0; j < n; ++j) line[j] = in[base_off + b + j * stride];
      Eigen::Map<Eigen::VectorXd> lv(line.data(), n);
      Eigen::Map<Eigen::VectorXd> rv(res.data(), n);
      rv.noalias() = op * lv;
      for (int j = 0; j < n; ++j) out[base_off + b + j * stride] = res[j];
    }
  }
}

// Latitude derivative with 4th-order centered stencils. Lines are continued
// across the poles: row -1-t maps to row t on the meridian shifted by pi, with
// the sign `parity` of the chart component under that reflection.
void sphere_theta_derivative(const Grid& grid, const double* in, double* out, int order,
                             int parity) {
  const int nt = grid.shape[0], np = grid.shape[1];
  const double h = M_PI / nt;
  const double sgn = static_cast<double>(parity);
  auto value = [&](int j, int k) -> double {
    double s = 1.0;
    if (j < 0) {
      j = -1 - j;
      k = (k + np / 2) % np;
      s = sgn;
    } else if (j >= nt) {
      j = 2 * nt - 1 - j;
      k = (k + np / 2) % np;
      s = sgn;
    }
    return s * in[static_cast<std::size_t>(j) * np + k];
  };
  if (order == 1) {
    const double c1 = 2.0 / (3.0 * h), c2 = -1.0 / (12.0 * h);
    for (int j = 0; j < nt; ++j)
      for (int k = 0; k < np; ++k)
        out[static_cast<std::size_t>(j) * np + k] =
            c1 * (value(j + 1, k) - value(j - 1, k)) + c2 * (value(j + 2, k) - value(j - 2, k));
  } else {
    const double h2 = h * h;
    const double c0 = -5.0 / (2.0 * h2), c1 = 4.0 / (3.0 * h2), c2 = -1.0 / (12.0 * h2);
    for (int j = 0; j < nt; ++j)
      for (int k = 0; k < np; ++k)
        out[static_cast<std::size_t>(j) * np + k] =
            c0 * value(j, k) + c1 * (value(j + 1, k) + value(j - 1, k)) +
            c2 * (value(j + 2, k) + value(j - 2, k));
  }
}

} // namespace

void BaseManifold::axis_derivative(const double* in, double* out, int axis, int order,
                                   int theta_parity, DerivScheme scheme) const {
  if (kind == BaseKind::FlatTorus) {
    const AxisOperators& ops = axis_ops[axis];
    const Eigen::MatrixXd& op = (scheme == DerivScheme::Spectral)
                                    ? (order == 1 ? ops.spectral_d1 : ops.spectral_d2)
                                    : (order == 1 ? ops.fd4_d1 : ops.fd4_d2);
    apply_matrix_along_axis(grid, op, in, out, axis);
  } else {
    if (axis == 0) {
      sphere_theta_derivative(grid, in, out, order, theta_parity);
    } else {
      const AxisOperators& ops = axis_ops[1];
      apply_matrix_along_axis(grid, order == 1 ? ops.spectral_d1 : ops.spectral_d2, in, out, 1);
    }
  }
}

} // namespace graphsurf
