#include "graphsurf/laplace_solver.hpp"

#include <cmath>
#include <sstream>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/random_fields.hpp"
#include "graphsurf/tensor_field.hpp"

namespace graphsurf {

LaplaceSolver::LaplaceSolver(BundlePtr bundle) : bundle_(std::move(bundle)) {
  if (!bundle_->has_gamma)
    throw Error(ErrorKind::IncompleteBundle, "LaplaceSolver needs Christoffel symbols");
  const Grid& grid = bundle_->base->grid;
  mu_.resize(grid.npoints);
  for (std::size_t p = 0; p < grid.npoints; ++p)
    mu_[p] = bundle_->sqrt_det_g[p] * grid.weight(p);
  volume_ = 0.0;
  for (double m : mu_) volume_ += m;
  if (bundle_->base->kind == BaseKind::FlatTorus)
    build_torus_preconditioner();
  else
    build_sphere_preconditioner();
}

void LaplaceSolver::build_torus_preconditioner() {
  const BaseManifold& base = *bundle_->base;
  const int n = base.dim;
  fwd_.resize(n);
  inv_.resize(n);
  kappa_.resize(n);
  for (int a = 0; a < n; ++a) {
    const int na = base.grid.shape[a];
    fwd_[a].resize(na, na);
    inv_[a].resize(na, na);
    kappa_[a].resize(na);
    for (int m = 0; m < na; ++m) {
      const int sm = (m <= na / 2) ? m : m - na;
      kappa_[a][m] = 2.0 * M_PI * sm / base.periods[a];
      for (int j = 0; j < na; ++j) {
        fwd_[a](m, j) = std::polar(1.0 / na, -2.0 * M_PI * m * j / na);
        inv_[a](j, m) = std::polar(1.0, 2.0 * M_PI * m * j / na);
      }
    }
  }
}

void LaplaceSolver::build_sphere_preconditioner() {
  const BaseManifold& base = *bundle_->base;
  const int nt = base.grid.shape[0], np = base.grid.shape[1];
  const double h = M_PI / nt;
  const double r2 = base.radius * base.radius;

  mode_lu_.resize(np / 2 + 1);
  for (int m = 0; m <= np / 2; ++m) {
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(nt, nt);
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(nt, nt);
    auto add = [&](Eigen::MatrixXd& mat, int row, int col, double v) {
      double s = 1.0;
      if (col < 0) {
        col = -1 - col;
        s = parity;
      } else if (col >= nt) {
        col = 2 * nt - 1 - col;
        s = parity;
      }
      mat(row, col) += s * v;
    };
    const double c1 = 2.0 / (3.0 * h), c2 = -1.0 / (12.0 * h);
    const double e0 = -5.0 / (2.0 * h * h), e1 = 4.0 / (3.0 * h * h), e2 = -1.0 / (12.0 * h * h);
    for (int j = 0; j < nt; ++j) {
      add(d1, j, j + 1, c1);
      add(d1, j, j - 1, -c1);
      add(d1, j, j + 2, c2);
      add(d1, j, j - 2, -c2);
      add(d2, j, j, e0);
      add(d2, j, j + 1, e1);
      add(d2, j, j - 1, e1);
      add(d2, j, j + 2, e2);
      add(d2, j, j - 2, e2);
    }
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(nt, nt);
    for (int j = 0; j < nt; ++j) {
      const double theta = base.grid.coords[0][j];
      const double cot = std::cos(theta) / std::sin(theta);
      const double s2 = std::sin(theta) * std::sin(theta);
      op.row(j) = (d2.row(j) + cot * d1.row(j)) / r2;
      op(j, j) -= m * m / (s2 * r2);
    }
    Eigen::MatrixXd system = -op;
    if (m == 0) system += Eigen::MatrixXd::Identity(nt, nt); // shift off the constant kernel
    mode_lu_[m].compute(system);
  }

  phi_cos_.resize(np, np / 2 + 1);
  phi_sin_.resize(np, np / 2 + 1);
  for (int k = 0; k < np; ++k)
    for (int m = 0; m <= np / 2; ++m) {
      phi_cos_(k, m) = std::cos(m * base.grid.coords[1][k]);
      phi_sin_(k, m) = std::sin(m * base.grid.coords[1][k]);
    }
}

std::vector<double> LaplaceSolver::apply_neg_laplacian(const std::vector<double>& u) const {
  TensorField f = TensorField::scalar(bundle_, u);
  auto [hess, lap] = hessian_and_laplacian(f);
  std::vector<double> out = std::move(lap.data());
  for (double& v : out) v = -v;
  return out;
}

void LaplaceSolver::project_mean_zero(std::vector<double>& u) const {
  double mean = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) mean += u[p] * mu_[p];
  mean /= volume_;
  for (double& v : u) v -= mean;
}

double LaplaceSolver::dot_mu(const std::vector<double>& a, const std::vector<double>& b) const {
  double acc = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) acc += a[p] * b[p] * mu_[p];
  return acc;
}

std::vector<double> LaplaceSolver::precondition(const std::vector<double>& r) const {
  const BaseManifold& base = *bundle_->base;
  const std::size_t npts = base.npoints();
  if (base.kind == BaseKind::FlatTorus) {
    const int n = base.dim;
    std::vector<std::complex<double>> work(npts), tmp(npts);
    for (std::size_t p = 0; p < npts; ++p) work[p] = r[p];
    // forward transform along every axis
    for (int a = 0; a < n; ++a) {
      const int na = base.grid.shape[a];
      const std::size_t stride = base.grid.strides[a];
      const std::size_t outer = npts / (stride * static_cast<std::size_t>(na));
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t bb = 0; bb < stride; ++bb) {
          const std::size_t off = o * stride * na + bb;
          for (int j = 0; j < na; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (int l = 0; l < na; ++l) acc += fwd_[a](j, l) * work[off + l * stride];
            tmp[off + j * stride] = acc;
          }
        }
      work.swap(tmp);
    }
    // divide by |kappa|^2 (unit response on the constant mode)
    std::vector<int> idx(n);
    for (std::size_t p = 0; p < npts; ++p) {
      base.grid.unravel(p, idx.data());
      double k2 = 0.0;
      for (int a = 0; a < n; ++a) k2 += kappa_[a][idx[a]] * kappa_[a][idx[a]];
      work[p] /= (k2 > 0.0 ? k2 : 1.0);
    }
    for (int a = 0; a < n; ++a) {
      const int na = base.grid.shape[a];
      const std::size_t stride = base.grid.strides[a];
      const std::size_t outer = npts / (stride * static_cast<std::size_t>(na));
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t bb = 0; bb < stride; ++bb) {
          const std::size_t off = o * stride * na + bb;
          for (int j = 0; j < na; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (int l = 0; l < na; ++l) acc += inv_[a](j, l) * work[off + l * stride];
            tmp[off + j * stride] = acc;
          }
        }
      work.swap(tmp);
    }
    std::vector<double> out(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = work[p].real();
    return out;
  }

  // sphere: longitude transform, banded latitude solves per mode
  const int nt = base.grid.shape[0], np = base.grid.shape[1];
  const int nm = np / 2;
  Eigen::MatrixXd field(nt, np);
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < np; ++k) field(j, k) = r[static_cast<std::size_t>(j) * np + k];
  Eigen::MatrixXd ca = field * phi_cos_; // nt x (nm+1), unnormalized
  Eigen::MatrixXd sa = field * phi_sin_;
  Eigen::MatrixXd zc(nt, nm + 1), zs(nt, nm + 1);
  for (int m = 0; m <= nm; ++m) {
    const double scale = (m == 0 || m == nm) ? 1.0 / np : 2.0 / np;
    zc.col(m) = mode_lu_[m].solve((scale * ca.col(m)).eval());
    if (m > 0 && m < nm)
      zs.col(m) = mode_lu_[m].solve((scale * sa.col(m)).eval());
    else
      zs.col(m).setZero();
  }
  std::vector<double> out(npts, 0.0);
  Eigen::MatrixXd rec = zc * phi_cos_.transpose() + zs * phi_sin_.transpose();
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < np; ++k) out[static_cast<std::size_t>(j) * np + k] = rec(j, k);
  return out;
}

std::vector<double> LaplaceSolver::solve(const std::vector<double>& f, double rel_tol,
                                         int max_iter) const {
  // BiCGStab: the collocation operator is only approximately self-adjoint in
  // the quadrature inner product, which rules out plain CG near the poles.
  std::vector<double> rhs = f;
  project_mean_zero(rhs);
  const double rhs_norm = std::sqrt(dot_mu(rhs, rhs));
  const std::size_t npts = rhs.size();
  std::vector<double> x(npts, 0.0);
  if (rhs_norm == 0.0) return x;

  // The preconditioner inverts the unperturbed operator, so convergence is
  // fast, but the recursive residual loses contact with the true one within a
  // few steps (rho collapses). Restart from the true residual whenever the
  // scalars degrade, and accept a rounding-floor iterate once the true
  // residual sits far below what the eigenvalue computation needs.
  const double accept_tol = std::max(1e-7, 1e3 * rel_tol);
  std::vector<double> r = rhs;
  std::vector<double> r_hat = r, p(npts, 0.0), v(npts, 0.0);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double last_restart_res = std::numeric_limits<double>::infinity();

  // the collocation operator only preserves the discrete mean up to
  // quadrature aliasing, so work with the projected operator throughout
  auto apply_projected = [&](const std::vector<double>& u) {
    std::vector<double> out = apply_neg_laplacian(u);
    project_mean_zero(out);
    return out;
  };
  auto true_residual = [&]() {
    const std::vector<double> ax = apply_projected(x);
    std::vector<double> res(npts);
    for (std::size_t i = 0; i < npts; ++i) res[i] = rhs[i] - ax[i];
    return res;
  };

  int it = 0;
  while (it < max_iter) {
    bool degraded = false;
    for (; it < max_iter; ++it) {
      const double rho_new = dot_mu(r_hat, r);
      if (std::fabs(rho_new) < 1e-40 * dot_mu(r, r) + 1e-300) {
        degraded = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < npts; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      std::vector<double> y = precondition(p);
      project_mean_zero(y);
      v = apply_projected(y);
      const double rhat_v = dot_mu(r_hat, v);
      if (std::fabs(rhat_v) < 1e-300) {
        degraded = true;
        break;
      }
      alpha = rho / rhat_v;
      std::vector<double> s = r;
      for (std::size_t i = 0; i < npts; ++i) s[i] -= alpha * v[i];
      if (std::sqrt(dot_mu(s, s)) <= rel_tol * rhs_norm) {
        for (std::size_t i = 0; i < npts; ++i) x[i] += alpha * y[i];
        break;
      }
      std::vector<double> z = precondition(s);
      project_mean_zero(z);
      const std::vector<double> t = apply_projected(z);
      const double tt = dot_mu(t, t);
      if (!(tt > 0.0)) {
        degraded = true;
        break;
      }
      omega = dot_mu(t, s) / tt;
      for (std::size_t i = 0; i < npts; ++i) {
        x[i] += alpha * y[i] + omega * z[i];
        r[i] = s[i] - omega * t[i];
      }
      if (std::sqrt(dot_mu(r, r)) <= rel_tol * rhs_norm) break;
    }
    (void)degraded;

    // restart against the true residual
    r = true_residual();
    const double res = std::sqrt(dot_mu(r, r)) / rhs_norm;
    if (res <= rel_tol) {
      project_mean_zero(x);
      return x;
    }
    if (res >= 0.5 * last_restart_res) {
      // the rounding floor: no further progress to be had
      if (res <= accept_tol) {
        project_mean_zero(x);
        return x;
      }
      throw Error(ErrorKind::ConvergenceFailure, "bicgstab stalled above tolerance");
    }
    last_restart_res = res;
    r_hat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    rho = alpha = omega = 1.0;
    ++it;
  }
  throw Error(ErrorKind::ConvergenceFailure, "bicgstab did not reach tolerance");
}

LaplaceSolver::EigenResult LaplaceSolver::smallest_nonzero_eigenvalue(double tol,
                                                                      int max_iter) const {
  // Block inverse power iteration with Ritz extraction. The block absorbs the
  // near-degenerate bottom cluster (multiplicity 4 on the flat torus, 3 on the
  // round sphere), so the smallest Ritz value settles even when single-vector
  // iteration would wander inside the cluster.
  const std::size_t npts = bundle_->npoints();
  const int block = 6;
  const SpectralBasis basis(*bundle_->base, 4);

  std::vector<std::vector<double>> v(block);
  for (int b = 0; b < block; ++b) {
    std::mt19937_64 eng = make_engine(0x6eab1e5, {static_cast<std::uint64_t>(b), npts});
    v[b] = basis.synthesize(*bundle_->base, random_band_limited_coeffs(basis, eng));
    project_mean_zero(v[b]);
  }

  auto orthonormalize = [&](std::vector<std::vector<double>>& cols) {
    for (int b = 0; b < block; ++b) {
      for (int c = 0; c < b; ++c) {
        const double proj = dot_mu(cols[b], cols[c]);
        for (std::size_t i = 0; i < npts; ++i) cols[b][i] -= proj * cols[c][i];
      }
      const double norm = std::sqrt(dot_mu(cols[b], cols[b]));
      if (!(norm > 1e-200))
        throw Error(ErrorKind::ConvergenceFailure, "inverse iteration block degenerated");
      for (double& x : cols[b]) x /= norm;
    }
  };

  double lambda_prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    orthonormalize(v);
    std::vector<std::vector<double>> w(block);
    for (int b = 0; b < block; ++b) {
      w[b] = solve(v[b], 1e-10, 2000);
      project_mean_zero(w[b]);
    }
    orthonormalize(w);
    // Rayleigh-Ritz on the refreshed block
    std::vector<std::vector<double>> aw(block);
    for (int b = 0; b < block; ++b) {
      aw[b] = apply_neg_laplacian(w[b]);
      project_mean_zero(aw[b]);
    }
    Eigen::MatrixXd s(block, block);
    for (int b = 0; b < block; ++b)
      for (int c = 0; c < block; ++c) s(b, c) = dot_mu(w[b], aw[c]);
    const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const double lambda = es.eigenvalues()(0);
    v = w;
    if (it > 1 && std::fabs(lambda - lambda_prev) <= tol * std::max(1.0, std::fabs(lambda))) {
      // assemble the Ritz vector of the smallest value
      std::vector<double> field(npts, 0.0);
      for (int b = 0; b < block; ++b)
        for (std::size_t i = 0; i < npts; ++i) field[i] += es.eigenvectors()(b, 0) * w[b][i];
      return {lambda, std::move(field), it};
    }
    lambda_prev = lambda;
  }
  std::ostringstream os;
  os << "inverse power iteration stalled after " << max_iter
     << " iterations; last eigenvalue iterate " << lambda_prev;
  throw Error(ErrorKind::ConvergenceFailure, os.str());
}

} // namespace graphsurf
