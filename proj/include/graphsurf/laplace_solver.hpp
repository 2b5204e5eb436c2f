#ifndef GRAPHSURF_LAPLACE_SOLVER_HPP
#define GRAPHSURF_LAPLACE_SOLVER_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "graphsurf/geometry_bundle.hpp"

namespace graphsurf {

/// Matrix-free Laplace-Beltrami solver on a geometry bundle. Systems are
/// solved with preconditioned conjugate gradients on the mean-zero subspace;
/// the preconditioner inverts the unperturbed base operator exactly (flat
/// spectral inverse on the torus, per-longitude-mode banded solves on the
/// sphere), so iteration counts stay small for C^1-close graphs.
class LaplaceSolver {
public:
  explicit LaplaceSolver(BundlePtr bundle);

  /// -Laplace-Beltrami applied to grid samples.
  std::vector<double> apply_neg_laplacian(const std::vector<double>& u) const;

  /// Solve (-lap) u = f with f mean-zero; returns the mean-zero solution.
  std::vector<double> solve(const std::vector<double>& f, double rel_tol, int max_iter) const;

  struct EigenResult {
    double lambda1 = 0.0;
    std::vector<double> eigenfield;
    int iterations = 0;
  };

  /// Smallest nonzero eigenvalue by inverse power iteration on mean-zero
  /// fields; throws ConvergenceFailure with iterate diagnostics on stall.
  EigenResult smallest_nonzero_eigenvalue(double tol = 1e-8, int max_iter = 500) const;

  double volume() const { return volume_; }
  void project_mean_zero(std::vector<double>& u) const;

private:
  BundlePtr bundle_;
  std::vector<double> mu_; // quadrature measure per point
  double volume_ = 0.0;

  // torus preconditioner: per-axis DFT matrices and wavenumbers
  std::vector<Eigen::MatrixXcd> fwd_, inv_;
  std::vector<std::vector<double>> kappa_;
  // sphere preconditioner: LU factors of the per-mode latitude operators
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> mode_lu_;
  Eigen::MatrixXd phi_cos_, phi_sin_; // transform tables

  void build_torus_preconditioner();
  void build_sphere_preconditioner();
  std::vector<double> precondition(const std::vector<double>& r) const;
  double dot_mu(const std::vector<double>& a, const std::vector<double>& b) const;
};

} // namespace graphsurf

#endif
