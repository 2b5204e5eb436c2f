#ifndef GRAPHSURF_BASE_MANIFOLD_HPP
#define GRAPHSURF_BASE_MANIFOLD_HPP

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <vector>

#include "graphsurf/grid.hpp"

namespace graphsurf {

enum class BaseKind { FlatTorus, Sphere };

/// Differentiation scheme for grid-sampled fields. The sphere always uses
/// spectral derivatives in the periodic longitude and 4th-order centered
/// differences in latitude; the scheme selects the torus behavior.
enum class DerivScheme { Spectral, FiniteDifference4 };

/// A fixed compact base hypersurface: either a flat n-torus sitting at height
/// zero in T^n x R, or a round 2-sphere in R^3 parametrized by colatitude and
/// longitude on a pole-free half-offset product grid.
///
/// All base quantities (embedding, tangent frame, normal, Weingarten map,
/// metric) are evaluated from closed forms at construction; only sampled
/// height and test fields are ever differentiated numerically.
class BaseManifold {
public:
  static std::shared_ptr<const BaseManifold> flat_torus(std::vector<double> periods,
                                                        std::vector<int> grid_shape);
  static std::shared_ptr<const BaseManifold> sphere(double radius, int n_theta, int n_phi);

  BaseKind kind;
  int dim = 0;                  // intrinsic dimension n
  std::vector<double> periods;  // torus only
  double radius = 0.0;          // sphere only
  Grid grid;

  /// Width of the tubular neighborhood on which graphs are admissible.
  double tubular_width() const {
    return kind == BaseKind::Sphere ? radius : std::numeric_limits<double>::infinity();
  }

  int ambient_dim() const { return dim + 1; }
  std::size_t npoints() const { return grid.npoints; }

  // Closed-form data per grid point (layouts: point-major, component-minor).
  std::vector<double> embed;       // npts * (n+1)
  std::vector<double> tangent;     // npts * n * (n+1)      d_a x
  std::vector<double> second;      // npts * n * n * (n+1)  d_a d_b x
  std::vector<double> normal;      // npts * (n+1)          outward nu0
  std::vector<double> dnormal;     // npts * n * (n+1)      d_a nu0
  std::vector<double> g0;          // npts * n * n
  std::vector<double> g0_inv;      // npts * n * n
  std::vector<double> sqrt_det_g0; // npts
  double weingarten_op_norm = 0.0; // sup over grid of |g0^{-1} B0|_op

  /// Chordal distance between two ambient points: per-axis minimal image plus
  /// the cross-section offset on the torus, Euclidean on the sphere.
  double ambient_distance(const double* p, const double* q) const;

  // Cached derivative operators for fields sampled on this grid.
  struct AxisOperators {
    Eigen::MatrixXd spectral_d1, spectral_d2;
    Eigen::MatrixXd fd4_d1, fd4_d2;
  };
  std::vector<AxisOperators> axis_ops; // torus: per axis; sphere: [1] = phi only

  /// Differentiate one scalar component array along `axis` (order 1 or 2).
  /// `theta_parity` gives the sign the component picks up when a latitude line
  /// is continued across the pole (+1 for scalars, (-1)^{#theta indices} for
  /// chart tensor components); it is ignored on the torus.
  void axis_derivative(const double* in, double* out, int axis, int order, int theta_parity,
                       DerivScheme scheme) const;

private:
  BaseManifold() = default;
  void build_torus_tables();
  void build_sphere_tables();
};

using BasePtr = std::shared_ptr<const BaseManifold>;

} // namespace graphsurf

#endif
