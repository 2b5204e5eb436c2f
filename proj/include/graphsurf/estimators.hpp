#ifndef GRAPHSURF_ESTIMATORS_HPP
#define GRAPHSURF_ESTIMATORS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "graphsurf/norms.hpp"
#include "graphsurf/tensor_field.hpp"

namespace graphsurf {

enum class Inequality {
  Sobolev,
  Morrey,
  Poincare,
  SobolevPoincare,
  GN,
  CZ_B,
  Schauder_B,
  CZ_fn,
  CZ_gradB,
};

const char* to_string(Inequality ineq);
std::optional<Inequality> inequality_from_string(const std::string& name);

/// Parameters an estimate was produced with; unset entries stay NaN / -1.
struct EstimateParams {
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double s = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
  int j = -1, m = -1, k = -1;
  std::string to_string() const;
};

/// Best quotient found over the tested candidates: a lower bound on the
/// optimal constant of the inequality. Deterministic given (inputs, seed).
struct ConstantEstimate {
  Inequality inequality = Inequality::Sobolev;
  double value = 0.0;
  std::string witness;
  EstimateParams params;
};

/// Shared candidate maximization: `trials` random band-limited fields plus 50
/// normalized random-perturbation ascent steps from the best one. ratio_fn
/// returns the quotient of one candidate, or NaN for an inadmissible one.
ConstantEstimate maximize_over_candidates(
    Inequality ineq, EstimateParams params, const BundlePtr& surface, int trials,
    std::uint64_t seed, int threads, const std::function<double(const TensorField&)>& ratio_fn,
    int band_limit = 8);

ConstantEstimate estimate_sobolev_constant(const BundlePtr& surface, double p, int trials,
                                           std::uint64_t seed, int threads = 1);
ConstantEstimate estimate_morrey_constant(const BundlePtr& surface, double p, int trials,
                                          std::uint64_t seed, int threads = 1);
/// p = 2 uses the eigenvalue route (1/sqrt(lambda_1), inverse power
/// iteration); other p maximizes |u - mean|_p / |grad u|_p over candidates.
ConstantEstimate estimate_poincare_constant(const BundlePtr& surface, double p, int trials = 64,
                                            std::uint64_t seed = 0, int threads = 1);
/// Composition C_S * (1 + C_P) covering the mean-zero Sobolev inequality.
ConstantEstimate sobolev_poincare_estimate(const ConstantEstimate& sobolev,
                                           const ConstantEstimate& poincare);

/// Interpolation exponent: solves 1/p = j/n + theta (1/r - m/n) + (1-theta)/q.
/// Returns +infinity when 1/p = 0.
double gn_exponent(int j, int m, double r, double q, double theta, int n);

struct GnCheck {
  double p = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::optional<double> mean_zero_ratio; // simplified right side, mean-zero u only
};

GnCheck verify_gn_inequality(const BundlePtr& surface, const TensorField& u, int j, int m,
                             double r, double q, double theta);

/// Candidate-maximized interpolation quotient (sweep estimator for GN).
ConstantEstimate estimate_gn_constant(const BundlePtr& surface, int j, int m, double r, double q,
                                      double theta, int trials, std::uint64_t seed,
                                      int threads = 1);

/// |B|_p / (1 + |H|_p).
double cz_curvature_ratio(const BundlePtr& surface, double p);
/// |B|_{C^0,alpha} / (1 + |H|_{C^0,alpha}).
double schauder_curvature_ratio(const BundlePtr& surface, double alpha,
                                HolderComponents comps = HolderComponents::Chart);
/// |hess u|_p / (|lap u|_p + |u|_p).
double cz_function_ratio(const BundlePtr& surface, const TensorField& u, double p);
/// Candidate-maximized function-level quotient (sweep estimator for CZ_fn).
ConstantEstimate estimate_cz_fn_constant(const BundlePtr& surface, double p, int trials,
                                         std::uint64_t seed, int threads = 1);
/// |grad^k B|_p / (1 + |grad^k H|_p); k = 2 only behind the flag.
double higher_cz_ratio(const BundlePtr& surface, double p, int k = 1, bool allow_k2 = false);

} // namespace graphsurf

#endif
