#include "graphsurf/estimators.hpp"

#include <cmath>
#include <sstream>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/laplace_solver.hpp"
#include "graphsurf/parallel.hpp"
#include "graphsurf/random_fields.hpp"

namespace graphsurf {

namespace {

constexpr std::uint64_t kTrialTag = 1, kAscentTag = 2;
constexpr int kAscentSteps = 50;
constexpr double kAscentStep = 0.25;

void format_param(std::ostringstream& os, const char* name, double v) {
  if (!std::isnan(v)) {
    if (!os.str().empty()) os << ";";
    os << name << "=" << v;
  }
}

double coeff_norm(const std::vector<double>& c) {
  double s = 0.0;
  for (double x : c) s += x * x;
  return std::sqrt(s);
}

} // namespace

const char* to_string(Inequality ineq) {
  switch (ineq) {
    case Inequality::Sobolev: return "sobolev";
    case Inequality::Morrey: return "morrey";
    case Inequality::Poincare: return "poincare";
    case Inequality::SobolevPoincare: return "sobolev_poincare";
    case Inequality::GN: return "gn";
    case Inequality::CZ_B: return "cz_b";
    case Inequality::Schauder_B: return "schauder_b";
    case Inequality::CZ_fn: return "cz_fn";
    case Inequality::CZ_gradB: return "cz_gradb";
  }
  return "unknown";
}

std::optional<Inequality> inequality_from_string(const std::string& name) {
  for (Inequality i : {Inequality::Sobolev, Inequality::Morrey, Inequality::Poincare,
                       Inequality::SobolevPoincare, Inequality::GN, Inequality::CZ_B,
                       Inequality::Schauder_B, Inequality::CZ_fn, Inequality::CZ_gradB})
    if (name == to_string(i)) return i;
  return std::nullopt;
}

std::string EstimateParams::to_string() const {
  std::ostringstream os;
  format_param(os, "p", p);
  format_param(os, "q", q);
  format_param(os, "r", r);
  format_param(os, "s", s);
  format_param(os, "alpha", alpha);
  format_param(os, "theta", theta);
  auto format_int = [&](const char* name, int v) {
    if (v >= 0) {
      if (!os.str().empty()) os << ";";
      os << name << "=" << v;
    }
  };
  format_int("j", j);
  format_int("m", m);
  format_int("k", k);
  return os.str();
}

ConstantEstimate maximize_over_candidates(
    Inequality ineq, EstimateParams params, const BundlePtr& surface, int trials,
    std::uint64_t seed, int threads, const std::function<double(const TensorField&)>& ratio_fn,
    int band_limit) {
  if (trials < 1) throw Error(ErrorKind::InvalidExponent, "need at least one trial");
  const SpectralBasis basis(*surface->base, band_limit);

  auto evaluate = [&](const std::vector<double>& coeffs) -> double {
    const TensorField u =
        TensorField::scalar(surface, basis.synthesize(*surface->base, coeffs));
    return ratio_fn(u);
  };

  std::vector<std::vector<double>> coeffs(trials);
  std::vector<double> ratios(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    std::mt19937_64 eng = make_engine(seed, {kTrialTag, t});
    coeffs[t] = random_band_limited_coeffs(basis, eng);
    ratios[t] = evaluate(coeffs[t]);
  });

  int best = -1;
  for (int t = 0; t < trials; ++t) {
    if (std::isnan(ratios[t])) continue;
    if (best < 0 || ratios[t] > ratios[best]) best = t; // first index wins ties
  }
  if (best < 0)
    throw Error(ErrorKind::UndefinedRatio, "no admissible candidate among the trials");

  std::vector<double> cur = coeffs[best];
  double cur_ratio = ratios[best];
  int accepted = 0;
  for (int step = 0; step < kAscentSteps; ++step) {
    std::mt19937_64 eng = make_engine(seed, {kAscentTag, static_cast<std::uint64_t>(step)});
    const std::vector<double> xi = random_band_limited_coeffs(basis, eng);
    std::vector<double> cand = cur;
    const double scale = kAscentStep * coeff_norm(cur) / std::max(coeff_norm(xi), 1e-300);
    for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += scale * xi[i];
    const double nrm = coeff_norm(cand);
    if (nrm > 0.0)
      for (double& c : cand) c /= nrm;
    const double r = evaluate(cand);
    if (!std::isnan(r) && r > cur_ratio) {
      cur = std::move(cand);
      cur_ratio = r;
      ++accepted;
    }
  }

  ConstantEstimate est;
  est.inequality = ineq;
  est.params = params;
  est.value = cur_ratio;
  std::ostringstream os;
  os << "band-" << band_limit << " candidate (trial " << best << " of " << trials << ", "
     << accepted << "/" << kAscentSteps << " ascent steps accepted)";
  est.witness = os.str();
  return est;
}

ConstantEstimate estimate_sobolev_constant(const BundlePtr& surface, double p, int trials,
                                           std::uint64_t seed, int threads) {
  const int n = surface->dim();
  if (n < 2) throw Error(ErrorKind::InvalidExponent, "Sobolev estimate needs n >= 2");
  if (!(p >= 1.0) || !(p < n))
    throw Error(ErrorKind::InvalidExponent, "Sobolev estimate needs p in [1,n)");
  const double p_star = n * p / (n - p);
  EstimateParams params;
  params.p = p;
  params.q = p_star;
  return maximize_over_candidates(
      Inequality::Sobolev, params, surface, trials, seed, threads,
      [&, p, p_star](const TensorField& u) -> double {
        const double denom = wkp_norm(u, 1, p);
        if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return lp_norm(u, p_star) / denom;
      });
}

ConstantEstimate estimate_morrey_constant(const BundlePtr& surface, double p, int trials,
                                          std::uint64_t seed, int threads) {
  const int n = surface->dim();
  if (!(p > n)) throw Error(ErrorKind::InvalidExponent, "Morrey estimate needs p > n");
  const double alpha = 1.0 - n / p;
  EstimateParams params;
  params.p = p;
  params.alpha = alpha;
  return maximize_over_candidates(
      Inequality::Morrey, params, surface, trials, seed, threads,
      [&, p, alpha](const TensorField& u) -> double {
        const double denom = wkp_norm(u, 1, p);
        if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return holder_norm(u, alpha).norm / denom;
      });
}

ConstantEstimate estimate_poincare_constant(const BundlePtr& surface, double p, int trials,
                                            std::uint64_t seed, int threads) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "Poincare estimate needs p >= 1");
  EstimateParams params;
  params.p = p;
  if (std::fabs(p - 2.0) < 1e-12) {
    LaplaceSolver solver(surface);
    const LaplaceSolver::EigenResult eig = solver.smallest_nonzero_eigenvalue(1e-8, 500);
    ConstantEstimate est;
    est.inequality = Inequality::Poincare;
    est.params = params;
    est.value = 1.0 / std::sqrt(eig.lambda1);
    std::ostringstream os;
    os << "first Laplace-Beltrami eigenfunction (lambda1=" << eig.lambda1 << ", "
       << eig.iterations << " inverse-power iterations)";
    est.witness = os.str();
    return est;
  }
  return maximize_over_candidates(
      Inequality::Poincare, params, surface, trials, seed, threads,
      [&, p](const TensorField& u) -> double {
        const double mean = mean_dmu(u);
        TensorField centered = u;
        for (double& v : centered.data()) v -= mean;
        const double num = lp_norm(centered, p);
        const TensorField grad = covariant_derivative(u);
        const double denom = lp_norm(grad, p);
        if (!(denom > 1e-14) || !(num > 0.0))
          return std::numeric_limits<double>::quiet_NaN(); // constants are degenerate here
        return num / denom;
      });
}

ConstantEstimate sobolev_poincare_estimate(const ConstantEstimate& sobolev,
                                           const ConstantEstimate& poincare) {
  ConstantEstimate est;
  est.inequality = Inequality::SobolevPoincare;
  est.params = sobolev.params;
  est.value = sobolev.value * (1.0 + poincare.value);
  est.witness = "composition C_S * (1 + C_P)";
  return est;
}

double gn_exponent(int j, int m, double r, double q, double theta, int n) {
  if (j < 0 || m <= j) throw Error(ErrorKind::InvalidExponent, "need integers 0 <= j < m");
  if (!(r >= 1.0) || !(q >= 1.0))
    throw Error(ErrorKind::InvalidExponent, "r and q must lie in [1,inf]");
  const double theta_min = static_cast<double>(j) / m;
  if (theta < theta_min - 1e-12 || theta > 1.0 + 1e-12)
    throw Error(ErrorKind::InvalidExponent, "theta must lie in [j/m, 1]");
  const double r_excluded = static_cast<double>(n) / (m - j);
  if (std::fabs(theta - 1.0) <= 1e-12 && std::fabs(r - r_excluded) <= 1e-12 &&
      std::fabs(r - 1.0) > 1e-12)
    throw Error(ErrorKind::ExcludedCase, "theta = 1 with r = n/(m-j) != 1 is not valid");
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double inv_p =
      static_cast<double>(j) / n + theta * (inv_r - static_cast<double>(m) / n) +
      (1.0 - theta) * inv_q;
  if (inv_p < -1e-15) throw Error(ErrorKind::NoValidExponent, "negative 1/p");
  if (inv_p <= 1e-15) return std::numeric_limits<double>::infinity();
  const double p = 1.0 / inv_p;
  if (p < 1.0 - 1e-12) throw Error(ErrorKind::NoValidExponent, "resulting p < 1");
  return p;
}

GnCheck verify_gn_inequality(const BundlePtr& surface, const TensorField& u, int j, int m,
                             double r, double q, double theta) {
  GnCheck out;
  out.p = gn_exponent(j, m, r, q, theta, surface->dim());
  const TensorField dju = j == 0 ? u : iterated_covariant_derivative(u, j);
  const TensorField dmu = iterated_covariant_derivative(u, m);
  out.lhs = lp_norm(dju, out.p);
  const double high = lp_norm(dmu, r);
  const double low_r = lp_norm(u, r);
  const double low_q = lp_norm(u, q);
  out.rhs = std::pow(high + low_r, theta) * std::pow(low_q, 1.0 - theta);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  const double scale = lp_norm(u, std::numeric_limits<double>::infinity());
  if (std::fabs(mean_dmu(u)) <= 1e-10 * std::max(scale, 1e-30)) {
    const double rhs2 = std::pow(high, theta) * std::pow(low_q, 1.0 - theta);
    if (rhs2 > 0.0) out.mean_zero_ratio = out.lhs / rhs2;
  }
  return out;
}

ConstantEstimate estimate_gn_constant(const BundlePtr& surface, int j, int m, double r, double q,
                                      double theta, int trials, std::uint64_t seed, int threads) {
  gn_exponent(j, m, r, q, theta, surface->dim()); // validate up front
  EstimateParams params;
  params.q = q;
  params.r = r;
  params.theta = theta;
  params.j = j;
  params.m = m;
  params.p = gn_exponent(j, m, r, q, theta, surface->dim());
  return maximize_over_candidates(
      Inequality::GN, params, surface, trials, seed, threads,
      [&, j, m, r, q, theta](const TensorField& u) -> double {
        const GnCheck check = verify_gn_inequality(surface, u, j, m, r, q, theta);
        if (!(check.rhs > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return check.ratio;
      });
}

double cz_curvature_ratio(const BundlePtr& surface, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "cz_curvature_ratio needs p >= 1");
  return lp_norm(b_field(surface), p) / (1.0 + lp_norm(h_field(surface), p));
}

double schauder_curvature_ratio(const BundlePtr& surface, double alpha, HolderComponents comps) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw Error(ErrorKind::InvalidExponent, "schauder_curvature_ratio needs alpha in (0,1]");
  const HolderNorm bn = holder_norm(b_field(surface), alpha, comps);
  const HolderNorm hn = holder_norm(h_field(surface), alpha, comps);
  return bn.norm / (1.0 + hn.norm);
}

double cz_function_ratio(const BundlePtr& surface, const TensorField& u, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "cz_function_ratio needs p >= 1");
  if (u.bundle().get() != surface.get())
    throw Error(ErrorKind::InvalidField, "field lives on a different surface");
  auto [hess, lap] = hessian_and_laplacian(u);
  const double denom = lp_norm(lap, p) + lp_norm(u, p);
  if (!(denom > 0.0))
    throw Error(ErrorKind::UndefinedRatio, "cz_function_ratio undefined for the zero field");
  return lp_norm(hess, p) / denom;
}

ConstantEstimate estimate_cz_fn_constant(const BundlePtr& surface, double p, int trials,
                                         std::uint64_t seed, int threads) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "cz_fn estimate needs p >= 1");
  EstimateParams params;
  params.p = p;
  return maximize_over_candidates(
      Inequality::CZ_fn, params, surface, trials, seed, threads,
      [&, p](const TensorField& u) -> double {
        auto [hess, lap] = hessian_and_laplacian(u);
        const double denom = lp_norm(lap, p) + lp_norm(u, p);
        if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return lp_norm(hess, p) / denom;
      });
}

double higher_cz_ratio(const BundlePtr& surface, double p, int k, bool allow_k2) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "higher_cz_ratio needs p >= 1");
  if (k < 1 || k > 2 || (k == 2 && !allow_k2))
    throw Error(ErrorKind::UnsupportedOrder, "higher_cz_ratio supports k = 1 (k = 2 behind flag)");
  const TensorField dkb = iterated_covariant_derivative(b_field(surface), k);
  const TensorField dkh = iterated_covariant_derivative(h_field(surface), k);
  return lp_norm(dkb, p) / (1.0 + lp_norm(dkh, p));
}

} // namespace graphsurf
