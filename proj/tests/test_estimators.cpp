#include <doctest.h>

#include <cmath>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/estimators.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/random_fields.hpp"
#include "oracles.hpp"

using namespace graphsurf;
using oracles::kPi;

namespace {

BundlePtr flat_bundle(int n) {
  auto base = oracles::torus2(n);
  return christoffel(flat_graph_geometry(HeightField::zero(base)));
}

BundlePtr sphere_bundle(int nt, int np) {
  auto base = oracles::sphere(nt, np);
  return christoffel(embedded_graph_geometry(base, HeightField::zero(base)));
}

} // namespace

TEST_CASE("gn exponent algebra") {
  CHECK(gn_exponent(1, 2, 2.0, 2.0, 0.75, 2) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(gn_exponent(0, 1, 1.0, 2.0, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-14));

  // Sobolev endpoint identity, exact in floating point (n = 3 admits p = 2.5)
  for (double p : {1.0, 1.5, 2.5}) {
    const double p_out = gn_exponent(0, 1, p, 2.0, 1.0, 3);
    CHECK(std::fabs(1.0 / p_out - (1.0 / p - 1.0 / 3.0)) <= 1e-12);
  }

  CHECK_THROWS_AS((void)gn_exponent(0, 1, 2.0, 2.0, 1.0, 2), Error); // r = n/(m-j) != 1
  try {
    (void)gn_exponent(0, 1, 2.0, 2.0, 1.0, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExcludedCase);
  }
  CHECK_THROWS_AS((void)gn_exponent(0, 1, 5.0, 2.0, 1.0, 2), Error); // negative 1/p
  CHECK_THROWS_AS((void)gn_exponent(1, 2, 2.0, 2.0, 0.1, 2), Error); // theta < j/m
  CHECK(std::isinf(gn_exponent(0, 1, 2.0, 2.0, 1.0, 4)) == false);   // 1/p = 1/2-1/4 fine
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(std::isinf(gn_exponent(0, 2, 1.0, inf, 0.5, 2)));            // 1/p = 0 means p = inf
}

TEST_CASE("sobolev constant estimate") {
  const BundlePtr m = flat_bundle(48);

  // the anchor candidate: |sin x1|_2 / (|grad sin x1|_1 + |sin x1|_1) = sqrt(2)/16
  const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
  const double anchor = lp_norm(u, 2.0) / wkp_norm(u, 1, 1.0);
  CHECK(anchor == doctest::Approx(std::sqrt(2.0) / 16.0).epsilon(1e-3));

  const ConstantEstimate est = estimate_sobolev_constant(m, 1.0, 24, 7);
  CHECK(est.value >= anchor);

  // maximum semantics: not below any of its own trial candidates
  SpectralBasis basis(*m->base, 8);
  for (int t = 0; t < 24; ++t) {
    std::mt19937_64 eng = make_engine(7, {1u, static_cast<std::uint64_t>(t)});
    const TensorField cand =
        TensorField::scalar(m, basis.synthesize(*m->base, random_band_limited_coeffs(basis, eng)));
    const double denom = wkp_norm(cand, 1, 1.0);
    if (denom > 0.0) CHECK(est.value >= lp_norm(cand, 2.0) / denom - 1e-15);
  }

  // determinism
  const ConstantEstimate again = estimate_sobolev_constant(m, 1.0, 24, 7);
  CHECK(again.value == est.value);
  CHECK(again.witness == est.witness);

  CHECK_THROWS_AS((void)estimate_sobolev_constant(m, 2.0, 4, 1), Error); // p >= n
}

TEST_CASE("morrey constant estimate") {
  const BundlePtr m = flat_bundle(32);
  // constant candidates contribute exactly Vol^{-1/p}
  TensorField c(m, 0);
  for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = 3.0;
  const double vol = surface_volume(m);
  const double ratio = holder_norm(c, 0.5).norm / wkp_norm(c, 1, 4.0);
  CHECK(ratio == doctest::Approx(std::pow(vol, -0.25)).epsilon(1e-10));

  // dense-grid oracle for the sin x1 candidate at alpha = 1/2
  double ratios[2];
  int idx = 0;
  for (int n : {32, 64}) {
    const BundlePtr mb = flat_bundle(n);
    const TensorField u =
        TensorField::scalar(mb, [](const double* x) { return std::sin(x[0]); });
    ratios[idx++] = holder_norm(u, 0.5).norm / wkp_norm(u, 1, 4.0);
  }
  CHECK(std::fabs(ratios[0] - ratios[1]) / ratios[1] < 0.02);

  const ConstantEstimate est = estimate_morrey_constant(m, 4.0, 8, 3);
  CHECK(est.value > 0.0);
  const ConstantEstimate again = estimate_morrey_constant(m, 4.0, 8, 3);
  CHECK(again.value == est.value);

  CHECK_THROWS_AS((void)estimate_morrey_constant(m, 2.0, 4, 1), Error); // p <= n
}

TEST_CASE("poincare constant: eigenvalue route") {
  SUBCASE("flat torus has lambda1 = 1") {
    const BundlePtr m = flat_bundle(48);
    const ConstantEstimate est = estimate_poincare_constant(m, 2.0);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("unit sphere has lambda1 = 2") {
    const BundlePtr m = sphere_bundle(64, 128);
    const ConstantEstimate est = estimate_poincare_constant(m, 2.0);
    CHECK(est.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3 / 0.7));
    CHECK(std::fabs(est.value - 0.70711) < 1e-3);
  }
  SUBCASE("no random mean-zero field beats the eigenvalue route") {
    const BundlePtr m = flat_bundle(32);
    const ConstantEstimate est = estimate_poincare_constant(m, 2.0);
    SpectralBasis basis(*m->base, 8);
    for (int t = 0; t < 200; ++t) {
      std::mt19937_64 eng = make_engine(31337, {static_cast<std::uint64_t>(t)});
      TensorField u = TensorField::scalar(
          m, basis.synthesize(*m->base, random_band_limited_coeffs(basis, eng)));
      const double mean = mean_dmu(u);
      for (double& v : u.data()) v -= mean;
      const double num = lp_norm(u, 2.0);
      const double den = lp_norm(covariant_derivative(u), 2.0);
      if (den > 1e-12) CHECK(num / den <= est.value + 1e-6);
    }
  }
  SUBCASE("sampled route for p != 2") {
    const BundlePtr m = flat_bundle(24);
    const ConstantEstimate est = estimate_poincare_constant(m, 3.0, 16, 5);
    CHECK(est.value > 0.0);
    const ConstantEstimate again = estimate_poincare_constant(m, 3.0, 16, 5);
    CHECK(again.value == est.value);
  }
}

TEST_CASE("gn inequality verification") {
  const BundlePtr m = flat_bundle(48);
  SUBCASE("constants have zero left side for j >= 1") {
    TensorField c(m, 0);
    for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = 2.0;
    const GnCheck check = verify_gn_inequality(m, c, 1, 2, 2.0, 2.0, 0.75);
    CHECK(check.lhs < 1e-12);
    CHECK(check.ratio < 1e-12);
  }
  SUBCASE("closed form for sin x1 at (1,2,2,2,3/4)") {
    const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
    const GnCheck check = verify_gn_inequality(m, u, 1, 2, 2.0, 2.0, 0.75);
    CHECK(check.p == doctest::Approx(4.0).epsilon(1e-14));
    const double lhs_expected = std::pow(1.5 * kPi * kPi, 0.25);
    const double rhs_expected =
        std::pow(2.0 * kPi * std::sqrt(2.0), 0.75) * std::pow(kPi * std::sqrt(2.0), 0.25);
    CHECK(check.lhs == doctest::Approx(lhs_expected).epsilon(1e-6));
    CHECK(check.rhs == doctest::Approx(rhs_expected).epsilon(1e-6));
    CHECK(check.ratio == doctest::Approx(lhs_expected / rhs_expected).epsilon(1e-6));
    // sin x1 is mean-zero: the simplified right side is smaller
    REQUIRE(check.mean_zero_ratio.has_value());
    CHECK(*check.mean_zero_ratio >= check.ratio);
  }
}

TEST_CASE("curvature ratios") {
  SUBCASE("flat torus: B vanishes") {
    const BundlePtr m = flat_bundle(24);
    CHECK(cz_curvature_ratio(m, 2.0) == 0.0);
    CHECK(schauder_curvature_ratio(m, 0.5) == 0.0);
    CHECK(higher_cz_ratio(m, 2.0, 1) < 1e-13);
  }
  SUBCASE("unit sphere closed form at p = 2") {
    const BundlePtr m = sphere_bundle(64, 128);
    const double expected =
        std::sqrt(2.0) * std::sqrt(4.0 * kPi) / (1.0 + 2.0 * std::sqrt(4.0 * kPi));
    CHECK(cz_curvature_ratio(m, 2.0) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::fabs(cz_curvature_ratio(m, 2.0) - 0.6197) < 1e-3);
    CHECK(higher_cz_ratio(m, 2.0, 1) <= 1e-6); // umbilic: grad B = 0
  }
  SUBCASE("schauder ratio: purity and dense-grid stability") {
    const BundlePtr a = sphere_bundle(32, 64);
    CHECK(schauder_curvature_ratio(a, 0.5) == schauder_curvature_ratio(a, 0.5));
    const BundlePtr b = sphere_bundle(48, 96);
    const double ra = schauder_curvature_ratio(a, 0.5);
    const double rb = schauder_curvature_ratio(b, 0.5);
    CHECK(std::fabs(ra - rb) / rb < 0.02);
  }
  SUBCASE("higher order: k guard rails") {
    const BundlePtr m = flat_bundle(16);
    CHECK_THROWS_AS((void)higher_cz_ratio(m, 2.0, 2), Error);        // needs the flag
    CHECK_NOTHROW((void)higher_cz_ratio(m, 2.0, 2, true));
    CHECK_THROWS_AS((void)higher_cz_ratio(m, 2.0, 3, true), Error);  // unsupported
  }
  SUBCASE("higher order ratio is grid-stable on a torus wave") {
    double vals[2];
    int idx = 0;
    for (int n : {48, 64}) {
      auto base = oracles::torus2(n);
      const HeightField psi = HeightField::torus_mode(base, {1, 0}, 0.0, 0.1);
      const BundlePtr m = christoffel(flat_graph_geometry(psi));
      vals[idx++] = higher_cz_ratio(m, 2.0, 1);
    }
    CHECK(std::fabs(vals[0] - vals[1]) / vals[1] < 0.01);
  }
}

TEST_CASE("function-level calderon-zygmund ratio") {
  const BundlePtr m = flat_bundle(48);
  SUBCASE("sin x1 gives exactly one half") {
    const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
    CHECK(cz_function_ratio(m, u, 2.0) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("constants give zero") {
    TensorField c(m, 0);
    for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = 1.0;
    CHECK(cz_function_ratio(m, c, 2.0) < 1e-10);
  }
  SUBCASE("two-mode closed form") {
    const TensorField u = TensorField::scalar(
        m, [](const double* x) { return std::sin(x[0]) + std::sin(x[1]); });
    CHECK(cz_function_ratio(m, u, 2.0) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("zero field is rejected") {
    TensorField z(m, 0);
    CHECK_THROWS_AS((void)cz_function_ratio(m, z, 2.0), Error);
  }
}

TEST_CASE("gn verification at the p = infinity endpoint") {
  const BundlePtr m = flat_bundle(32);
  const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
  // j=0, m=2, r=1, q=inf, theta=1/2 solves to 1/p = 0
  const double inf = std::numeric_limits<double>::infinity();
  const GnCheck check = verify_gn_inequality(m, u, 0, 2, 1.0, inf, 0.5);
  CHECK(std::isinf(check.p));
  CHECK(check.lhs == doctest::Approx(1.0).epsilon(1e-3)); // sup |sin|
  CHECK(check.ratio > 0.0);
}

TEST_CASE("sobolev-poincare composition") {
  const BundlePtr m = flat_bundle(32);
  const ConstantEstimate cs = estimate_sobolev_constant(m, 1.0, 8, 11);
  const ConstantEstimate cp = estimate_poincare_constant(m, 1.0, 8, 11);
  const ConstantEstimate sp = sobolev_poincare_estimate(cs, cp);
  CHECK(sp.value == doctest::Approx(cs.value * (1.0 + cp.value)).epsilon(1e-14));
}

TEST_CASE("parallel and serial candidate evaluation agree exactly") {
  const BundlePtr m = flat_bundle(24);
  const ConstantEstimate serial = estimate_sobolev_constant(m, 1.0, 12, 3, 1);
  const ConstantEstimate parallel = estimate_sobolev_constant(m, 1.0, 12, 3, 4);
  CHECK(serial.value == parallel.value);
  CHECK(serial.witness == parallel.witness);
}

TEST_CASE("candidate maximization rejects an all-degenerate family") {
  const BundlePtr m = flat_bundle(16);
  EstimateParams params;
  CHECK_THROWS_AS((void)maximize_over_candidates(
                      Inequality::Sobolev, params, m, 4, 1, 1,
                      [](const TensorField&) {
                        return std::numeric_limits<double>::quiet_NaN();
                      }),
                  Error);
}
