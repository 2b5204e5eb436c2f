#include <doctest.h>

#include <cmath>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/norms.hpp"
#include "graphsurf/random_fields.hpp"
#include "oracles.hpp"

using namespace graphsurf;
using oracles::kPi;

namespace {

BundlePtr flat_bundle(int n) {
  auto base = oracles::torus2(n);
  return christoffel(flat_graph_geometry(HeightField::zero(base)));
}

TensorField random_scalar(const BundlePtr& m, int band, std::uint64_t seed) {
  SpectralBasis basis(*m->base, band);
  std::mt19937_64 eng = make_engine(seed, {99u});
  return TensorField::scalar(m, basis.synthesize(*m->base, random_band_limited_coeffs(basis, eng)));
}

} // namespace

TEST_CASE("lp norms against closed forms") {
  const BundlePtr m = flat_bundle(32);
  TensorField one(m, 0);
  for (std::size_t p = 0; p < one.npoints(); ++p) one.value(p) = 1.0;
  CHECK(lp_norm(one, 2.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

  const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
  CHECK(lp_norm(u, 2.0) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-12));

  auto sph = oracles::sphere(48, 96);
  const BundlePtr ms = christoffel(embedded_graph_geometry(sph, HeightField::zero(sph)));
  CHECK(lp_norm(b_field(ms), 2.0) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(4.0 * kPi)).epsilon(1e-9));

  CHECK_THROWS_AS((void)lp_norm(u, 0.5), Error);
}

TEST_CASE("wkp norm conventions") {
  const BundlePtr m = flat_bundle(32);
  TensorField c(m, 0);
  for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = 2.5;
  CHECK(wkp_norm(c, 2, 3.0) == doctest::Approx(lp_norm(c, 3.0)).epsilon(1e-12));

  const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
  CHECK(wkp_norm(u, 1, 2.0) == doctest::Approx(2.0 * kPi * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(wkp_norm(u, 0, 2.0) == lp_norm(u, 2.0));
  CHECK_THROWS_AS((void)wkp_norm(u, 5, 2.0), Error);
}

TEST_CASE("gagliardo seminorm") {
  const BundlePtr m = flat_bundle(24);
  SUBCASE("constants have zero seminorm") {
    TensorField c(m, 0);
    for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = 4.0;
    CHECK(gagliardo_seminorm(c, 0.5, 2.0) == 0.0);
  }
  SUBCASE("homogeneity: doubling the field doubles the seminorm") {
    const TensorField u = random_scalar(m, 3, 5);
    TensorField two_u = u;
    for (double& v : two_u.data()) v *= 2.0;
    const double a = gagliardo_seminorm(u, 0.5, 2.0);
    const double b = gagliardo_seminorm(two_u, 0.5, 2.0);
    CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));
  }
  SUBCASE("self-convergence of the pair quadrature") {
    double vals[2];
    int idx = 0;
    for (int n : {32, 48}) {
      const BundlePtr mb = flat_bundle(n);
      const TensorField u =
          TensorField::scalar(mb, [](const double* x) { return std::sin(x[0]); });
      vals[idx++] = gagliardo_seminorm(u, 0.5, 2.0);
    }
    CHECK(std::fabs(vals[0] - vals[1]) / vals[1] < 0.05);
  }
  SUBCASE("blows up toward s = 1 on refined grids") {
    // near-diagonal pairs dominate as s -> 1, so the seminorm climbs there
    const TensorField u = TensorField::scalar(m, [](const double* x) { return std::sin(x[0]); });
    const double near_one = gagliardo_seminorm(u, 0.95, 2.0);
    CHECK(near_one > gagliardo_seminorm(u, 0.8, 2.0));
    // and the s = 0.95 value grows without bound under refinement
    const BundlePtr fine = flat_bundle(36);
    const TensorField uf =
        TensorField::scalar(fine, [](const double* x) { return std::sin(x[0]); });
    CHECK(gagliardo_seminorm(uf, 0.95, 2.0) > near_one);
  }
  SUBCASE("invalid exponents") {
    const TensorField u = random_scalar(m, 2, 6);
    CHECK_THROWS_AS((void)gagliardo_seminorm(u, 1.2, 2.0), Error);
    CHECK_THROWS_AS((void)gagliardo_seminorm(u, 0.5, 0.9), Error);
  }
}

TEST_CASE("holder norms") {
  const BundlePtr m = flat_bundle(24);
  SUBCASE("constants have zero seminorm") {
    TensorField c(m, 0);
    for (std::size_t p = 0; p < c.npoints(); ++p) c.value(p) = -1.5;
    const HolderNorm h = holder_norm(c, 0.5);
    CHECK(h.seminorm == 0.0);
    CHECK(h.norm == doctest::Approx(1.5).epsilon(1e-14));
  }
  SUBCASE("homogeneity: tripling triples the seminorm") {
    const TensorField u = random_scalar(m, 3, 11);
    TensorField three_u = u;
    for (double& v : three_u.data()) v *= 3.0;
    const double a = holder_norm(u, 0.5).seminorm;
    const double b = holder_norm(three_u, 0.5).seminorm;
    CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-12));
  }
  SUBCASE("coordinate function on the flat chart has Lipschitz constant one") {
    // pair kernel on the fundamental patch of the torus grid
    const int n = 24;
    std::vector<double> points, values;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        points.push_back(i * 2.0 * kPi / n);
        points.push_back(j * 2.0 * kPi / n);
        values.push_back(i * 2.0 * kPi / n);
      }
    const double lip = pairwise_holder_seminorm(points, 2, values, 1, 1.0);
    CHECK(lip == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("grid refinement never lowers the pair sup on nested torus grids") {
    double vals[2];
    int idx = 0;
    for (int n : {16, 32}) {
      const BundlePtr mb = flat_bundle(n);
      const TensorField u = TensorField::scalar(mb, [](const double* x) {
        return std::sin(x[0]) + std::cos(2.0 * x[1]);
      });
      vals[idx++] = holder_norm(u, 0.5).seminorm;
    }
    CHECK(vals[1] >= vals[0] - 1e-12);
  }
  SUBCASE("ambient components agree with chart components for scalars") {
    const TensorField u = random_scalar(m, 2, 17);
    const HolderNorm a = holder_norm(u, 0.7, HolderComponents::Chart);
    const HolderNorm b = holder_norm(u, 0.7, HolderComponents::Ambient);
    CHECK(a.seminorm == b.seminorm);
  }
  SUBCASE("ambient projection of B on the sphere is finite and positive") {
    auto sph = oracles::sphere(24, 48);
    const BundlePtr ms = christoffel(embedded_graph_geometry(sph, HeightField::zero(sph)));
    const HolderNorm h = holder_norm(b_field(ms), 0.5, HolderComponents::Ambient);
    CHECK(std::isfinite(h.norm));
    CHECK(h.seminorm > 0.0);
  }
  SUBCASE("invalid exponents") {
    const TensorField u = random_scalar(m, 2, 3);
    CHECK_THROWS_AS((void)holder_norm(u, 0.0), Error);
    CHECK_THROWS_AS((void)holder_norm(u, 1.5), Error);
  }
}


TEST_CASE("norm axioms on random field pairs") {
  const BundlePtr m = flat_bundle(16);
  const double rel = 1e-10;

  auto check_axioms = [&](const std::function<double(const TensorField&)>& norm_fn, int pairs,
                          std::uint64_t tag) {
    for (int pair = 0; pair < pairs; ++pair) {
      const TensorField u = random_scalar(m, 3, tag * 10000 + pair);
      const TensorField v = random_scalar(m, 3, tag * 10000 + 5000 + pair);
      TensorField sum = u;
      for (std::size_t i = 0; i < sum.data().size(); ++i) sum.data()[i] += v.data()[i];
      TensorField scaled = u;
      for (double& x : scaled.data()) x *= -2.5;
      const double nu = norm_fn(u), nv = norm_fn(v), ns = norm_fn(sum);
      const double scale_ref = std::max({nu, nv, 1e-30});
      CHECK(ns <= nu + nv + rel * scale_ref);                          // triangle
      CHECK(norm_fn(scaled) == doctest::Approx(2.5 * nu).epsilon(rel)); // homogeneity
    }
  };

  check_axioms([](const TensorField& t) { return lp_norm(t, 1.0); }, 100, 1);
  check_axioms([](const TensorField& t) { return lp_norm(t, 2.0); }, 100, 2);
  check_axioms(
      [](const TensorField& t) { return lp_norm(t, std::numeric_limits<double>::infinity()); },
      100, 3);
  check_axioms([](const TensorField& t) { return wkp_norm(t, 1, 2.0); }, 25, 4);
  check_axioms([](const TensorField& t) { return gagliardo_seminorm(t, 0.5, 2.0); }, 10, 5);
  check_axioms([](const TensorField& t) { return holder_norm(t, 0.5).norm; }, 10, 6);
}

TEST_CASE("lp norm is monotone in p after volume normalization") {
  const BundlePtr m = flat_bundle(24);
  const double vol = surface_volume(m);
  for (int trial = 0; trial < 10; ++trial) {
    const TensorField u = random_scalar(m, 4, 7000 + trial);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
      const double normalized = lp_norm(u, p) / std::pow(vol, 1.0 / p);
      CHECK(normalized >= prev * (1.0 - 1e-10));
      prev = normalized;
    }
    CHECK(lp_norm(u, std::numeric_limits<double>::infinity()) >= prev * (1.0 - 1e-10));
  }
}
