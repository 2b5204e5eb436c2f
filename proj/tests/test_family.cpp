#include <doctest.h>

#include <cmath>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/family.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/random_fields.hpp"
#include "graphsurf/norms.hpp"
#include "oracles.hpp"

using namespace graphsurf;
using oracles::kPi;

TEST_CASE("height field consistency and c1 norm") {
  auto base = oracles::torus2(32);
  const HeightField psi = HeightField::torus_mode(base, {1, 0}, 0.0, 0.1);
  // samples match the analytic mode
  const Grid& grid = base->grid;
  for (std::size_t p = 0; p < base->npoints(); ++p) {
    int idx[2];
    grid.unravel(p, idx);
    CHECK(psi.values()[p] ==
          doctest::Approx(0.1 * std::sin(grid.coords[0][idx[0]])).epsilon(1e-13));
  }
  // synthesis(coeffs) reproduces values
  SpectralBasis basis(*base, psi.band_limit());
  const std::vector<double> resynth = basis.synthesize(*base, psi.coeffs());
  for (std::size_t p = 0; p < base->npoints(); ++p)
    CHECK(resynth[p] == doctest::Approx(psi.values()[p]).epsilon(1e-10));
  // sup|psi| + sup|grad psi| = 0.1 + 0.1
  CHECK(psi.c1_norm() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("family sampling") {
  auto base = oracles::torus2(24);
  SUBCASE("band 0 draws a constant of size 0.9 delta") {
    FamilySpec spec{base, 0.1, std::nullopt, 0, 1, 3};
    const HeightField psi = sample_height_field(spec, 0);
    for (double v : psi.values()) CHECK(std::fabs(std::fabs(v) - 0.09) < 1e-12);
    CHECK(psi.c1_norm() == doctest::Approx(0.09).epsilon(1e-12));
  }
  SUBCASE("rescaling is exact for any draw") {
    FamilySpec spec{base, 0.1, std::nullopt, 8, 4, 17};
    for (int sid = 0; sid < 4; ++sid) {
      const HeightField psi = sample_height_field(spec, sid);
      CHECK(psi.c1_norm() == doctest::Approx(0.09).epsilon(1e-12));
    }
  }
  SUBCASE("same substream gives bit-identical fields") {
    FamilySpec spec{base, 0.05, std::nullopt, 6, 2, 99};
    const HeightField a = sample_height_field(spec, 1);
    const HeightField b = sample_height_field(spec, 1);
    CHECK(a.values() == b.values());
    const HeightField c = sample_height_field(spec, 0);
    CHECK(a.values() != c.values());
  }
  SUBCASE("holder subfamily rescales below delta") {
    FamilySpec spec{base, 0.1, 0.5, 6, 1, 7};
    const HeightField psi = sample_height_field(spec, 0);
    CHECK(psi.c1_alpha_norm(0.5) < 0.1);
    CHECK(psi.c1_norm() < 0.1);
  }
  SUBCASE("delta outside the tubular width is rejected") {
    auto sph = oracles::sphere(16, 32);
    FamilySpec spec{sph, 1.5, std::nullopt, 4, 1, 1};
    CHECK_THROWS_AS((void)sample_height_field(spec, 0), Error);
  }
}

TEST_CASE("jpsi sandwich bounds") {
  auto tor = oracles::torus2(24);
  const auto [lo_t, hi_t] = jpsi_bounds(*tor, 0.1);
  CHECK(lo_t == doctest::Approx(1.0 / 1.2).epsilon(1e-14));
  CHECK(hi_t == doctest::Approx(1.2).epsilon(1e-14));

  auto sph = oracles::sphere(16, 32);
  const auto [lo_s, hi_s] = jpsi_bounds(*sph, 0.1);
  CHECK(lo_s == doctest::Approx(std::pow(0.9, 2) / 1.2).epsilon(1e-14));
  CHECK(hi_s == doctest::Approx(1.2 * std::pow(1.1, 2)).epsilon(1e-14));

  for (int sid = 0; sid < 10; ++sid) {
    FamilySpec spec{tor, 0.1, std::nullopt, 8, 10, 2024};
    const HeightField psi = sample_height_field(spec, sid);
    const JacobianData jac = graph_map_jacobian(tor, psi);
    for (double j : jac.jpsi) {
      CHECK(j >= lo_t);
      CHECK(j <= hi_t);
    }
  }
}

TEST_CASE("family sweep: structure and aggregates") {
  auto base = oracles::torus2(16);
  FamilySpec spec{base, 0.1, std::nullopt, 4, 2, 5};
  std::vector<EstimatorRequest> requests(2);
  requests[0].kind = Inequality::Poincare;
  requests[0].p = 2.0;
  requests[1].kind = Inequality::CZ_B;
  requests[1].p = 2.0;

  const SweepResult result = family_sweep(spec, {0.0, 0.05, 0.1}, requests, 2);
  REQUIRE(result.records.size() == 6);
  REQUIRE(result.aggregates.size() == 3);

  SUBCASE("delta = 0 reproduces the baseline surface") {
    const FamilySweepRecord& rec = result.records[0];
    REQUIRE(rec.ok);
    CHECK(rec.delta == 0.0);
    // seed-free estimators agree exactly with the psi == 0 baseline
    CHECK(rec.estimates[0].value == doctest::Approx(result.baseline[0].value).epsilon(1e-12));
    CHECK(rec.estimates[1].value == doctest::Approx(result.baseline[1].value).epsilon(1e-12));
    CHECK(rec.volume == doctest::Approx(result.baseline_volume).epsilon(1e-12));
  }
  SUBCASE("records carry the family invariants") {
    for (const FamilySweepRecord& rec : result.records) {
      REQUIRE(rec.ok);
      if (rec.delta > 0.0) CHECK(rec.c1_norm_actual < rec.delta);
      const auto [lo, hi] = jpsi_bounds(*base, rec.delta);
      CHECK(rec.jpsi_min >= lo - 1e-12);
      CHECK(rec.jpsi_max <= hi + 1e-12);
      const double big_c = (1.0 + 2.0 * rec.delta);
      CHECK(rec.volume <= big_c * result.baseline_volume);
      CHECK(rec.volume >= result.baseline_volume / big_c);
    }
  }
  SUBCASE("cumulative maxima never decrease in delta") {
    for (std::size_t ri = 0; ri < requests.size(); ++ri) {
      double prev = 0.0;
      for (const SweepAggregate& agg : result.aggregates) {
        CHECK(agg.cumulative_max[ri] >= prev);
        prev = agg.cumulative_max[ri];
      }
    }
  }
  SUBCASE("records arrive sorted by (delta, sample)") {
    for (std::size_t i = 1; i < result.records.size(); ++i) {
      const auto& a = result.records[i - 1];
      const auto& b = result.records[i];
      CHECK((a.delta < b.delta || (a.delta == b.delta && a.sample_id < b.sample_id)));
    }
  }
}

TEST_CASE("family sweep: estimator failures become failure rows") {
  auto base = oracles::torus2(16);
  FamilySpec spec{base, 0.1, std::nullopt, 4, 2, 5};
  std::vector<EstimatorRequest> requests(1);
  requests[0].kind = Inequality::Sobolev;
  requests[0].p = 2.0; // invalid: p must stay below n = 2
  const SweepResult result = family_sweep(spec, {0.05}, requests, 1);
  REQUIRE(result.records.size() == 2);
  for (const FamilySweepRecord& rec : result.records) {
    CHECK(!rec.ok);
    CHECK(rec.error.find("invalid-exponent") != std::string::npos);
  }
  CHECK(std::isnan(result.baseline[0].value));
}

TEST_CASE("family sweep: max over samples is monotone in sample count") {
  auto base = oracles::torus2(16);
  std::vector<EstimatorRequest> requests(1);
  requests[0].kind = Inequality::CZ_B;

  FamilySpec small{base, 0.1, std::nullopt, 4, 3, 77};
  FamilySpec large{base, 0.1, std::nullopt, 4, 6, 77};
  const SweepResult a = family_sweep(small, {0.1}, requests, 1);
  const SweepResult b = family_sweep(large, {0.1}, requests, 1);
  // shared seeds: the first 3 samples coincide, so the larger max dominates
  CHECK(b.aggregates[0].per_delta_max[0] >= a.aggregates[0].per_delta_max[0] - 1e-15);
}

TEST_CASE("sweep on the sphere tracks the eigenvalue oracle") {
  auto sph = oracles::sphere(24, 48);
  FamilySpec spec{sph, 0.05, std::nullopt, 4, 2, 9};
  std::vector<EstimatorRequest> requests(1);
  requests[0].kind = Inequality::Poincare;
  requests[0].p = 2.0;
  const SweepResult result = family_sweep(spec, {0.02, 0.05}, requests, 2);
  for (const FamilySweepRecord& rec : result.records) {
    REQUIRE(rec.ok);
    CHECK(std::fabs(rec.estimates[0].value - 1.0 / std::sqrt(2.0)) < 0.05);
  }
  // smallest-delta aggregate sits within 5% of the round-sphere constant
  CHECK(std::fabs(result.aggregates[0].per_delta_max[0] - 1.0 / std::sqrt(2.0)) <
        0.05 / std::sqrt(2.0));
}

TEST_CASE("recorded sobolev family constant dominates fresh random fields") {
  auto base = oracles::torus2(32);
  FamilySpec spec{base, 0.1, std::nullopt, 8, 6, 314};
  std::vector<EstimatorRequest> requests(1);
  requests[0].kind = Inequality::Sobolev;
  requests[0].p = 1.0;
  requests[0].trials = 16;
  const SweepResult result = family_sweep(spec, {0.1}, requests, 2);
  const double family_constant = result.aggregates[0].per_delta_max[0];

  for (int sid : {0, 3}) {
    const HeightField psi = sample_height_field(spec, sid, 0);
    const BundlePtr m = build_geometry(base, psi);
    SpectralBasis basis(*base, 8);
    for (int t = 0; t < 100; ++t) {
      std::mt19937_64 eng = make_engine(987654, {static_cast<std::uint64_t>(sid),
                                                 static_cast<std::uint64_t>(t)});
      const TensorField u = TensorField::scalar(
          m, basis.synthesize(*base, random_band_limited_coeffs(basis, eng)));
      const double denom = wkp_norm(u, 1, 1.0);
      if (!(denom > 0.0)) continue;
      CHECK(lp_norm(u, 2.0) / denom <= family_constant);
    }
  }
}

TEST_CASE("appending deltas never perturbs earlier samples") {
  auto base = oracles::torus2(16);
  FamilySpec spec{base, 0.1, std::nullopt, 4, 2, 55};
  std::vector<EstimatorRequest> requests(1);
  requests[0].kind = Inequality::CZ_B;
  const SweepResult small = family_sweep(spec, {0.02}, requests, 1);
  const SweepResult big = family_sweep(spec, {0.02, 0.05}, requests, 1);
  for (std::size_t i = 0; i < small.records.size(); ++i) {
    CHECK(small.records[i].c1_norm_actual == big.records[i].c1_norm_actual);
    CHECK(small.records[i].norm_b_l2 == big.records[i].norm_b_l2);
    CHECK(small.records[i].estimates[0].value == big.records[i].estimates[0].value);
  }
}

TEST_CASE("sweep results are independent of the thread count") {
  auto base = oracles::torus2(16);
  FamilySpec spec{base, 0.1, std::nullopt, 4, 3, 21};
  std::vector<EstimatorRequest> requests(2);
  requests[0].kind = Inequality::Sobolev;
  requests[0].p = 1.0;
  requests[0].trials = 6;
  requests[1].kind = Inequality::CZ_B;
  const SweepResult serial = family_sweep(spec, {0.05, 0.1}, requests, 1);
  const SweepResult threaded = family_sweep(spec, {0.05, 0.1}, requests, 4);
  REQUIRE(serial.records.size() == threaded.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].c1_norm_actual == threaded.records[i].c1_norm_actual);
    CHECK(serial.records[i].volume == threaded.records[i].volume);
    for (std::size_t ri = 0; ri < requests.size(); ++ri)
      CHECK(serial.records[i].estimates[ri].value == threaded.records[i].estimates[ri].value);
  }
  for (std::size_t a = 0; a < serial.aggregates.size(); ++a)
    CHECK(serial.aggregates[a].cumulative_max == threaded.aggregates[a].cumulative_max);
}
