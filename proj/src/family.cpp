#include "graphsurf/family.hpp"

#include <algorithm>
#include <cmath>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/parallel.hpp"
#include "graphsurf/random_fields.hpp"

namespace graphsurf {

namespace {
constexpr std::uint64_t kSampleTag = 11, kEstimateTag = 12, kBaselineTag = 13;
}

HeightField sample_height_field(const FamilySpec& spec, int sample_id, int delta_index) {
  if (!(spec.delta >= 0.0) || spec.delta >= spec.base->tubular_width())
    throw Error(ErrorKind::InvalidFamily, "delta must lie in [0, tubular width)");
  if (spec.samples < 1) throw Error(ErrorKind::InvalidFamily, "need samples >= 1");
  if (spec.alpha && (!(*spec.alpha > 0.0) || *spec.alpha > 1.0))
    throw Error(ErrorKind::InvalidFamily, "alpha must lie in (0,1]");

  const SpectralBasis basis(*spec.base, spec.band_limit);
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 eng =
        make_engine(spec.seed, {kSampleTag, static_cast<std::uint64_t>(delta_index),
                                static_cast<std::uint64_t>(sample_id), attempt});
    const std::vector<double> coeffs = random_band_limited_coeffs(basis, eng);
    HeightField draw = HeightField::from_coeffs(spec.base, coeffs, spec.band_limit);
    const double c1 = draw.c1_norm();
    if (!(c1 > 1e-14)) continue; // zero draw: next substream
    HeightField psi = draw.scaled(0.9 * spec.delta / c1);
    if (spec.alpha) {
      const double h = psi.c1_alpha_norm(*spec.alpha);
      if (h > 0.9 * spec.delta) psi = psi.scaled(0.9 * spec.delta / h);
    }
    return psi;
  }
}

std::pair<double, double> jpsi_bounds(const BaseManifold& base, double delta) {
  const double b0 = base.weingarten_op_norm;
  const int n = base.dim;
  const double lo = std::pow(1.0 - delta * b0, n) / (1.0 + 2.0 * delta);
  const double hi = (1.0 + 2.0 * delta) * std::pow(1.0 + delta * b0, n);
  return {lo, hi};
}

ConstantEstimate run_estimator(const EstimatorRequest& req, const BundlePtr& surface,
                               std::uint64_t seed, int threads) {
  switch (req.kind) {
    case Inequality::Sobolev:
      return estimate_sobolev_constant(surface, req.p, req.trials, seed, threads);
    case Inequality::Morrey:
      return estimate_morrey_constant(surface, req.p, req.trials, seed, threads);
    case Inequality::Poincare:
      return estimate_poincare_constant(surface, req.p, req.trials, seed, threads);
    case Inequality::SobolevPoincare: {
      const ConstantEstimate cs =
          estimate_sobolev_constant(surface, req.p, req.trials, seed, threads);
      const ConstantEstimate cp =
          estimate_poincare_constant(surface, req.p, req.trials, seed, threads);
      return sobolev_poincare_estimate(cs, cp);
    }
    case Inequality::GN:
      return estimate_gn_constant(surface, req.j, req.m, req.r, req.q, req.theta, req.trials,
                                  seed, threads);
    case Inequality::CZ_B: {
      ConstantEstimate est;
      est.inequality = Inequality::CZ_B;
      est.params.p = req.p;
      est.value = cz_curvature_ratio(surface, req.p);
      est.witness = "second fundamental form of the surface";
      return est;
    }
    case Inequality::Schauder_B: {
      ConstantEstimate est;
      est.inequality = Inequality::Schauder_B;
      est.params.alpha = req.alpha;
      est.value = schauder_curvature_ratio(surface, req.alpha);
      est.witness = "second fundamental form of the surface";
      return est;
    }
    case Inequality::CZ_fn:
      return estimate_cz_fn_constant(surface, req.p, req.trials, seed, threads);
    case Inequality::CZ_gradB: {
      ConstantEstimate est;
      est.inequality = Inequality::CZ_gradB;
      est.params.p = req.p;
      est.params.k = req.k;
      est.value = higher_cz_ratio(surface, req.p, req.k, req.k == 2);
      est.witness = "covariant derivative of the second fundamental form";
      return est;
    }
  }
  throw Error(ErrorKind::InvalidFamily, "unknown estimator request");
}

SweepResult family_sweep(const FamilySpec& spec, const std::vector<double>& deltas,
                         const std::vector<EstimatorRequest>& requests, int threads) {
  for (double d : deltas)
    if (!(d >= 0.0) || d >= spec.base->tubular_width())
      throw Error(ErrorKind::InvalidFamily, "every delta must lie in [0, tubular width)");

  SweepResult result;
  result.requests = requests;

  // baseline: the unperturbed base surface
  const HeightField zero = HeightField::zero(spec.base);
  const BundlePtr m0 = build_geometry(spec.base, zero);
  result.baseline_volume = surface_volume(m0);
  result.baseline.reserve(requests.size());
  for (std::size_t ri = 0; ri < requests.size(); ++ri) {
    try {
      result.baseline.push_back(
          run_estimator(requests[ri], m0, substream(spec.seed, {kBaselineTag, ri}), threads));
    } catch (const std::exception& e) {
      ConstantEstimate failed;
      failed.inequality = requests[ri].kind;
      failed.value = std::numeric_limits<double>::quiet_NaN();
      failed.witness = std::string("error: ") + e.what();
      result.baseline.push_back(std::move(failed));
    }
  }

  const std::size_t tasks = deltas.size() * static_cast<std::size_t>(spec.samples);
  result.records.resize(tasks);
  parallel_for(tasks, threads, [&](std::size_t task) {
    const int di = static_cast<int>(task / spec.samples);
    const int sid = static_cast<int>(task % spec.samples);
    FamilySweepRecord& rec = result.records[task];
    rec.delta_index = di;
    rec.sample_id = sid;
    rec.delta = deltas[di];
    try {
      FamilySpec draw_spec = spec;
      draw_spec.delta = deltas[di];
      const HeightField psi = sample_height_field(draw_spec, sid, di);
      rec.c1_norm_actual = psi.c1_norm();
      if (spec.alpha) rec.c1_alpha_norm = psi.c1_alpha_norm(*spec.alpha);
      const BundlePtr surface = build_geometry(spec.base, psi);
      rec.volume = surface_volume(surface);
      const TensorField bt = b_field(surface);
      const TensorField ht = h_field(surface);
      rec.norm_b_l2 = lp_norm(bt, 2.0);
      rec.norm_h_l2 = lp_norm(ht, 2.0);
      rec.norm_h_l3 = lp_norm(ht, 3.0);
      rec.norm_h_l4 = lp_norm(ht, 4.0);
      const JacobianData jac = graph_map_jacobian(spec.base, psi);
      rec.jpsi_min = *std::min_element(jac.jpsi.begin(), jac.jpsi.end());
      rec.jpsi_max = *std::max_element(jac.jpsi.begin(), jac.jpsi.end());
      rec.estimates.reserve(requests.size());
      for (std::size_t ri = 0; ri < requests.size(); ++ri) {
        const std::uint64_t est_seed =
            substream(spec.seed, {kEstimateTag, static_cast<std::uint64_t>(di),
                                  static_cast<std::uint64_t>(sid), ri});
        rec.estimates.push_back(run_estimator(requests[ri], surface, est_seed, 1));
      }
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  // per-delta and nested-family maxima (sorted by delta; a sample drawn at a
  // smaller delta belongs to every larger family)
  std::vector<int> order(deltas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return deltas[a] < deltas[b]; });

  std::vector<double> running(requests.size(), 0.0);
  std::vector<SweepAggregate> aggs;
  for (int di : order) {
    SweepAggregate agg;
    agg.delta = deltas[di];
    agg.per_delta_max.assign(requests.size(), 0.0);
    for (const FamilySweepRecord& rec : result.records) {
      if (!rec.ok || rec.delta_index != di) continue;
      for (std::size_t ri = 0; ri < requests.size(); ++ri)
        agg.per_delta_max[ri] = std::max(agg.per_delta_max[ri], rec.estimates[ri].value);
    }
    for (std::size_t ri = 0; ri < requests.size(); ++ri)
      running[ri] = std::max(running[ri], agg.per_delta_max[ri]);
    agg.cumulative_max = running;
    aggs.push_back(std::move(agg));
  }
  result.aggregates = std::move(aggs);

  std::sort(result.records.begin(), result.records.end(),
            [](const FamilySweepRecord& a, const FamilySweepRecord& b) {
              if (a.delta != b.delta) return a.delta < b.delta;
              return a.sample_id < b.sample_id;
            });
  return result;
}

} // namespace graphsurf
