#ifndef GRAPHSURF_FAMILY_HPP
#define GRAPHSURF_FAMILY_HPP

#include <optional>
#include <vector>

#include "graphsurf/estimators.hpp"
#include "graphsurf/height_field.hpp"

namespace graphsurf {

/// Sampling specification for the C^1-close graph family over a base.
struct FamilySpec {
  BasePtr base;
  double delta = 0.1;
  std::optional<double> alpha; // restrict to the C^{1,alpha} subfamily
  int band_limit = 8;
  int samples = 1;
  std::uint64_t seed = 0;
};

/// Draw one height field of the family: a seeded band-limited field rescaled
/// to C^1 norm 0.9 * delta (and, if alpha is set, C^{1,alpha} norm < delta).
/// The substream depends on (seed, delta_index, sample_id) only.
HeightField sample_height_field(const FamilySpec& spec, int sample_id, int delta_index = 0);

/// One estimator to run per sampled surface.
struct EstimatorRequest {
  Inequality kind = Inequality::Sobolev;
  double p = 2.0, q = 2.0, r = 2.0, theta = 0.75, alpha = 0.5;
  int j = 1, m = 2, k = 1;
  int trials = 24;
};

struct FamilySweepRecord {
  int delta_index = 0;
  int sample_id = 0;
  double delta = 0.0;
  bool ok = false;
  std::string error;
  double c1_norm_actual = 0.0;
  double c1_alpha_norm = std::numeric_limits<double>::quiet_NaN();
  double volume = 0.0;
  double norm_b_l2 = 0.0, norm_h_l2 = 0.0, norm_h_l3 = 0.0, norm_h_l4 = 0.0;
  double jpsi_min = 0.0, jpsi_max = 0.0;
  std::vector<ConstantEstimate> estimates; // aligned with the request list
};

struct SweepAggregate {
  double delta = 0.0;
  std::vector<double> per_delta_max;  // over samples at this delta
  std::vector<double> cumulative_max; // over every sample with c1 norm < delta
};

struct SweepResult {
  std::vector<EstimatorRequest> requests;
  std::vector<FamilySweepRecord> records;   // sorted by (delta, sample_id)
  std::vector<SweepAggregate> aggregates;   // sorted by delta
  std::vector<ConstantEstimate> baseline;   // the psi == 0 surface
  double baseline_volume = 0.0;
};

/// Sweep the deltas, sample each family, estimate the selected constants and
/// aggregate per-delta maxima. Sample failures become failure rows.
SweepResult family_sweep(const FamilySpec& spec, const std::vector<double>& deltas,
                         const std::vector<EstimatorRequest>& requests, int threads = 1);

/// Run one estimator request against a surface.
ConstantEstimate run_estimator(const EstimatorRequest& req, const BundlePtr& surface,
                               std::uint64_t seed, int threads = 1);

/// Discrete sandwich for the graph-map distortion over the delta-family:
/// [ (1 - delta |B0|)^n / (1+2 delta), (1+2 delta)(1 + delta |B0|)^n ].
std::pair<double, double> jpsi_bounds(const BaseManifold& base, double delta);

} // namespace graphsurf

#endif
