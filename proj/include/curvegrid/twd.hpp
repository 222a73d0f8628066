#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "curvegrid/stats.hpp"

namespace curvegrid {

/// One observation: which region it belongs to and when it happened.
/// Times are normalized to [0, 1) before indexing.
struct StampedPoint {
  std::string region;
  double t = 0.0;
};

/// Affine map t_original = offset + scale * t_normalized, recorded when
/// ingestion rescales out-of-range times. Pass-through metadata.
struct TimeNormalization {
  double offset = 0.0;
  double scale = 1.0;
  bool rescaled = false;
};

/// Rescales times into [0, 1) in place when needed and reports the map.
TimeNormalization normalize_times(std::vector<StampedPoint>& points);

/** Density index over candidate time windows. The observed span
 *  [t_min, t_max] is divided into subinterval_count pieces of width
 *  step = eps * t_max; for every ordered endpoint pair (i, j) the bucket
 *  holds the regions with at least theta points in the closed window
 *  [window_lo(i), window_lo(j)]. Published endpoints are reported on the
 *  shifted axis [t_max, 2*t_max - t_min]. */
struct TwdIndex {
  std::uint64_t theta = 0;
  double eps = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double shift = 0.0;  // t_max - t_min: maps observed times onto the endpoint axis
  double step = 0.0;   // eps * t_max
  std::size_t subinterval_count = 0;
  TimeNormalization normalization;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> buckets;

  std::uint64_t candidate_window_count() const;
  /// Snapped window edge i on the observed time axis: t_min + i * step.
  double window_lo(std::size_t i) const;
  /// Endpoint i on the shifted axis: t_max + i * step.
  std::vector<double> endpoints() const;
};

/** Requires non-empty points, every t in [0, 1), theta >= 1, t_max > 0 and
 *  0 < eps < 1 / t_max - 1. */
TwdIndex build_twd(const std::vector<StampedPoint>& points, std::uint64_t theta, double eps);

/// The two snapped answers around a query window.
struct TwdQueryResult {
  std::vector<std::string> inner;  // S1: snapped inward, subset of the exact answer
  std::vector<std::string> outer;  // S2: snapped outward, superset of the exact answer
};

/** Query window [q1, q2], q1 < q2. Constant work: two endpoint clamps, four
 *  index roundings, two bucket lookups. inner is empty when the inward
 *  snapping inverts. Whenever both endpoints land exactly on snapped edges,
 *  inner == outer == the exact answer. */
TwdQueryResult query_twd(const TwdIndex& index, double q1, double q2,
                         QueryStats* stats = nullptr);

}  // namespace curvegrid
