#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvegrid/asrs.hpp"
#include "curvegrid/geometry.hpp"
#include "curvegrid/twd.hpp"

/// Brute-force references for the randomized test suites. Deliberately
/// simple: linear scans and exact pairwise loops, sharing only the geometry
/// primitives with the index builders.
namespace curvegrid::oracle {

struct NearNeighborScan {
  std::vector<std::string> within_delta;      // distance <= delta
  std::vector<std::string> within_stretched;  // distance <= (1+eps)*delta
};

/// Linear scan of the corpus; both id lists sorted. within_delta is always
/// a subset of within_stretched.
NearNeighborScan scan_near_neighbors(const std::vector<Curve>& curves, const Curve& q,
                                     double delta, double eps,
                                     Metric metric = Metric::continuous);

/// Exact max pairwise distance, O(N^2).
double exact_diameter(const std::vector<Point>& points);

/** Grid search over (start, end) parameter pairs with step `resolution`,
 *  returning the first pair whose subcurve passes the exact decision at
 *  delta. One-sided: absence at a finite resolution certifies nothing. */
std::optional<SubcurveRange> sampled_subcurve_witness(const Curve& p, const Curve& q,
                                                      double delta, double resolution);

/// Regions with at least theta points in the closed window [q1, q2].
std::vector<std::string> window_regions(const std::vector<StampedPoint>& points,
                                        std::uint64_t theta, double q1, double q2);

}  // namespace curvegrid::oracle
