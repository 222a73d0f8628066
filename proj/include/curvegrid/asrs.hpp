#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvegrid/anns_asym.hpp"
#include "curvegrid/geometry.hpp"
#include "curvegrid/grid.hpp"
#include "curvegrid/stats.hpp"

namespace curvegrid {

/// Parameter span of one subcurve of the indexed curve, 1-based, in
/// [1, curve size]. May be degenerate (start == end).
struct SubcurveRange {
  double start = 0.0;
  double end = 0.0;

  bool operator==(const SubcurveRange&) const = default;
};

/// "start:end" with 15 significant digits per endpoint; the serialized form.
std::string range_text(const SubcurveRange& r);
SubcurveRange parse_range_text(const std::string& text);

/** The inclusion-minimal subcurves of p within `threshold` of c, swept
 *  bottom-to-top over the free-space diagram's left boundary: each emitted
 *  range starts at the latest boundary point of its maximal free interval
 *  from which the right boundary is monotonically reachable and ends at the
 *  earliest reachable right-boundary parameter; the sweep resumes strictly
 *  above the previous end.
 *
 *  Emitted ranges are pairwise disjoint and each subcurve is within
 *  `threshold` of c under the continuous Frechet distance; whenever any
 *  subcurve of p is within `threshold`, at least one range is emitted. */
std::vector<SubcurveRange> extract_inclusion_minimal(const Curve& p, const Curve& c,
                                                     double threshold);

struct AsrsParams {
  double delta = 0.0;
  double eps = 0.0;
  std::size_t k = 0;
  std::size_t dim = 0;
};

/** Subtrajectory index over one curve: the same grid as the asymmetric
 *  index built from {p}; each candidate grid sequence's bucket stores the
 *  inclusion-minimal subcurve ranges of p within (1 + eps/2) * delta of it.
 *  Range endpoints are quantized to 15 significant digits when stored so
 *  persisted indexes round-trip bit-exactly. */
struct AsrsIndex {
  AsrsParams params;
  Grid grid;
  double diameter_estimate = 0.0;
  std::uint64_t lattice_point_count = 0;
  std::uint64_t path_capacity = 0;
  std::string curve_id;
  std::size_t curve_size = 0;
  Curve curve;  // kept in memory, not serialized
  std::map<std::string, std::vector<SubcurveRange>> buckets;
};

/// Same parameter preconditions as build_asym_index, for a single curve.
AsrsIndex build_asrs_index(const Curve& p, std::size_t k, double delta, double eps,
                           std::uint64_t budget = kDefaultBudget);

struct AsrsQueryOutcome {
  bool outside_grid = false;
  std::vector<SubcurveRange> ranges;
};

/** Rounds q like the asymmetric query and returns the stored ranges. Every
 *  returned range's subcurve is within (1 + eps) * delta of q; whenever some
 *  subcurve of p is within delta of q, at least one range is returned. */
AsrsQueryOutcome query_asrs(const AsrsIndex& index, const Curve& q, QueryStats* stats = nullptr);

}  // namespace curvegrid
