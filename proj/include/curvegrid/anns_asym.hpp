#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvegrid/geometry.hpp"
#include "curvegrid/grid.hpp"
#include "curvegrid/stats.hpp"

namespace curvegrid {

struct AsymParams {
  double delta = 0.0;
  double eps = 0.0;
  std::size_t k = 0;  // query vertex count
  std::size_t dim = 0;
  Metric metric = Metric::continuous;
};

/// Grid sizing shared by the fixed-size-query indexes: a hypercube of side
/// 2L centered at the first input vertex, cell eps*delta/(2*sqrt(d)), with
/// L = 4*delta when the 2-approximate diameter D' is at most delta and
/// L = 4*delta*D'/eps otherwise.
struct IndexGridDerivation {
  Grid grid;
  double diameter_estimate = 0.0;       // D', seeded at vertices[0]
  std::uint64_t lattice_point_count = 0;  // (cells_per_axis + 1)^dim, saturating
};

IndexGridDerivation derive_index_grid(const std::vector<Point>& vertices, double delta,
                                      double eps);

/** Near-neighbor index for queries with exactly k vertices. Buckets map the
 *  key of every candidate grid sequence to the ids of curves within
 *  (1 + eps/2) * delta of it. */
struct AsymIndex {
  AsymParams params;
  Grid grid;
  double diameter_estimate = 0.0;
  std::uint64_t lattice_point_count = 0;
  std::uint64_t path_capacity = 0;  // lattice_point_count^k, saturating
  std::map<std::string, std::vector<std::string>> buckets;
  std::map<std::string, Curve> curve_catalog;  // kept in memory, not serialized
};

/** Builds the index by enumerating every grid sequence of length k and
 *  testing each input curve against it at (1 + eps/2) * delta under the
 *  chosen metric.
 *
 *  Requires delta > 0, 0 < eps <= delta, k >= 1, a non-empty curve set with
 *  uniform dimension and unique ids. Throws budget_exceeded before any
 *  enumeration when lattice_point_count^k exceeds the budget. */
AsymIndex build_asym_index(const std::vector<Curve>& curves, std::size_t k, double delta,
                           double eps, std::uint64_t budget = kDefaultBudget,
                           Metric metric = Metric::continuous);

/** Query outcome. When a query vertex falls outside the grid the query is
 *  rejected, which certifies every indexed curve is farther than delta. */
struct AsymQueryOutcome {
  bool outside_grid = false;
  std::vector<std::string> ids;  // sorted
};

/** Rounds each query vertex to the lattice and returns the bucket under the
 *  resulting key. Exactly k*dim coordinate roundings, one key build and one
 *  lookup; see QueryStats. Requires |q| == k (query_size_mismatch) and
 *  matching dimension.
 *
 *  Every returned id is within (1 + eps) * delta of q; every curve within
 *  delta of q is returned. */
AsymQueryOutcome query_asym(const AsymIndex& index, const Curve& q, QueryStats* stats = nullptr);

}  // namespace curvegrid
