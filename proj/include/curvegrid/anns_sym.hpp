#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvegrid/geometry.hpp"
#include "curvegrid/grid.hpp"
#include "curvegrid/stats.hpp"

namespace curvegrid {

struct SymParams {
  double delta = 0.0;
  double eps = 0.0;
  std::size_t dim = 0;  // 0 when built from an empty curve set
};

/// Quantities derived from (delta, eps) for the symmetric index. The
/// construction runs at eps_internal = eps / 3 so the advertised
/// (5 + eps) * delta bound holds end to end.
struct SymDerived {
  double eps_internal = 0.0;
  double cell = 0.0;           // eps_internal * delta / (2 * sqrt(d))
  double radius_outer = 0.0;   // 3 * (1 + eps_internal / 2) * delta
  double radius_marked = 0.0;  // (1 + eps_internal / 2) * delta
  double mu = 0.0;             // 2 * (1 + eps_internal / 2) * delta
};

SymDerived sym_derived(double delta, double eps, std::size_t dim);

/** Symmetric near-neighbor index under the discrete Frechet distance.
 *  Queries may have any vertex count. Each curve owns one bucket per
 *  sequence that picks a lattice point within radius_outer of each of its
 *  vertices, keyed with consecutive repeated picks collapsed; the query is
 *  rounded to the same unbounded lattice and mu-simplified before its
 *  single lookup. */
struct SymIndex {
  SymParams params;
  SymDerived derived;
  std::map<std::string, std::size_t> curve_meta;  // id -> vertex count
  std::map<std::string, std::vector<std::string>> buckets;
  std::map<std::string, Curve> curve_catalog;  // kept in memory, not serialized
};

/** Requires delta > 0, eps > 0; the curve set may be empty. The per-curve
 *  sequence count (the product of its per-vertex ball sizes) is checked
 *  against the budget before that curve is enumerated. */
SymIndex build_sym_index(const std::vector<Curve>& curves, double delta, double eps,
                         std::uint64_t budget = kDefaultBudget);

/** The lattice path a query is looked up under: per-coordinate floor
 *  rounding onto the unbounded lattice, then mu-simplification of the
 *  embedded path with a trailing kept vertex dropped when it stayed within
 *  mu of its predecessor. Every edge of the result is longer than mu.
 *  Exposed so tests can check the simplified path's edge lengths. */
std::vector<LatticePoint> sym_query_path(const SymIndex& index, const Curve& q,
                                         QueryStats* stats = nullptr);

/** Returns the bucket under the query's simplified lattice path key.
 *  Every returned id has discrete Frechet distance at most
 *  (5 + eps) * delta from q; every id not returned is farther than delta. */
std::vector<std::string> query_sym(const SymIndex& index, const Curve& q,
                                   QueryStats* stats = nullptr);

}  // namespace curvegrid
