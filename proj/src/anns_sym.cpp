#include "curvegrid/anns_sym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "curvegrid/errors.hpp"

namespace curvegrid {

SymDerived sym_derived(double delta, double eps, std::size_t dim) {
  if (!(delta > 0.0)) throw invalid_parameter("delta must be positive");
  if (!(eps > 0.0)) throw invalid_parameter("eps must be positive");
  if (dim == 0) throw invalid_parameter("sym_derived: dimension must be positive");
  SymDerived d;
  d.eps_internal = eps / 3.0;
  d.cell = d.eps_internal * delta / (2.0 * std::sqrt(static_cast<double>(dim)));
  d.radius_marked = (1.0 + d.eps_internal / 2.0) * delta;
  d.radius_outer = 3.0 * d.radius_marked;
  d.mu = 2.0 * d.radius_marked;
  return d;
}

SymIndex build_sym_index(const std::vector<Curve>& curves, double delta, double eps,
                         std::uint64_t budget) {
  if (!(delta > 0.0)) throw invalid_parameter("delta must be positive");
  if (!(eps > 0.0)) throw invalid_parameter("eps must be positive");

  SymIndex index;
  index.params = SymParams{delta, eps, 0};
  if (curves.empty()) return index;

  const std::size_t d = curves.front().dim();
  for (const Curve& c : curves) {
    if (c.vertices.empty()) throw invalid_parameter("build_sym_index: curve without vertices");
    if (c.dim() != d) throw dimension_mismatch("build_sym_index: mixed curve dimensions");
    for (const Point& v : c.vertices) {
      if (v.size() != d) throw dimension_mismatch("build_sym_index: ragged curve");
    }
    if (!index.curve_catalog.emplace(c.id, c).second) {
      throw invalid_parameter("build_sym_index: duplicate curve id '" + c.id + "'");
    }
  }
  index.params.dim = d;
  index.derived = sym_derived(delta, eps, d);

  // Curves are ingested in id order so every bucket's id list accumulates
  // already sorted; keys are staged per curve to keep peak memory at the
  // largest single enumeration rather than the whole index.
  std::vector<std::size_t> order(curves.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return curves[a].id < curves[b].id; });

  std::vector<std::string> keys;
  std::vector<LatticePoint> collapsed;
  for (std::size_t ci : order) {
    const Curve& c = curves[ci];
    std::vector<std::vector<LatticePoint>> balls;
    balls.reserve(c.size());
    for (const Point& v : c.vertices) {
      balls.push_back(ball_lattice_points(v, index.derived.radius_outer, index.derived.cell));
    }
    std::vector<std::span<const LatticePoint>> sets(balls.begin(), balls.end());
    // Keys collapse consecutive repeated picks: a short query path must be
    // able to hit a bucket produced by a longer curve whose neighboring
    // vertices share one lattice point.
    keys.clear();
    enumerate_paths(sets, budget, [&](const std::vector<LatticePoint>& path) {
      collapsed.clear();
      for (const LatticePoint& p : path) {
        if (collapsed.empty() || collapsed.back() != p) collapsed.push_back(p);
      }
      keys.push_back(path_key(collapsed));
    });
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (std::string& key : keys) index.buckets[std::move(key)].push_back(c.id);
    index.curve_meta.emplace(c.id, c.size());
  }
  return index;
}

std::vector<LatticePoint> sym_query_path(const SymIndex& index, const Curve& q,
                                         QueryStats* stats) {
  if (q.vertices.empty()) throw empty_input("sym query: empty curve");
  if (index.params.dim == 0) throw invalid_parameter("sym query path: empty index has no lattice");
  if (q.dim() != index.params.dim) {
    throw dimension_mismatch("sym query: dimension differs from index");
  }
  const double cell = index.derived.cell;

  Curve rounded;
  rounded.vertices.reserve(q.size());
  std::vector<LatticePoint> coords;
  coords.reserve(q.size());
  for (const Point& v : q.vertices) {
    LatticePoint a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      a[i] = static_cast<std::int64_t>(std::floor(v[i] / cell));
      if (stats) ++stats->coordinate_roundings;
    }
    rounded.vertices.push_back(unbounded_lattice_point(a, cell));
    coords.push_back(std::move(a));
  }

  std::vector<std::size_t> kept_idx = simplify_mu_indices(rounded, index.derived.mu);
  // simplify_mu keeps the final vertex even when it never left the last
  // ball; that trailing vertex would lengthen the key without carrying
  // information, so it is dropped before the lookup.
  if (kept_idx.size() >= 2) {
    const Point& last = rounded.vertices[kept_idx[kept_idx.size() - 1]];
    const Point& prev = rounded.vertices[kept_idx[kept_idx.size() - 2]];
    if (distance(last, prev) <= index.derived.mu) kept_idx.pop_back();
  }
  std::vector<LatticePoint> kept;
  kept.reserve(kept_idx.size());
  for (std::size_t i : kept_idx) kept.push_back(coords[i]);
  return kept;
}

std::vector<std::string> query_sym(const SymIndex& index, const Curve& q, QueryStats* stats) {
  if (index.params.dim == 0) {
    if (q.vertices.empty()) throw empty_input("sym query: empty curve");
    return {};
  }
  const std::vector<LatticePoint> path = sym_query_path(index, q, stats);
  const std::string key = path_key(path);
  if (stats) ++stats->key_builds;
  auto it = index.buckets.find(key);
  if (stats) ++stats->bucket_lookups;
  if (it == index.buckets.end()) return {};
  return it->second;
}

}  // namespace curvegrid
