#include "curvegrid/anns_asym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvegrid/errors.hpp"

namespace curvegrid {

namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= base;
  }
  return out;
}

void validate_curve_set(const std::vector<Curve>& curves) {
  if (curves.empty()) throw empty_input("index build: no curves");
  const std::size_t d = curves.front().dim();
  for (const Curve& c : curves) {
    if (c.vertices.empty()) throw invalid_parameter("index build: curve without vertices");
    if (c.dim() != d) throw dimension_mismatch("index build: mixed curve dimensions");
    for (const Point& v : c.vertices) {
      if (v.size() != d) throw dimension_mismatch("index build: ragged curve");
    }
  }
}

}  // namespace

IndexGridDerivation derive_index_grid(const std::vector<Point>& vertices, double delta,
                                      double eps) {
  if (vertices.empty()) throw empty_input("derive_index_grid: no vertices");
  if (!(delta > 0.0)) throw invalid_parameter("delta must be positive");
  if (!(eps > 0.0) || eps > delta) throw invalid_parameter("eps must satisfy 0 < eps <= delta");

  IndexGridDerivation out;
  out.diameter_estimate = approx_diameter(vertices, 0);
  const double d = static_cast<double>(vertices.front().size());
  const double ell = eps * delta / (2.0 * std::sqrt(d));
  const double big_l =
      out.diameter_estimate <= delta ? 4.0 * delta : 4.0 * delta * out.diameter_estimate / eps;
  out.grid = build_grid(vertices.front(), 2.0 * big_l, ell);
  out.lattice_point_count =
      saturating_pow(static_cast<std::uint64_t>(out.grid.cells_per_axis) + 1,
                     vertices.front().size());
  return out;
}

AsymIndex build_asym_index(const std::vector<Curve>& curves, std::size_t k, double delta,
                           double eps, std::uint64_t budget, Metric metric) {
  validate_curve_set(curves);
  if (k == 0) throw invalid_parameter("build_asym_index: k must be at least 1");

  AsymIndex index;
  for (const Curve& c : curves) {
    if (!index.curve_catalog.emplace(c.id, c).second) {
      throw invalid_parameter("build_asym_index: duplicate curve id '" + c.id + "'");
    }
  }

  std::vector<Point> vertices;
  for (const Curve& c : curves) {
    vertices.insert(vertices.end(), c.vertices.begin(), c.vertices.end());
  }
  IndexGridDerivation derived = derive_index_grid(vertices, delta, eps);

  index.params = AsymParams{delta, eps, k, curves.front().dim(), metric};
  index.grid = std::move(derived.grid);
  index.diameter_estimate = derived.diameter_estimate;
  index.lattice_point_count = derived.lattice_point_count;
  index.path_capacity = saturating_pow(index.lattice_point_count, k);
  if (index.path_capacity > budget) {
    throw budget_exceeded("build_asym_index: grid sequence count exceeds budget",
                          index.path_capacity, budget);
  }

  const std::vector<LatticePoint> lattice = all_lattice_points(index.grid);
  const std::vector<std::span<const LatticePoint>> sets(
      k, std::span<const LatticePoint>(lattice));

  const double threshold = (1.0 + eps / 2.0) * delta;
  const double threshold2 = threshold * threshold;
  const Point min_corner = index.grid.min_corner();
  const std::size_t d = index.params.dim;

  Curve candidate;
  candidate.vertices.assign(k, Point(d));
  std::vector<std::string> matched;
  enumerate_paths(sets, budget, [&](const std::vector<LatticePoint>& path) {
    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t c = 0; c < d; ++c) {
        candidate.vertices[v][c] =
            min_corner[c] + index.grid.cell * static_cast<double>(path[v][c]);
      }
    }
    matched.clear();
    for (const Curve& p : curves) {
      // Both metrics couple first with first and last with last.
      if (squared_distance(p.vertices.front(), candidate.vertices.front()) > threshold2) continue;
      if (squared_distance(p.vertices.back(), candidate.vertices.back()) > threshold2) continue;
      if (frechet_within(p, candidate, threshold, metric)) matched.push_back(p.id);
    }
    if (!matched.empty()) {
      std::sort(matched.begin(), matched.end());
      index.buckets.emplace(path_key(path), matched);
    }
  });
  return index;
}

AsymQueryOutcome query_asym(const AsymIndex& index, const Curve& q, QueryStats* stats) {
  if (q.size() != index.params.k) {
    throw query_size_mismatch("query_asym: query must have exactly k vertices");
  }
  if (q.dim() != index.params.dim) {
    throw dimension_mismatch("query_asym: query dimension differs from index");
  }

  std::vector<LatticePoint> path;
  path.reserve(q.size());
  for (const Point& v : q.vertices) {
    auto a = round_to_lattice(index.grid, v, stats ? &stats->coordinate_roundings : nullptr);
    if (!a) return AsymQueryOutcome{true, {}};
    path.push_back(std::move(*a));
  }

  const std::string key = path_key(path);
  if (stats) ++stats->key_builds;
  AsymQueryOutcome out;
  auto it = index.buckets.find(key);
  if (stats) ++stats->bucket_lookups;
  if (it != index.buckets.end()) out.ids = it->second;
  return out;
}

}  // namespace curvegrid
