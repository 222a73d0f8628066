#include "curvegrid/asrs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>

#include "curvegrid/errors.hpp"

namespace curvegrid {

namespace {

Interval empty_interval() { return Interval{1.0, 0.0}; }

Interval clip(Interval iv) { return iv.empty() ? empty_interval() : iv; }

double quantize15(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return std::strtod(buf, nullptr);
}

/// Monotone reachability, column by column. `left` is the reachable part of
/// each left-boundary row (a suffix of its free interval); `bottom_alive`
/// says paths may enter the diagram's bottom boundary at its left corner.
/// Returns reach on the right boundary rows. Requires p_size, c_size >= 2.
std::vector<Interval> propagate(const FreeSpace& fs, std::vector<Interval> reach,
                                bool bottom_alive) {
  const std::size_t rows = fs.p_size - 1;
  const std::size_t cols = fs.c_size - 1;
  std::vector<Interval> next(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    Interval bottom = empty_interval();
    const Interval& h0 = fs.horizontal(0, j);
    if (bottom_alive && !h0.empty() && h0.lo <= 0.0) {
      bottom = Interval{0.0, h0.hi};
      bottom_alive = h0.hi >= 1.0;
    } else {
      bottom_alive = false;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const Interval& right_free = fs.vertical(i, j + 1);
      Interval right = empty_interval();
      if (!bottom.empty()) {
        right = right_free;
      } else if (!reach[i].empty()) {
        right = clip(Interval{std::max(right_free.lo, reach[i].lo), right_free.hi});
      }
      const Interval& top_free = fs.horizontal(i + 1, j);
      Interval top = empty_interval();
      if (!reach[i].empty()) {
        top = top_free;
      } else if (!bottom.empty()) {
        top = clip(Interval{std::max(top_free.lo, bottom.lo), top_free.hi});
      }
      next[i] = right;
      bottom = top;
    }
    reach.swap(next);
  }
  return reach;
}

/// A point on the left or right boundary: row index plus local offset.
struct BoundaryPos {
  std::size_t row = 0;
  double local = 0.0;
  double global = 0.0;  // 1-based curve parameter
};

/// Maximal free interval of the left boundary, merged across rows that touch
/// at shared vertices.
struct Chain {
  std::size_t row_lo = 0;
  std::size_t row_hi = 0;
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<Chain> left_boundary_chains(const FreeSpace& fs) {
  const std::size_t rows = fs.p_size - 1;
  std::vector<Chain> chains;
  bool open = false;
  for (std::size_t i = 0; i < rows; ++i) {
    const Interval& f = fs.vertical(i, 0);
    if (f.empty()) {
      open = false;
      continue;
    }
    const double glo = 1.0 + static_cast<double>(i) + f.lo;
    const double ghi = 1.0 + static_cast<double>(i) + f.hi;
    if (open && f.lo <= 0.0) {
      chains.back().row_hi = i;
      chains.back().hi = ghi;
    } else {
      chains.push_back(Chain{i, i, glo, ghi});
    }
    open = f.hi >= 1.0;
  }
  return chains;
}

/// Per-row prefix of the left boundary from which the right boundary is
/// monotonically reachable. Computed with one reversed multi-source pass.
std::vector<Interval> coreach_rows(const Curve& p, const Curve& c, double threshold) {
  Curve rp, rc;
  rp.vertices.assign(p.vertices.rbegin(), p.vertices.rend());
  rc.vertices.assign(c.vertices.rbegin(), c.vertices.rend());
  const FreeSpace fsr = compute_free_space(rp, rc, threshold);
  const std::size_t rows = fsr.p_size - 1;

  std::vector<Interval> init(rows);
  for (std::size_t i = 0; i < rows; ++i) init[i] = fsr.vertical(i, 0);
  const bool alive = !init[0].empty() && init[0].lo <= 0.0;
  const std::vector<Interval> rr = propagate(fsr, std::move(init), alive);

  std::vector<Interval> co(rows, empty_interval());
  for (std::size_t ri = 0; ri < rows; ++ri) {
    if (rr[ri].empty()) continue;
    co[rows - 1 - ri] = Interval{1.0 - rr[ri].hi, 1.0 - rr[ri].lo};
  }
  return co;
}

/// Earliest right-boundary parameter reachable from the given left-boundary
/// start, or nullopt when the right boundary is unreachable.
std::optional<double> min_reachable_end(const FreeSpace& fs, const BoundaryPos& start) {
  const std::size_t rows = fs.p_size - 1;
  std::vector<Interval> init(rows, empty_interval());
  {
    const Interval& f = fs.vertical(start.row, 0);
    if (f.empty()) return std::nullopt;
    const double lo = std::min(std::max(f.lo, start.local), f.hi);
    init[start.row] = Interval{lo, f.hi};
  }
  for (std::size_t i = start.row; init[i].hi >= 1.0 && i + 1 < rows; ++i) {
    const Interval& f = fs.vertical(i + 1, 0);
    if (f.empty() || f.lo > 0.0) break;
    init[i + 1] = Interval{0.0, f.hi};
  }
  const bool alive = start.row == 0 && start.local <= 0.0;
  const std::vector<Interval> rr = propagate(fs, std::move(init), alive);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!rr[i].empty()) return 1.0 + static_cast<double>(i) + rr[i].lo;
  }
  return std::nullopt;
}

}  // namespace

std::string range_text(const SubcurveRange& r) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.15g:%.15g", r.start, r.end);
  return buf;
}

SubcurveRange parse_range_text(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw invalid_parameter("malformed range text");
  char* end = nullptr;
  SubcurveRange r;
  r.start = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + colon) throw invalid_parameter("malformed range text");
  r.end = std::strtod(text.c_str() + colon + 1, &end);
  if (end != text.c_str() + text.size()) throw invalid_parameter("malformed range text");
  return r;
}

std::vector<SubcurveRange> extract_inclusion_minimal(const Curve& p, const Curve& c,
                                                     double threshold) {
  if (p.vertices.empty() || c.vertices.empty()) throw empty_input("extract: empty curve");
  if (p.dim() != c.dim()) throw dimension_mismatch("extract: mixed dimensions");
  if (threshold < 0.0) throw invalid_parameter("extract: negative threshold");
  const double thr2 = threshold * threshold;

  if (p.size() == 1) {
    for (const Point& v : c.vertices) {
      if (squared_distance(p.vertices.front(), v) > thr2) return {};
    }
    return {SubcurveRange{1.0, 1.0}};
  }

  if (c.size() == 1) {
    // Against a single point the minimal subcurves are single points: the
    // top of each maximal free interval along p.
    FreeSpace fs;
    fs.p_size = p.size();
    fs.c_size = 1;
    fs.vert.resize(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      fs.vert[i] = segment_ball_intersection(p.vertices[i], p.vertices[i + 1],
                                             c.vertices.front(), threshold);
    }
    std::vector<SubcurveRange> out;
    for (const Chain& ch : left_boundary_chains(fs)) {
      out.push_back(SubcurveRange{ch.hi, ch.hi});
    }
    return out;
  }

  const FreeSpace fs = compute_free_space(p, c, threshold);
  const std::vector<Chain> chains = left_boundary_chains(fs);
  if (chains.empty()) return {};
  const std::vector<Interval> co = coreach_rows(p, c, threshold);

  std::vector<SubcurveRange> out;
  double prev_end = -std::numeric_limits<double>::infinity();
  for (const Chain& ch : chains) {
    std::optional<BoundaryPos> start;
    for (std::size_t i = ch.row_hi + 1; i-- > ch.row_lo;) {
      if (co[i].empty()) continue;
      const double g = 1.0 + static_cast<double>(i) + co[i].hi;
      if (g > prev_end) start = BoundaryPos{i, co[i].hi, g};
      break;  // lower rows only give smaller starts
    }
    if (!start) continue;
    const std::optional<double> end = min_reachable_end(fs, *start);
    if (!end) continue;
    // The start comes from the reversed pass, whose mirrored arithmetic can
    // leave the forward minimum end a float hair below it; in exact terms
    // end >= start always, so clamping only removes that noise.
    const double hi = std::max(*end, start->global);
    out.push_back(SubcurveRange{start->global, hi});
    prev_end = hi;
  }
  return out;
}

AsrsIndex build_asrs_index(const Curve& p, std::size_t k, double delta, double eps,
                           std::uint64_t budget) {
  if (p.vertices.empty()) throw empty_input("build_asrs_index: empty curve");
  if (k == 0) throw invalid_parameter("build_asrs_index: k must be at least 1");
  for (const Point& v : p.vertices) {
    if (v.size() != p.dim()) throw dimension_mismatch("build_asrs_index: ragged curve");
  }

  IndexGridDerivation derived = derive_index_grid(p.vertices, delta, eps);
  AsrsIndex index;
  index.params = AsrsParams{delta, eps, k, p.dim()};
  index.grid = std::move(derived.grid);
  index.diameter_estimate = derived.diameter_estimate;
  index.lattice_point_count = derived.lattice_point_count;
  index.path_capacity = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (index.lattice_point_count != 0 &&
        index.path_capacity >
            std::numeric_limits<std::uint64_t>::max() / index.lattice_point_count) {
      index.path_capacity = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    index.path_capacity *= index.lattice_point_count;
  }
  index.curve_id = p.id;
  index.curve_size = p.size();
  index.curve = p;
  if (index.path_capacity > budget) {
    throw budget_exceeded("build_asrs_index: grid sequence count exceeds budget",
                          index.path_capacity, budget);
  }

  const std::vector<LatticePoint> lattice = all_lattice_points(index.grid);
  const std::vector<std::span<const LatticePoint>> sets(
      k, std::span<const LatticePoint>(lattice));
  const double threshold = (1.0 + eps / 2.0) * delta;
  const Point min_corner = index.grid.min_corner();
  const std::size_t d = index.params.dim;

  Curve candidate;
  candidate.vertices.assign(k, Point(d));
  enumerate_paths(sets, budget, [&](const std::vector<LatticePoint>& path) {
    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t ci = 0; ci < d; ++ci) {
        candidate.vertices[v][ci] =
            min_corner[ci] + index.grid.cell * static_cast<double>(path[v][ci]);
      }
    }
    std::vector<SubcurveRange> ranges = extract_inclusion_minimal(p, candidate, threshold);
    if (ranges.empty()) return;
    for (SubcurveRange& r : ranges) {
      r.start = quantize15(r.start);
      r.end = quantize15(r.end);
    }
    index.buckets.emplace(path_key(path), std::move(ranges));
  });
  return index;
}

AsrsQueryOutcome query_asrs(const AsrsIndex& index, const Curve& q, QueryStats* stats) {
  if (q.size() != index.params.k) {
    throw query_size_mismatch("query_asrs: query must have exactly k vertices");
  }
  if (q.dim() != index.params.dim) {
    throw dimension_mismatch("query_asrs: query dimension differs from index");
  }
  std::vector<LatticePoint> path;
  path.reserve(q.size());
  for (const Point& v : q.vertices) {
    auto a = round_to_lattice(index.grid, v, stats ? &stats->coordinate_roundings : nullptr);
    if (!a) return AsrsQueryOutcome{true, {}};
    path.push_back(std::move(*a));
  }
  const std::string key = path_key(path);
  if (stats) ++stats->key_builds;
  AsrsQueryOutcome out;
  auto it = index.buckets.find(key);
  if (stats) ++stats->bucket_lookups;
  if (it != index.buckets.end()) out.ranges = it->second;
  return out;
}

}  // namespace curvegrid
