#include "curvegrid/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "curvegrid/errors.hpp"

namespace curvegrid {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

void append_int(std::string& out, std::int64_t v) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

}  // namespace

Point Grid::min_corner() const {
  Point m(origin);
  for (double& x : m) x -= side / 2.0;
  return m;
}

bool Grid::contains(const Point& q) const {
  if (q.size() != dim()) throw dimension_mismatch("grid and point dimensions differ");
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double lo = origin[i] - side / 2.0;
    if (q[i] < lo || q[i] > lo + side) return false;
  }
  return true;
}

Grid build_grid(const Point& center, double side, double cell) {
  if (center.empty()) throw empty_input("build_grid: empty center");
  if (!(cell > 0.0)) throw invalid_parameter("build_grid: cell must be positive");
  if (!(side >= cell)) throw invalid_parameter("build_grid: side must be at least one cell");
  Grid g;
  g.origin = center;
  g.side = side;
  g.cell = cell;
  g.cells_per_axis = static_cast<std::int64_t>(std::ceil(side / cell));
  return g;
}

std::optional<LatticePoint> round_to_lattice(const Grid& g, const Point& q,
                                             std::uint64_t* rounding_ops) {
  if (!g.contains(q)) return std::nullopt;
  LatticePoint a(g.dim());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double lo = g.origin[i] - g.side / 2.0;
    auto c = static_cast<std::int64_t>(std::floor((q[i] - lo) / g.cell));
    a[i] = std::clamp<std::int64_t>(c, 0, g.cells_per_axis);
    if (rounding_ops) ++*rounding_ops;
  }
  return a;
}

Point lattice_to_point(const Grid& g, const LatticePoint& a) {
  if (a.size() != g.dim()) throw dimension_mismatch("lattice point has wrong dimension");
  Point p = g.min_corner();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] > g.cells_per_axis) {
      throw out_of_bounds("lattice coordinate outside the bounded grid");
    }
    p[i] += g.cell * static_cast<double>(a[i]);
  }
  return p;
}

std::vector<LatticePoint> all_lattice_points(const Grid& g) {
  const std::size_t d = g.dim();
  std::vector<LatticePoint> out;
  LatticePoint a(d, 0);
  while (true) {
    out.push_back(a);
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++a[pos] <= g.cells_per_axis) break;
      a[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

Point unbounded_lattice_point(const LatticePoint& a, double cell) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = cell * static_cast<double>(a[i]);
  return p;
}

std::vector<LatticePoint> ball_lattice_points(const Point& center, double radius, double cell) {
  if (center.empty()) throw empty_input("ball_lattice_points: empty center");
  if (!(cell > 0.0)) throw invalid_parameter("ball_lattice_points: cell must be positive");
  if (radius < 0.0) throw invalid_parameter("ball_lattice_points: negative radius");
  const std::size_t d = center.size();
  std::vector<std::int64_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::ceil((center[i] - radius) / cell));
    hi[i] = static_cast<std::int64_t>(std::floor((center[i] + radius) / cell));
    if (lo[i] > hi[i]) return {};
  }
  const double r2 = radius * radius;
  std::vector<LatticePoint> out;
  LatticePoint a(lo);
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = cell * static_cast<double>(a[i]) - center[i];
      s += diff * diff;
    }
    if (s <= r2) out.push_back(a);
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++a[pos] <= hi[pos]) break;
      a[pos] = lo[pos];
      if (pos == 0) return out;
    }
  }
}

std::string path_key(std::span<const LatticePoint> path) {
  std::string key;
  key.reserve(path.size() * 8);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) key.push_back('|');
    const LatticePoint& a = path[i];
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (c) key.push_back(',');
      append_int(key, a[c]);
    }
  }
  return key;
}

std::vector<LatticePoint> parse_path_key(const std::string& key) {
  std::vector<LatticePoint> path;
  LatticePoint current;
  const char* p = key.data();
  const char* end = p + key.size();
  while (p < end) {
    std::int64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) throw invalid_parameter("malformed path key");
    current.push_back(v);
    p = next;
    if (p == end) break;
    if (*p == ',') {
      ++p;
    } else if (*p == '|') {
      path.push_back(std::move(current));
      current.clear();
      ++p;
    } else {
      throw invalid_parameter("malformed path key");
    }
    // A separator must be followed by another coordinate.
    if (p == end) throw invalid_parameter("malformed path key");
  }
  if (current.empty()) throw invalid_parameter("malformed path key");
  path.push_back(std::move(current));
  return path;
}

std::uint64_t count_paths(std::span<const std::span<const LatticePoint>> point_sets) {
  std::uint64_t total = 1;
  for (const auto& s : point_sets) total = saturating_mul(total, s.size());
  return total;
}

void enumerate_paths(std::span<const std::span<const LatticePoint>> point_sets,
                     std::uint64_t budget,
                     const std::function<void(const std::vector<LatticePoint>&)>& fn) {
  if (point_sets.empty()) throw invalid_parameter("enumerate_paths: no point sets");
  for (const auto& s : point_sets) {
    if (s.empty()) throw invalid_parameter("enumerate_paths: empty point set");
  }
  const std::uint64_t total = count_paths(point_sets);
  if (total > budget) {
    throw budget_exceeded("enumerate_paths: sequence count exceeds budget", total, budget);
  }

  const std::size_t k = point_sets.size();
  // Per-set orderings so the stream is lexicographic even for unsorted input.
  std::vector<std::vector<std::size_t>> order(k);
  for (std::size_t i = 0; i < k; ++i) {
    order[i].resize(point_sets[i].size());
    std::iota(order[i].begin(), order[i].end(), 0);
    if (!std::is_sorted(point_sets[i].begin(), point_sets[i].end())) {
      std::sort(order[i].begin(), order[i].end(), [&](std::size_t a, std::size_t b) {
        return point_sets[i][a] < point_sets[i][b];
      });
    }
  }

  std::vector<std::size_t> idx(k, 0);
  std::vector<LatticePoint> buffer(k);
  for (std::size_t i = 0; i < k; ++i) buffer[i] = point_sets[i][order[i][0]];
  while (true) {
    fn(buffer);
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < point_sets[pos].size()) {
        buffer[pos] = point_sets[pos][order[pos][idx[pos]]];
        break;
      }
      idx[pos] = 0;
      buffer[pos] = point_sets[pos][order[pos][0]];
      if (pos == 0) return;
    }
  }
}

}  // namespace curvegrid
