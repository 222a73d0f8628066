#include "curvegrid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvegrid/errors.hpp"

namespace curvegrid {

namespace {

constexpr double kDiscriminantTolerance = 1e-12;

void require_same_dim(const Curve& p, const Curve& q) {
  if (p.dim() != q.dim()) {
    throw dimension_mismatch("curves have different coordinate dimensions");
  }
}

void require_nonempty(const Curve& c) {
  if (c.vertices.empty()) throw empty_input("curve has no vertices");
}

Interval empty_interval() { return Interval{1.0, 0.0}; }

Interval clip(Interval iv) { return iv.empty() ? empty_interval() : iv; }

}  // namespace

double squared_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw dimension_mismatch("points have different coordinate dimensions");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

Point point_at(const Curve& c, double s) {
  require_nonempty(c);
  const double last = static_cast<double>(c.size());
  s = std::clamp(s, 1.0, last);
  const std::size_t edge =
      static_cast<std::size_t>(std::min(std::floor(s - 1.0), static_cast<double>(c.size() - 1)));
  if (edge + 1 >= c.size()) return c.vertices.back();
  const double t = s - 1.0 - static_cast<double>(edge);
  Point out(c.dim());
  const Point& a = c.vertices[edge];
  const Point& b = c.vertices[edge + 1];
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

Curve curve_slice(const Curve& c, double s1, double s2) {
  require_nonempty(c);
  if (s1 > s2) throw invalid_parameter("curve_slice: start parameter after end");
  Curve out;
  out.id = c.id;
  out.vertices.push_back(point_at(c, s1));
  const double first_inner = std::floor(s1) + 1.0;
  for (double s = first_inner; s < s2; s += 1.0) {
    if (s > s1 && s >= 1.0 && s <= static_cast<double>(c.size())) {
      out.vertices.push_back(c.vertices[static_cast<std::size_t>(s) - 1]);
    }
  }
  if (s2 > s1) out.vertices.push_back(point_at(c, s2));
  return out;
}

double discrete_frechet(const Curve& p, const Curve& q) {
  require_nonempty(p);
  require_nonempty(q);
  require_same_dim(p, q);
  const std::size_t m = p.size();
  const std::size_t k = q.size();
  std::vector<double> prev(k), cur(k);
  prev[0] = squared_distance(p.vertices[0], q.vertices[0]);
  for (std::size_t j = 1; j < k; ++j) {
    prev[j] = std::max(prev[j - 1], squared_distance(p.vertices[0], q.vertices[j]));
  }
  for (std::size_t i = 1; i < m; ++i) {
    cur[0] = std::max(prev[0], squared_distance(p.vertices[i], q.vertices[0]));
    for (std::size_t j = 1; j < k; ++j) {
      const double reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(squared_distance(p.vertices[i], q.vertices[j]), reach);
    }
    std::swap(prev, cur);
  }
  return std::sqrt(prev[k - 1]);
}

Interval segment_ball_intersection(const Point& a, const Point& b, const Point& center,
                                   double radius) {
  if (a.size() != b.size() || a.size() != center.size()) {
    throw dimension_mismatch("segment_ball_intersection: mixed dimensions");
  }
  double aa = 0.0, bb = 0.0, cc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = b[i] - a[i];
    const double v = a[i] - center[i];
    aa += u * u;
    bb += 2.0 * u * v;
    cc += v * v;
  }
  cc -= radius * radius;
  if (aa == 0.0) {
    // Degenerate edge: free everywhere or nowhere.
    return cc <= 0.0 ? Interval{0.0, 1.0} : empty_interval();
  }
  double disc = bb * bb - 4.0 * aa * cc;
  if (disc < 0.0) {
    const double scale = std::max(bb * bb, std::abs(4.0 * aa * cc));
    if (disc < -kDiscriminantTolerance * scale) return empty_interval();
    disc = 0.0;  // tangency within round-off
  }
  const double root = std::sqrt(disc);
  const double t1 = (-bb - root) / (2.0 * aa);
  const double t2 = (-bb + root) / (2.0 * aa);
  const Interval iv{std::max(t1, 0.0), std::min(t2, 1.0)};
  return clip(iv);
}

bool continuous_frechet_decide(const Curve& p, const Curve& q, double delta) {
  require_nonempty(p);
  require_nonempty(q);
  require_same_dim(p, q);
  if (delta < 0.0) throw invalid_parameter("delta must be non-negative");
  const double d2 = delta * delta;

  if (squared_distance(p.vertices.front(), q.vertices.front()) > d2) return false;
  if (squared_distance(p.vertices.back(), q.vertices.back()) > d2) return false;

  // A single point is within delta of a curve iff every vertex is: the
  // distance to a fixed point is convex along each edge.
  if (p.size() == 1) {
    for (const Point& v : q.vertices) {
      if (squared_distance(p.vertices.front(), v) > d2) return false;
    }
    return true;
  }
  if (q.size() == 1) {
    for (const Point& v : p.vertices) {
      if (squared_distance(q.vertices.front(), v) > d2) return false;
    }
    return true;
  }

  const std::size_t rows = p.size() - 1;
  const std::size_t cols = q.size() - 1;

  // reach[i]: reachable part of the vertical boundary on P-edge i at the
  // current Q vertex; always a suffix [lo, hi] of the free interval there.
  std::vector<Interval> reach(rows, empty_interval());
  bool boundary_alive = true;  // left/bottom boundary chains start at (0, 0)
  for (std::size_t i = 0; i < rows; ++i) {
    const Interval f =
        segment_ball_intersection(p.vertices[i], p.vertices[i + 1], q.vertices[0], delta);
    if (boundary_alive && !f.empty() && f.lo <= 0.0) {
      reach[i] = Interval{0.0, f.hi};
      boundary_alive = f.hi >= 1.0;
    } else {
      boundary_alive = false;
    }
  }

  bool bottom_alive = true;
  std::vector<Interval> next(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    Interval bottom = empty_interval();
    const Interval h0 =
        segment_ball_intersection(q.vertices[j], q.vertices[j + 1], p.vertices[0], delta);
    if (bottom_alive && !h0.empty() && h0.lo <= 0.0) {
      bottom = Interval{0.0, h0.hi};
      bottom_alive = h0.hi >= 1.0;
    } else {
      bottom_alive = false;
    }

    bool any = bottom_alive || !bottom.empty();
    for (std::size_t i = 0; i < rows; ++i) {
      const Interval right_free =
          segment_ball_intersection(p.vertices[i], p.vertices[i + 1], q.vertices[j + 1], delta);
      Interval right = empty_interval();
      if (!bottom.empty()) {
        right = right_free;
      } else if (!reach[i].empty()) {
        right = clip(Interval{std::max(right_free.lo, reach[i].lo), right_free.hi});
      }

      const Interval top_free =
          segment_ball_intersection(q.vertices[j], q.vertices[j + 1], p.vertices[i + 1], delta);
      Interval top = empty_interval();
      if (!reach[i].empty()) {
        top = top_free;
      } else if (!bottom.empty()) {
        top = clip(Interval{std::max(top_free.lo, bottom.lo), top_free.hi});
      }

      next[i] = right;
      bottom = top;
      any = any || !right.empty() || !top.empty();
    }
    reach.swap(next);
    if (!any) return false;
  }
  return !reach[rows - 1].empty() && reach[rows - 1].hi >= 1.0;
}

bool frechet_within(const Curve& p, const Curve& q, double delta, Metric metric) {
  if (metric == Metric::continuous) return continuous_frechet_decide(p, q, delta);
  return discrete_frechet(p, q) <= delta;
}

std::vector<std::size_t> simplify_mu_indices(const Curve& p, double mu) {
  require_nonempty(p);
  if (mu < 0.0) throw invalid_parameter("mu must be non-negative");
  const double mu2 = mu * mu;
  std::vector<std::size_t> kept{0};
  std::size_t current = 0;
  std::size_t scan = 1;
  while (scan < p.size()) {
    std::size_t found = p.size();
    for (std::size_t j = scan; j < p.size(); ++j) {
      if (squared_distance(p.vertices[j], p.vertices[current]) > mu2) {
        found = j;
        break;
      }
    }
    if (found == p.size()) break;
    kept.push_back(found);
    current = found;
    scan = found + 1;
  }
  if (kept.back() != p.size() - 1) kept.push_back(p.size() - 1);
  return kept;
}

Curve simplify_mu(const Curve& p, double mu) {
  Curve out;
  out.id = p.id;
  for (std::size_t i : simplify_mu_indices(p, mu)) out.vertices.push_back(p.vertices[i]);
  return out;
}

double approx_diameter(const std::vector<Point>& points, std::size_t seed_index) {
  if (points.empty()) throw empty_input("approx_diameter: empty point set");
  if (seed_index >= points.size()) throw invalid_parameter("approx_diameter: bad seed index");
  double best = 0.0;
  for (const Point& v : points) best = std::max(best, squared_distance(points[seed_index], v));
  return std::sqrt(best);
}

FreeSpace compute_free_space(const Curve& p, const Curve& c, double threshold) {
  require_nonempty(p);
  require_nonempty(c);
  require_same_dim(p, c);
  if (threshold < 0.0) throw invalid_parameter("threshold must be non-negative");
  FreeSpace fs;
  fs.p_size = p.size();
  fs.c_size = c.size();
  fs.threshold = threshold;
  if (fs.p_size > 1) {
    fs.vert.resize((fs.p_size - 1) * fs.c_size);
    for (std::size_t j = 0; j < fs.c_size; ++j) {
      for (std::size_t i = 0; i + 1 < fs.p_size; ++i) {
        fs.vert[j * (fs.p_size - 1) + i] =
            segment_ball_intersection(p.vertices[i], p.vertices[i + 1], c.vertices[j], threshold);
      }
    }
  }
  if (fs.c_size > 1) {
    fs.horz.resize(fs.p_size * (fs.c_size - 1));
    for (std::size_t i = 0; i < fs.p_size; ++i) {
      for (std::size_t j = 0; j + 1 < fs.c_size; ++j) {
        fs.horz[i * (fs.c_size - 1) + j] =
            segment_ball_intersection(c.vertices[j], c.vertices[j + 1], p.vertices[i], threshold);
      }
    }
  }
  return fs;
}

}  // namespace curvegrid
