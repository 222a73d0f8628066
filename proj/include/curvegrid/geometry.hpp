#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace curvegrid {

/// A point in d-dimensional Euclidean space. All points combined by an
/// operation must share the same dimension.
using Point = std::vector<double>;

/// A polygonal curve: the ordered vertex sequence plus an opaque id.
/// Parameters along the curve are 1-based reals in [1, size()]; parameter
/// i + t with integer i and t in [0, 1) lies on the edge from vertex i to
/// vertex i + 1 at fraction t.
struct Curve {
  std::string id;
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }
  std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

/// Which Frechet flavor an index or oracle evaluates.
enum class Metric { continuous, discrete };

double squared_distance(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

/// Point on the curve at 1-based parameter s (clamped into [1, size]).
Point point_at(const Curve& c, double s);

/// Subcurve between parameters s1 <= s2: the two cut points plus every
/// original vertex strictly between them.
Curve curve_slice(const Curve& c, double s1, double s2);

/** Discrete Frechet distance: minimum over monotone vertex couplings of the
 *  largest paired vertex distance. Exact dynamic program, O(|P|*|Q|). */
double discrete_frechet(const Curve& p, const Curve& q);

/** Decides whether the continuous Frechet distance is at most delta.
 *  Monotone reachability over the free-space diagram, O(|P|*|Q|*d).
 *  The boundary is inclusive: distance exactly delta counts as within. */
bool continuous_frechet_decide(const Curve& p, const Curve& q, double delta);

/// Metric-dispatching decision at threshold delta (inclusive for both).
bool frechet_within(const Curve& p, const Curve& q, double delta, Metric metric);

/** Greedy ball-escape simplification. Walks the curve, keeping the current
 *  vertex and the first later vertex that leaves the radius-mu ball around
 *  it; the final vertex is always kept.
 *
 *  Guarantees: the result is a vertex subsequence, first and last vertices
 *  preserved, discrete_frechet(p, result) <= mu, and every result edge is
 *  longer than mu except possibly the last. A single-vertex curve returns
 *  itself. */
Curve simplify_mu(const Curve& p, double mu);

/// Indices (into p.vertices) of the vertices simplify_mu keeps.
std::vector<std::size_t> simplify_mu_indices(const Curve& p, double mu);

/** 2-approximate diameter of a point set: the largest distance from the seed
 *  vertex to any other. Result D' satisfies D/2 <= D' <= D for the exact
 *  diameter D. O(N*d). */
double approx_diameter(const std::vector<Point>& points, std::size_t seed_index);

/// Closed sub-interval of a segment or edge parameter range; empty when
/// lo > hi.
struct Interval {
  double lo = 1.0;
  double hi = 0.0;

  bool empty() const { return lo > hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/** Free part { t in [0,1] : |a + t*(b-a) - center| <= radius } of a segment
 *  against a ball. Negative quadratic discriminants within a 1e-12 relative
 *  tolerance are treated as tangency; anything more negative is empty. */
Interval segment_ball_intersection(const Point& a, const Point& b, const Point& center,
                                   double radius);

/** Free-space diagram between curve P (rows, parameter s) and curve C
 *  (columns, parameter t) at a fixed threshold. Stores the free interval of
 *  every cell boundary once:
 *    vertical(i, j): P-edge i against C-vertex j, local s in [0, 1];
 *    horizontal(i, j): P-vertex i against C-edge j, local t in [0, 1]. */
struct FreeSpace {
  std::size_t p_size = 0;
  std::size_t c_size = 0;
  double threshold = 0.0;
  std::vector<Interval> vert;  // (p_size-1) * c_size entries, row-major by j
  std::vector<Interval> horz;  // p_size * (c_size-1) entries, row-major by i

  const Interval& vertical(std::size_t i, std::size_t j) const {
    return vert[j * (p_size - 1) + i];
  }
  const Interval& horizontal(std::size_t i, std::size_t j) const {
    return horz[i * (c_size - 1) + j];
  }
};

FreeSpace compute_free_space(const Curve& p, const Curve& c, double threshold);

}  // namespace curvegrid
