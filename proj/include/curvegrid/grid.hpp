#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvegrid/geometry.hpp"

namespace curvegrid {

/// Integer lattice coordinates of one grid point (one entry per dimension).
using LatticePoint = std::vector<std::int64_t>;

/// Default cap on the number of candidate sequences an index build may
/// enumerate.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/** Bounded axis-aligned lattice. The hypercube has side `side` centered at
 *  `origin`; lattice points sit at min_corner() + cell * a for integer
 *  coordinate vectors a in [0, cells_per_axis]^dim, so there are
 *  (cells_per_axis + 1)^dim of them and they cover the whole hypercube. */
struct Grid {
  Point origin;
  double side = 0.0;
  double cell = 0.0;
  std::int64_t cells_per_axis = 0;  // ceil(side / cell)

  std::size_t dim() const { return origin.size(); }
  Point min_corner() const;
  bool contains(const Point& q) const;  // closed hypercube test
};

/// Validates side >= cell > 0 and center non-empty.
Grid build_grid(const Point& center, double side, double cell);

/** Nearest lattice point by per-coordinate floor, clamped into bounds.
 *  Returns nullopt when q lies outside the closed hypercube. The embedded
 *  result is within cell * sqrt(dim) of q. `rounding_ops`, when given, is
 *  incremented once per coordinate. */
std::optional<LatticePoint> round_to_lattice(const Grid& g, const Point& q,
                                             std::uint64_t* rounding_ops = nullptr);

/// Embeds lattice coordinates back into space. Throws out_of_bounds when a
/// coordinate leaves [0, cells_per_axis].
Point lattice_to_point(const Grid& g, const LatticePoint& a);

/// Every lattice point of the bounded grid in lexicographic coordinate order.
std::vector<LatticePoint> all_lattice_points(const Grid& g);

/** Lattice points of the infinite lattice anchored at the coordinate origin
 *  with pitch `cell` that lie in the closed ball around `center`. Scans the
 *  bounding box and filters; result is in lexicographic order. */
std::vector<LatticePoint> ball_lattice_points(const Point& center, double radius, double cell);

/// Embeds a point of the origin-anchored infinite lattice.
Point unbounded_lattice_point(const LatticePoint& a, double cell);

/** Injective text key for a lattice-point sequence: coordinates joined by
 *  ',' within a point, points joined by '|'. The serialized bucket-key
 *  format, stable across platforms. */
std::string path_key(std::span<const LatticePoint> path);

/// Inverse of path_key. Throws invalid_parameter on malformed text.
std::vector<LatticePoint> parse_path_key(const std::string& key);

/// Number of sequences the Cartesian product of the sets has, saturating at
/// UINT64_MAX.
std::uint64_t count_paths(std::span<const std::span<const LatticePoint>> point_sets);

/** Streams every sequence that picks one lattice point per set, in
 *  lexicographic order of the concatenated coordinate tuples. The sequence
 *  passed to `fn` is a reused buffer, valid only during the call.
 *  Throws budget_exceeded before yielding anything when the product of set
 *  sizes exceeds `budget`; throws invalid_parameter on an empty set list or
 *  an empty set. */
void enumerate_paths(std::span<const std::span<const LatticePoint>> point_sets,
                     std::uint64_t budget,
                     const std::function<void(const std::vector<LatticePoint>&)>& fn);

}  // namespace curvegrid
