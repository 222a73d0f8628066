#include "curvegrid/twd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvegrid/errors.hpp"

namespace curvegrid {

namespace {

// Query endpoints within this distance of a snapped edge count as on it.
constexpr double kSnapTolerance = 1e-9;

}  // namespace

TimeNormalization normalize_times(std::vector<StampedPoint>& points) {
  TimeNormalization map;
  if (points.empty()) return map;
  double lo = points.front().t;
  double hi = points.front().t;
  for (const StampedPoint& p : points) {
    lo = std::min(lo, p.t);
    hi = std::max(hi, p.t);
  }
  if (lo >= 0.0 && hi < 1.0) return map;
  map.rescaled = true;
  if (hi == lo) {
    // Degenerate span: park everything mid-range.
    map.offset = lo - 0.5;
    map.scale = 1.0;
  } else {
    // Slightly inflate the span so the maximum lands strictly below 1.
    map.offset = lo;
    map.scale = (hi - lo) * (1.0 + 1.0 / 1048576.0);
  }
  for (StampedPoint& p : points) p.t = (p.t - map.offset) / map.scale;
  return map;
}

std::uint64_t TwdIndex::candidate_window_count() const {
  const std::uint64_t c = subinterval_count;
  return (c + 1) * (c + 2) / 2;
}

double TwdIndex::window_lo(std::size_t i) const {
  return t_min + static_cast<double>(i) * step;
}

std::vector<double> TwdIndex::endpoints() const {
  std::vector<double> out(subinterval_count + 1);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = t_max + static_cast<double>(i) * step;
  return out;
}

TwdIndex build_twd(const std::vector<StampedPoint>& points, std::uint64_t theta, double eps) {
  if (points.empty()) throw empty_input("twd build: no points");
  if (theta < 1) throw invalid_parameter("twd build: theta must be at least 1");
  double t_min = points.front().t;
  double t_max = points.front().t;
  for (const StampedPoint& p : points) {
    if (!(p.t >= 0.0) || !(p.t < 1.0))
      throw invalid_parameter("twd build: times must lie in [0, 1)");
    t_min = std::min(t_min, p.t);
    t_max = std::max(t_max, p.t);
  }
  if (t_max <= 0.0)
    throw invalid_parameter("twd build: all points at time zero, no window scale");
  if (!(eps > 0.0) || !(eps < 1.0 / t_max - 1.0))
    throw invalid_parameter("twd build: eps must satisfy 0 < eps < 1/t_max - 1");

  TwdIndex index;
  index.theta = theta;
  index.eps = eps;
  index.t_min = t_min;
  index.t_max = t_max;
  index.shift = t_max - t_min;
  index.step = eps * t_max;
  const double span = t_max - t_min;
  index.subinterval_count =
      span == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(span / index.step));

  std::map<std::string, std::vector<double>> region_times;
  for (const StampedPoint& p : points) region_times[p.region].push_back(p.t);
  for (auto& [region, times] : region_times) std::sort(times.begin(), times.end());

  const std::size_t c = index.subinterval_count;
  for (std::size_t i = 0; i <= c; ++i) {
    const double w_lo = index.window_lo(i);
    for (std::size_t j = i; j <= c; ++j) {
      const double w_hi = index.window_lo(j);
      std::vector<std::string> dense;
      for (const auto& [region, times] : region_times) {
        const auto first = std::lower_bound(times.begin(), times.end(), w_lo);
        const auto last = std::upper_bound(times.begin(), times.end(), w_hi);
        if (static_cast<std::uint64_t>(last - first) >= theta) dense.push_back(region);
      }
      if (!dense.empty()) index.buckets.emplace(std::make_pair(i, j), std::move(dense));
    }
  }
  return index;
}

TwdQueryResult query_twd(const TwdIndex& index, double q1, double q2, QueryStats* stats) {
  if (!(q1 < q2)) throw invalid_query("twd query: requires q1 < q2");

  const double c = static_cast<double>(index.subinterval_count);
  const double r1 = (q1 - index.t_min) / index.step;
  const double r2 = (q2 - index.t_min) / index.step;

  // Inward snap shrinks the window, outward snap grows it; the tolerance
  // keeps endpoints that sit on an edge from drifting across it. Snapping
  // runs on the raw ratios: clamping first would fold a window that misses
  // [t_min, t_max] entirely onto a degenerate edge window that may still
  // hold points.
  const double s1 = std::ceil(r1 - kSnapTolerance);
  const double s2 = std::floor(r2 + kSnapTolerance);
  const bool inner_valid = s1 <= s2 && s2 >= 0.0 && s1 <= c;
  const auto i1 = static_cast<std::size_t>(std::clamp(s1, 0.0, c));
  const auto j1 = static_cast<std::size_t>(std::clamp(s2, 0.0, c));
  const auto i2 = static_cast<std::size_t>(std::clamp(std::floor(r1 + kSnapTolerance), 0.0, c));
  const auto j2 = static_cast<std::size_t>(std::clamp(std::ceil(r2 - kSnapTolerance), 0.0, c));
  if (stats != nullptr) {
    stats->endpoint_clamps += 2;
    stats->coordinate_roundings += 4;
    stats->bucket_lookups += 2;
  }

  TwdQueryResult result;
  if (auto it = index.buckets.find({i1, j1}); it != index.buckets.end() && inner_valid)
    result.inner = it->second;
  if (auto it = index.buckets.find({i2, j2}); it != index.buckets.end())
    result.outer = it->second;
  return result;
}

}  // namespace curvegrid
