#include "curvegrid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "curvegrid/errors.hpp"

namespace curvegrid::oracle {

NearNeighborScan scan_near_neighbors(const std::vector<Curve>& curves, const Curve& q,
                                     double delta, double eps, Metric metric) {
  NearNeighborScan scan;
  for (const Curve& p : curves) {
    if (!p.vertices.empty() && !q.vertices.empty() && p.dim() != q.dim())
      throw dimension_mismatch("oracle scan: curve and query dimensions differ");
    if (frechet_within(p, q, delta, metric)) scan.within_delta.push_back(p.id);
    if (frechet_within(p, q, (1.0 + eps) * delta, metric))
      scan.within_stretched.push_back(p.id);
  }
  std::sort(scan.within_delta.begin(), scan.within_delta.end());
  std::sort(scan.within_stretched.begin(), scan.within_stretched.end());
  return scan;
}

double exact_diameter(const std::vector<Point>& points) {
  if (points.empty()) throw empty_input("oracle diameter: no points");
  double best_sq = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best_sq = std::max(best_sq, squared_distance(points[i], points[j]));
  return std::sqrt(best_sq);
}

std::optional<SubcurveRange> sampled_subcurve_witness(const Curve& p, const Curve& q,
                                                      double delta, double resolution) {
  if (!(resolution > 0.0))
    throw invalid_parameter("oracle witness: resolution must be positive");
  const double n = static_cast<double>(p.size());
  std::vector<double> samples;
  for (double s = 1.0; s < n; s += resolution) samples.push_back(s);
  samples.push_back(n);
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = a; b < samples.size(); ++b)
      if (continuous_frechet_decide(curve_slice(p, samples[a], samples[b]), q, delta))
        return SubcurveRange{samples[a], samples[b]};
  return std::nullopt;
}

std::vector<std::string> window_regions(const std::vector<StampedPoint>& points,
                                        std::uint64_t theta, double q1, double q2) {
  std::map<std::string, std::uint64_t> count;
  for (const StampedPoint& p : points)
    if (p.t >= q1 && p.t <= q2) ++count[p.region];
  std::vector<std::string> out;
  for (const auto& [region, c] : count)
    if (c >= theta) out.push_back(region);
  return out;
}

}  // namespace curvegrid::oracle
