// End-to-end acceptance gate. Each criterion exercises one advertised
// guarantee on randomized instances with fixed seeds, prints exactly one
// PASS/FAIL line, and the process exits with the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvegrid/anns_asym.hpp"
#include "curvegrid/anns_sym.hpp"
#include "curvegrid/asrs.hpp"
#include "curvegrid/errors.hpp"
#include "curvegrid/geometry.hpp"
#include "curvegrid/io.hpp"
#include "curvegrid/oracle.hpp"
#include "curvegrid/twd.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace curvegrid;
using nlohmann::json;

namespace {

// Pinned tolerances. kDistanceTol absorbs float noise when a computed
// distance is compared against an exact reference value; kDecisionSlack
// loosens a decision threshold multiplicatively where the guarantee itself
// provides no slack.
constexpr double kDistanceTol = 1e-9;
constexpr double kDecisionSlack = 1.0 + 1e-9;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool subset(const std::vector<std::string>& inner, const std::vector<std::string>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::vector<Curve> boxed_corpus(std::mt19937_64& rng, std::size_t n, std::size_t max_m,
                                const Point& center, double half_width) {
  std::vector<Curve> curves;
  for (std::size_t i = 0; i < n; ++i) {
    Curve c;
    c.id = "c" + std::to_string(i);
    const std::size_t m = uniform_index(rng, 1, max_m);
    for (std::size_t v = 0; v < m; ++v) {
      Point p(center.size());
      for (std::size_t a = 0; a < p.size(); ++a)
        p[a] = center[a] + uniform(rng, -half_width, half_width);
      c.vertices.push_back(std::move(p));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

Curve perturbed_query(std::mt19937_64& rng, const std::vector<Curve>& curves, std::size_t k,
                      double noise) {
  const Curve& base = curves[uniform_index(rng, 0, curves.size() - 1)];
  Curve q;
  q.id = "q";
  for (std::size_t v = 0; v < k; ++v) {
    Point p = base.vertices[v % base.size()];
    for (double& x : p) x += uniform(rng, -noise, noise);
    q.vertices.push_back(std::move(p));
  }
  return q;
}

Curve box_query(std::mt19937_64& rng, std::size_t k, const Point& center, double half_width) {
  Curve q;
  q.id = "q";
  for (std::size_t v = 0; v < k; ++v) {
    Point p(center.size());
    for (std::size_t a = 0; a < p.size(); ++a)
      p[a] = center[a] + uniform(rng, -half_width, half_width);
    q.vertices.push_back(std::move(p));
  }
  return q;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

// ---------------------------------------------------------------------------

bool fixed_arity_sandwich(std::string& detail) {
  std::mt19937_64 rng(1001);
  int must_return_hits = 0;  // queries with a non-empty exact delta-neighborhood
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t k = instance < 600 ? 1 : instance < 900 ? 2 : 3;
    double eps = 0.0;
    if (k == 1) eps = uniform(rng, 1.0, 4.0);
    if (k == 2) eps = uniform(rng, 2.83, 4.0);
    if (k == 3) eps = uniform(rng, 6.0, 9.0);
    const double ratio = uniform(rng, 0.3, 1.0);  // eps/delta
    const double delta = eps / ratio;
    const Point center = {uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0)};
    const std::size_t n = uniform_index(rng, 1, 20);
    const std::vector<Curve> curves = boxed_corpus(rng, n, 4, center, 0.15 * delta);

    AsymIndex index;
    try {
      index = build_asym_index(curves, k, delta, eps, 1'000'000);
    } catch (const std::exception& e) {
      detail = "instance " + std::to_string(instance) + " failed to build: " + e.what();
      return false;
    }

    for (int qi = 0; qi < 2; ++qi) {
      const Curve q = qi == 0 ? perturbed_query(rng, curves, k, 0.5 * delta)
                              : box_query(rng, k, center, 2.0 * delta);
      const AsymQueryOutcome outcome = query_asym(index, q);
      const auto scan = oracle::scan_near_neighbors(curves, q, delta, eps);
      if (!scan.within_delta.empty()) ++must_return_hits;
      const bool ok = outcome.outside_grid
                          ? scan.within_delta.empty()
                          : subset(scan.within_delta, outcome.ids) &&
                                subset(outcome.ids, scan.within_stretched);
      if (!ok) {
        std::ostringstream msg;
        msg << "instance " << instance << " query " << qi << " (k=" << k << ", delta=" << delta
            << ", eps=" << eps << ") violates the sandwich";
        detail = msg.str();
        return false;
      }
    }
  }
  if (must_return_hits < 200) {
    detail = "only " + std::to_string(must_return_hits) +
             " of 2000 queries exercised the must-return direction";
    return false;
  }
  return true;
}

bool rejection_certifies_empty(std::string& detail) {
  std::mt19937_64 rng(1002);
  const Point center = {0.0, 0.0};
  const std::vector<Curve> curves = boxed_corpus(rng, 5, 2, center, 0.3);
  const double delta = 2.0;
  const double eps = 1.5;
  for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
    const AsymIndex index = build_asym_index(curves, k, delta, eps);
    const Point min_corner = index.grid.min_corner();
    for (int t = 0; t < 100; ++t) {
      Curve q = box_query(rng, k, index.grid.origin, index.grid.side / 2.0);
      const std::size_t vi = uniform_index(rng, 0, k - 1);
      const std::size_t ci = uniform_index(rng, 0, 1);
      const double margin = uniform(rng, 0.01, 10.0);
      q.vertices[vi][ci] = rng() % 2 == 0 ? min_corner[ci] - margin
                                          : min_corner[ci] + index.grid.side + margin;
      const AsymQueryOutcome outcome = query_asym(index, q);
      const auto scan = oracle::scan_near_neighbors(curves, q, delta, eps);
      if (!outcome.outside_grid) {
        detail = "query with a vertex outside the hypercube was not rejected (k=" +
                 std::to_string(k) + ", trial " + std::to_string(t) + ")";
        return false;
      }
      if (!scan.within_delta.empty()) {
        detail = "a rejected query had a curve within delta (k=" + std::to_string(k) +
                 ", trial " + std::to_string(t) + ")";
        return false;
      }
    }
  }
  return true;
}

bool diameter_estimate_bounds(std::string& detail) {
  std::mt19937_64 rng(1003);
  const double scales[3] = {0.01, 1.0, 1000.0};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = uniform_index(rng, 1, 200);
    const std::size_t d = uniform_index(rng, 1, 4);
    const double s = scales[t % 3];
    std::vector<Point> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(testsupport::random_point(rng, d, -s, s));
    const double exact = oracle::exact_diameter(points);
    for (std::size_t seed = 0; seed < n; ++seed) {
      const double approx = approx_diameter(points, seed);
      if (approx < exact / 2.0 - kDistanceTol || approx > exact + kDistanceTol) {
        std::ostringstream msg;
        msg << "set " << t << " seed " << seed << ": estimate " << approx
            << " outside [D/2, D] for D = " << exact;
        detail = msg.str();
        return false;
      }
    }
  }
  return true;
}

bool query_cost_constant(std::string& detail) {
  std::mt19937_64 rng(1004);
  const double delta = 4.0;
  const double eps = 3.0;
  const std::size_t k = 2;
  const Point center = {0.0, 0.0};

  std::vector<std::vector<Curve>> corpora;
  std::vector<AsymIndex> indexes;
  for (std::size_t n : {std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
    std::vector<Curve> curves;
    for (std::size_t i = 0; i < n; ++i) {
      Curve c = testsupport::random_curve(rng, "c" + std::to_string(i), 2, 2, -0.6, 0.6);
      curves.push_back(std::move(c));
    }
    indexes.push_back(build_asym_index(curves, k, delta, eps));
    corpora.push_back(std::move(curves));
  }

  QueryStats expected;
  expected.coordinate_roundings = k * 2;
  expected.key_builds = 1;
  expected.bucket_lookups = 1;
  std::vector<Curve> queries;
  for (int t = 0; t < 50; ++t) queries.push_back(box_query(rng, k, center, 8.0));
  for (int t = 0; t < 50; ++t) {
    QueryStats stats[3];
    for (int i = 0; i < 3; ++i) query_asym(indexes[i], queries[t], &stats[i]);
    if (!(stats[0] == stats[1] && stats[1] == stats[2] && stats[0] == expected)) {
      detail = "per-query operation counts differ across corpus sizes (query " +
               std::to_string(t) + ")";
      return false;
    }
  }

  // The timing half, through the CLI bench command.
  testsupport::TempDir dir;
  const std::string qfile = dir.file("queries.jsonl");
  write_curves_jsonl(qfile, std::vector<Curve>(queries.begin(), queries.begin() + 10));
  json ops[3];
  double scan_us[3] = {};
  for (int i = 0; i < 3; ++i) {
    const std::string cfile = dir.file("corpus" + std::to_string(i) + ".jsonl");
    const std::string ifile = dir.file("index" + std::to_string(i) + ".json");
    write_curves_jsonl(cfile, corpora[i]);
    write_file(ifile, serialize_index(indexes[i]));
    std::string out;
    const int rc = testsupport::run_cli(
        "bench --index " + ifile + " --curves " + cfile + " --query " + qfile + " --reps 3",
        &out);
    if (rc != 0) {
      detail = "bench exited with code " + std::to_string(rc);
      return false;
    }
    const json record = json::parse(out);
    ops[i] = record.at("ops_per_rep");
    scan_us[i] = record.at("oracle_scan_us").get<double>();
  }
  if (!(ops[0] == ops[1] && ops[1] == ops[2])) {
    detail = "bench operation counts depend on corpus size";
    return false;
  }
  if (ops[0].at("coordinate_roundings") != 40 || ops[0].at("bucket_lookups") != 10) {
    detail = "bench operation counts do not match 10 in-grid queries";
    return false;
  }
  if (!(scan_us[0] > 0.0 && scan_us[2] > 2.0 * scan_us[0])) {
    std::ostringstream msg;
    msg << "oracle scan time did not grow with corpus size (" << scan_us[0] << "us vs "
        << scan_us[2] << "us)";
    detail = msg.str();
    return false;
  }
  return true;
}

bool grid_closed_form(std::string& detail) {
  struct Config {
    std::vector<Curve> curves;
    double delta;
    double eps;
    std::size_t k;
    std::uint64_t budget;
    bool expect_budget_failure;
  };
  auto one_curve = [](std::vector<Point> pts) {
    Curve c;
    c.id = "p";
    c.vertices = std::move(pts);
    return std::vector<Curve>{c};
  };
  std::vector<Config> configs;
  // Small branch (estimate <= delta), two arities.
  configs.push_back({one_curve({{0.0, 0.0}, {0.3, 0.1}, {0.2, 0.2}}), 1.0, 0.5, 1, 0, false});
  configs.push_back({one_curve({{0.0, 0.0}, {0.3, 0.1}, {0.2, 0.2}}), 1.0, 0.5, 2, 0, false});
  // Large branch.
  configs.push_back({one_curve({{0.0, 0.0}, {3.0, 0.0}}), 1.0, 0.5, 1, 0, false});
  // One dimension, arity 2.
  configs.push_back({one_curve({{0.0}, {2.0}}), 0.5, 0.5, 2, 0, false});
  // Three dimensions.
  configs.push_back({one_curve({{0.0, 0.1, 0.2}, {0.2, 0.0, 0.1}, {0.1, 0.2, 0.0}}),
                     2.0, 1.0, 1, 0, false});
  // Over budget and saturating capacities.
  configs.push_back({one_curve({{0.0, 0.0}, {50.0, 0.0}}), 1.0, 0.1, 1, kDefaultBudget, true});
  configs.push_back({one_curve({{0.0, 0.0}, {100.0, 0.0}}), 1.0, 0.15, 2, kDefaultBudget, true});

  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const Config& cfg = configs[ci];
    std::vector<Point> vertices;
    for (const Curve& c : cfg.curves)
      vertices.insert(vertices.end(), c.vertices.begin(), c.vertices.end());
    const std::size_t d = vertices.front().size();
    const double estimate = approx_diameter(vertices, 0);
    const double cell = cfg.eps * cfg.delta / (2.0 * std::sqrt(static_cast<double>(d)));
    const double big_l = estimate <= cfg.delta
                             ? 4.0 * cfg.delta
                             : 4.0 * cfg.delta * estimate / cfg.eps;
    const double side = 2.0 * big_l;
    const auto cells = static_cast<std::int64_t>(std::ceil(side / cell));
    const std::uint64_t lattice = saturating_pow(static_cast<std::uint64_t>(cells) + 1, d);
    const std::uint64_t capacity = saturating_pow(lattice, cfg.k);

    auto fail = [&](const std::string& what) {
      detail = "config " + std::to_string(ci) + ": " + what;
      return false;
    };
    if (cfg.expect_budget_failure) {
      try {
        build_asym_index(cfg.curves, cfg.k, cfg.delta, cfg.eps, cfg.budget);
        return fail("expected the build to exceed its budget");
      } catch (const budget_exceeded& e) {
        if (e.required != capacity)
          return fail("budget error reports a different sequence count than the closed form");
      }
      continue;
    }
    const AsymIndex index = build_asym_index(cfg.curves, cfg.k, cfg.delta, cfg.eps, capacity);
    if (index.diameter_estimate != estimate) return fail("diameter estimate differs");
    if (index.grid.origin != cfg.curves.front().vertices.front())
      return fail("grid is not centered at the first vertex");
    if (index.grid.side != side || index.grid.cell != cell)
      return fail("grid side or cell differs from the closed form");
    if (index.grid.cells_per_axis != cells) return fail("cell count differs");
    if (index.lattice_point_count != lattice) return fail("lattice point count differs");
    if (index.path_capacity != capacity) return fail("sequence capacity differs");
    const Point mc = index.grid.min_corner();
    for (std::size_t a = 0; a < d; ++a) {
      if (mc[a] != index.grid.origin[a] - side / 2.0) return fail("min corner differs");
    }
  }
  return true;
}

bool any_arity_bounds(std::string& detail) {
  std::mt19937_64 rng(1006);
  int checked = 0;
  int must_return_hits = 0;
  for (int build = 0; build < 125; ++build) {
    const double delta = uniform(rng, 1.0, 3.0);
    const double eps = uniform(rng, 18.0, 36.0);
    const std::size_t n = uniform_index(rng, 1, 8);
    std::vector<Curve> curves;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t m = i == 0 && build % 8 == 0 ? 3 : uniform_index(rng, 1, 2);
      curves.push_back(testsupport::random_curve(rng, "c" + std::to_string(i), m, 2, -4.0, 4.0));
    }

    SymIndex index;
    try {
      index = build_sym_index(curves, delta, eps, 8'000'000);
    } catch (const std::exception& e) {
      detail = "build " + std::to_string(build) + " failed: " + e.what();
      return false;
    }

    const double loose = (5.0 + eps) * delta;
    for (int qi = 0; qi < 4; ++qi) {
      const std::size_t qk = uniform_index(rng, 1, 5);
      const Curve q = qi < 3 ? perturbed_query(rng, curves, qk, 0.75 * delta)
                             : box_query(rng, qk, {0.0, 0.0}, 6.0);
      std::vector<std::string> returned = query_sym(index, q);
      std::sort(returned.begin(), returned.end());
      ++checked;
      for (const Curve& c : curves) {
        const bool in = std::binary_search(returned.begin(), returned.end(), c.id);
        const double dist = discrete_frechet(c, q);
        if (dist <= delta) ++must_return_hits;
        if (in && dist > loose * kDecisionSlack) {
          std::ostringstream msg;
          msg << "build " << build << " query " << qi << ": returned curve at distance " << dist
              << " > (5+eps)*delta = " << loose;
          detail = msg.str();
          return false;
        }
        if (!in && dist <= delta / kDecisionSlack) {
          std::ostringstream msg;
          msg << "build " << build << " query " << qi << ": curve at distance " << dist
              << " <= delta = " << delta << " was not returned";
          detail = msg.str();
          return false;
        }
      }
    }
  }
  if (checked < 500) {
    detail = "only " + std::to_string(checked) + " query checks ran";
    return false;
  }
  if (must_return_hits < 50) {
    detail = "only " + std::to_string(must_return_hits) +
             " within-delta pairs exercised the must-return direction";
    return false;
  }
  return true;
}

bool simplification_contract(std::string& detail) {
  std::mt19937_64 rng(1007);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = uniform_index(rng, 1, 30);
    const std::size_t d = uniform_index(rng, 1, 3);
    const Curve p = testsupport::random_curve(rng, "p", n, d, -3.0, 3.0);
    double mu = 0.0;
    switch (t % 4) {
      case 0: mu = 0.0; break;
      case 1: mu = uniform(rng, 0.0, 0.5); break;
      case 2: mu = uniform(rng, 0.5, 4.0); break;
      default: mu = 20.0; break;
    }

    const std::vector<std::size_t> kept = simplify_mu_indices(p, mu);
    const Curve s = simplify_mu(p, mu);
    auto fail = [&](const std::string& what) {
      detail = "trial " + std::to_string(t) + " (n=" + std::to_string(n) +
               ", mu=" + std::to_string(mu) + "): " + what;
      return false;
    };
    if (kept.empty() || kept.front() != 0 || kept.back() != n - 1)
      return fail("kept indices do not span the endpoints");
    if (!std::is_sorted(kept.begin(), kept.end()) ||
        std::adjacent_find(kept.begin(), kept.end()) != kept.end())
      return fail("kept indices are not strictly increasing");
    if (s.size() != kept.size()) return fail("index list and curve disagree");
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (s.vertices[i] != p.vertices[kept[i]]) return fail("vertex is not a copy of the input");
    }
    if (discrete_frechet(p, s) > mu) return fail("simplification strays beyond mu");
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
      if (!(distance(s.vertices[i], s.vertices[i + 1]) > mu))
        return fail("a non-final edge is not longer than mu");
    }
  }
  return true;
}

bool subcurve_search_guarantees(std::string& detail) {
  std::mt19937_64 rng(1008);
  const double delta = 10.0;
  const double eps = 10.0;
  for (int t = 0; t < 100; ++t) {
    Curve p;
    p.id = "walk";
    Point at = testsupport::random_point(rng, 2, -10.0, 10.0);
    for (int v = 0; v < 12; ++v) {
      p.vertices.push_back(at);
      for (double& x : at) x += uniform(rng, -6.0, 6.0);
    }
    const std::size_t k = 1 + t % 2;

    AsrsIndex index;
    try {
      index = build_asrs_index(p, k, delta, eps, 2'000'000);
    } catch (const std::exception& e) {
      detail = "instance " + std::to_string(t) + " failed to build: " + e.what();
      return false;
    }

    // A query aligned with k consecutive vertices, lightly perturbed, is
    // certifiably within delta of that subcurve, so something must come back.
    const std::size_t start = uniform_index(rng, 0, 12 - k);
    Curve q;
    q.id = "q";
    for (std::size_t v = 0; v < k; ++v) {
      Point pt = p.vertices[start + v];
      for (double& x : pt) x += uniform(rng, -1.5, 1.5);
      q.vertices.push_back(std::move(pt));
    }
    const Curve aligned = curve_slice(p, static_cast<double>(start + 1),
                                      static_cast<double>(start + k));
    if (!continuous_frechet_decide(aligned, q, delta)) {
      detail = "instance " + std::to_string(t) + ": witness construction is not within delta";
      return false;
    }
    const AsrsQueryOutcome outcome = query_asrs(index, q);
    if (outcome.outside_grid) {
      detail = "instance " + std::to_string(t) + ": near-data query was rejected";
      return false;
    }
    if (outcome.ranges.empty()) {
      detail = "instance " + std::to_string(t) +
               ": a subcurve within delta exists but no range came back";
      return false;
    }
    for (const SubcurveRange& r : outcome.ranges) {
      if (!continuous_frechet_decide(curve_slice(p, r.start, r.end), q,
                                     (1.0 + eps) * delta * kDecisionSlack)) {
        detail = "instance " + std::to_string(t) + ": returned range " + range_text(r) +
                 " is beyond (1+eps)*delta";
        return false;
      }
    }

    if (t % 10 != 0) continue;
    // Audit every stored range on a sample of the indexes.
    const double stored_threshold = (1.0 + eps / 2.0) * delta * kDecisionSlack;
    for (const auto& [key, ranges] : index.buckets) {
      Curve grid_curve;
      grid_curve.id = "key";
      for (const LatticePoint& a : parse_path_key(key))
        grid_curve.vertices.push_back(lattice_to_point(index.grid, a));
      double prev_end = 0.0;
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        const SubcurveRange& r = ranges[i];
        if (!(r.start >= 1.0 && r.start <= r.end && r.end <= static_cast<double>(p.size()))) {
          detail = "instance " + std::to_string(t) + ": stored range " + range_text(r) +
                   " leaves the parameter span";
          return false;
        }
        if (i > 0 && !(r.start > prev_end)) {
          detail = "instance " + std::to_string(t) + ": stored ranges overlap in one bucket";
          return false;
        }
        prev_end = r.end;
        if (!continuous_frechet_decide(curve_slice(p, r.start, r.end), grid_curve,
                                       stored_threshold)) {
          detail = "instance " + std::to_string(t) + ": stored range " + range_text(r) +
                   " is beyond (1+eps/2)*delta of its grid sequence";
          return false;
        }
      }
    }
  }
  return true;
}

bool window_density_sandwich(std::string& detail) {
  std::mt19937_64 rng(1009);
  QueryStats expected;
  expected.coordinate_roundings = 4;
  expected.bucket_lookups = 2;
  expected.endpoint_clamps = 2;
  int aligned_checked = 0;
  int nonempty_exact = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = uniform_index(rng, 2, 100);
    const std::size_t regions = uniform_index(rng, 1, 8);
    const std::uint64_t theta = uniform_index(rng, 1, 4);
    std::vector<StampedPoint> points;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back(StampedPoint{"r" + std::to_string(uniform_index(rng, 0, regions - 1)),
                                    uniform(rng, 0.1, 0.9)});
    }
    double t_max = 0.0;
    for (const StampedPoint& p : points) t_max = std::max(t_max, p.t);
    const double eps_hi = 1.0 / t_max - 1.0;
    const double eps = uniform(rng, 0.25 * eps_hi, 0.95 * eps_hi);

    const TwdIndex index = build_twd(points, theta, eps);
    const double span = index.t_max - index.t_min;
    if (index.subinterval_count !=
        static_cast<std::size_t>(std::ceil(span / index.step))) {
      detail = "instance " + std::to_string(t) + ": subinterval count is not ceil(span/step)";
      return false;
    }

    auto run_query = [&](double q1, double q2, bool want_exact) -> bool {
      QueryStats stats;
      const TwdQueryResult result = query_twd(index, q1, q2, &stats);
      if (!(stats == expected)) {
        detail = "instance " + std::to_string(t) + ": query did not run in constant work";
        return false;
      }
      const std::vector<std::string> exact = oracle::window_regions(points, theta, q1, q2);
      if (!exact.empty()) ++nonempty_exact;
      if (want_exact) {
        if (result.inner != exact || result.outer != exact) {
          detail = "instance " + std::to_string(t) +
                   ": aligned window did not return the exact answer";
          return false;
        }
        return true;
      }
      if (!subset(result.inner, exact) || !subset(exact, result.outer)) {
        detail = "instance " + std::to_string(t) + ": answers do not sandwich the exact set";
        return false;
      }
      return true;
    };

    for (int qi = 0; qi < 25; ++qi) {
      double q1 = uniform(rng, index.t_min - 2.0 * index.step, index.t_max + 2.0 * index.step);
      double q2 = uniform(rng, index.t_min - 2.0 * index.step, index.t_max + 2.0 * index.step);
      if (q1 == q2) continue;
      if (q1 > q2) std::swap(q1, q2);
      if (!run_query(q1, q2, false)) return false;
    }
    for (int qi = 0; qi < 25; ++qi) {
      if (index.subinterval_count == 0) break;
      const std::size_t i = uniform_index(rng, 0, index.subinterval_count - 1);
      const std::size_t j = uniform_index(rng, i + 1, index.subinterval_count);
      if (!run_query(index.window_lo(i), index.window_lo(j), true)) return false;
      ++aligned_checked;
    }
  }
  if (aligned_checked < 50) {
    detail = "only " + std::to_string(aligned_checked) + " aligned windows checked";
    return false;
  }
  if (nonempty_exact < 100) {
    detail = "only " + std::to_string(nonempty_exact) + " queries had a non-empty exact answer";
    return false;
  }
  return true;
}

bool deterministic_round_trip(std::string& detail) {
  std::mt19937_64 rng(1010);
  auto fail = [&](const std::string& what) {
    detail = what;
    return false;
  };

  {  // Fixed arity.
    const std::vector<Curve> curves = boxed_corpus(rng, 6, 2, {0.0, 0.0}, 0.3);
    const AsymIndex first = build_asym_index(curves, 2, 2.0, 1.5);
    const AsymIndex second = build_asym_index(std::vector<Curve>(curves), 2, 2.0, 1.5);
    const std::string text = serialize_index(first);
    if (text != serialize_index(second)) return fail("two identical asym builds differ");
    const AsymIndex loaded = deserialize_asym(text);
    if (serialize_index(loaded) != text) return fail("asym save/load changes the document");
    for (int t = 0; t < 300; ++t) {
      const Curve q = box_query(rng, 2, {0.0, 0.0}, t % 5 == 0 ? 20.0 : 7.0);
      const AsymQueryOutcome a = query_asym(first, q);
      const AsymQueryOutcome b = query_asym(loaded, q);
      if (a.outside_grid != b.outside_grid || a.ids != b.ids)
        return fail("asym answers change after save/load (query " + std::to_string(t) + ")");
    }
  }
  {  // Any arity.
    std::vector<Curve> curves;
    for (int i = 0; i < 3; ++i)
      curves.push_back(testsupport::random_curve(rng, "c" + std::to_string(i), 1 + i % 2, 2,
                                                 -3.0, 3.0));
    const SymIndex first = build_sym_index(curves, 1.0, 12.0);
    const SymIndex second = build_sym_index(std::vector<Curve>(curves), 1.0, 12.0);
    const std::string text = serialize_index(first);
    if (text != serialize_index(second)) return fail("two identical sym builds differ");
    const SymIndex loaded = deserialize_sym(text);
    if (serialize_index(loaded) != text) return fail("sym save/load changes the document");
    for (int t = 0; t < 300; ++t) {
      const Curve q = box_query(rng, uniform_index(rng, 1, 4), {0.0, 0.0}, 5.0);
      if (query_sym(first, q) != query_sym(loaded, q))
        return fail("sym answers change after save/load (query " + std::to_string(t) + ")");
    }
  }
  {  // Subcurve ranges.
    Curve p;
    p.id = "walk";
    Point at = {0.0, 0.0};
    for (int v = 0; v < 8; ++v) {
      p.vertices.push_back(at);
      for (double& x : at) x += uniform(rng, -3.0, 3.0);
    }
    const AsrsIndex first = build_asrs_index(p, 1, 6.0, 6.0);
    const AsrsIndex second = build_asrs_index(Curve(p), 1, 6.0, 6.0);
    const std::string text = serialize_index(first);
    if (text != serialize_index(second)) return fail("two identical asrs builds differ");
    const AsrsIndex loaded = deserialize_asrs(text);
    if (serialize_index(loaded) != text) return fail("asrs save/load changes the document");
    for (int t = 0; t < 200; ++t) {
      const Curve q = box_query(rng, 1, {0.0, 0.0}, t % 5 == 0 ? 500.0 : 20.0);
      const AsrsQueryOutcome a = query_asrs(first, q);
      const AsrsQueryOutcome b = query_asrs(loaded, q);
      if (a.outside_grid != b.outside_grid || a.ranges != b.ranges)
        return fail("asrs answers change after save/load (query " + std::to_string(t) + ")");
    }
  }
  {  // Window density.
    std::vector<StampedPoint> points;
    for (int i = 0; i < 30; ++i)
      points.push_back(StampedPoint{"r" + std::to_string(i % 5), uniform(rng, 0.1, 0.9)});
    const TwdIndex first = build_twd(points, 2, 0.05);
    const TwdIndex second = build_twd(std::vector<StampedPoint>(points), 2, 0.05);
    const std::string text = serialize_index(first);
    if (text != serialize_index(second)) return fail("two identical twd builds differ");
    const TwdIndex loaded = deserialize_twd(text);
    if (serialize_index(loaded) != text) return fail("twd save/load changes the document");
    for (int t = 0; t < 200; ++t) {
      double q1 = uniform(rng, 0.0, 1.0);
      double q2 = uniform(rng, 0.0, 1.0);
      if (q1 == q2) continue;
      if (q1 > q2) std::swap(q1, q2);
      const TwdQueryResult a = query_twd(first, q1, q2);
      const TwdQueryResult b = query_twd(loaded, q1, q2);
      if (a.inner != b.inner || a.outer != b.outer)
        return fail("twd answers change after save/load (query " + std::to_string(t) + ")");
    }
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {"fixed-arity near-neighbor answers sandwich the exact neighborhood",
       fixed_arity_sandwich},
      {"out-of-grid rejection certifies an empty delta-neighborhood", rejection_certifies_empty},
      {"diameter estimate stays within [D/2, D]", diameter_estimate_bounds},
      {"query cost is independent of corpus size", query_cost_constant},
      {"grid derivation follows the documented closed form", grid_closed_form},
      {"any-arity near-neighbor answers respect both distance bounds", any_arity_bounds},
      {"simplification stays within mu and keeps non-final edges longer than mu",
       simplification_contract},
      {"subcurve range search always finds a witness and returns only near ranges",
       subcurve_search_guarantees},
      {"window density answers sandwich the exact region set", window_density_sandwich},
      {"index builds are deterministic and survive a save/load round trip",
       deterministic_round_trip},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    if (ok) {
      std::cout << "PASS  " << c.name << '\n';
    } else {
      ++failures;
      std::cout << "FAIL  " << c.name << (detail.empty() ? "" : ": " + detail) << '\n';
    }
    std::cout.flush();
  }
  return failures;
}
