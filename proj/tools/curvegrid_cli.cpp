#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvegrid/anns_asym.hpp"
#include "curvegrid/anns_sym.hpp"
#include "curvegrid/asrs.hpp"
#include "curvegrid/errors.hpp"
#include "curvegrid/geometry.hpp"
#include "curvegrid/io.hpp"
#include "curvegrid/oracle.hpp"
#include "curvegrid/twd.hpp"

namespace {

using namespace curvegrid;
using nlohmann::json;

// Exit codes: 0 ok, 1 guarantee violation (check), 2 invalid parameters,
// 3 budget exceeded, 4 I/O or format errors.
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

constexpr const char* kRejectedSentinel = "REJECTED_OUTSIDE_GRID";

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const budget_exceeded& e) {
    std::cerr << "error: " << e.what() << " (required " << e.required << ", budget "
              << e.budget << ")\n";
    return kExitBudget;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct BuildArgs {
  std::string kind;
  std::string curves_path;
  std::string points_path;
  std::string out_path;
  std::string metric_name = "continuous";
  double delta = 0.0;
  double eps = 0.0;
  std::size_t k = 0;
  std::uint64_t theta = 0;
  std::uint64_t budget = kDefaultBudget;
  bool has_delta = false;
  bool has_k = false;
  bool has_theta = false;
};

Metric parse_metric(const std::string& name) {
  if (name == "continuous") return Metric::continuous;
  if (name == "discrete") return Metric::discrete;
  throw invalid_parameter("unknown metric '" + name + "'");
}

int cmd_build(const BuildArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  json summary;
  summary["kind"] = args.kind;
  summary["out"] = args.out_path;

  if (args.kind == "twd") {
    if (args.points_path.empty()) throw invalid_parameter("kind=twd requires --points");
    if (!args.has_theta) throw invalid_parameter("kind=twd requires --theta");
    std::vector<StampedPoint> points = read_points_jsonl(args.points_path);
    const TimeNormalization norm = normalize_times(points);
    TwdIndex index = build_twd(points, args.theta, args.eps);
    index.normalization = norm;
    write_file(args.out_path, serialize_index(index));
    summary["points"] = points.size();
    summary["subinterval_count"] = index.subinterval_count;
    summary["candidate_windows"] = index.candidate_window_count();
    summary["bucket_count"] = index.buckets.size();
    summary["rescaled"] = norm.rescaled;
  } else {
    if (args.curves_path.empty())
      throw invalid_parameter("kind=" + args.kind + " requires --curves");
    if (!args.has_delta) throw invalid_parameter("kind=" + args.kind + " requires --delta");
    const std::vector<Curve> curves = read_curves_jsonl(args.curves_path);
    summary["curves"] = curves.size();
    if (args.kind == "asym") {
      if (!args.has_k) throw invalid_parameter("kind=asym requires --k");
      AsymIndex index = build_asym_index(curves, args.k, args.delta, args.eps, args.budget,
                                         parse_metric(args.metric_name));
      write_file(args.out_path, serialize_index(index));
      summary["diameter_estimate"] = index.diameter_estimate;
      summary["lattice_point_count"] = index.lattice_point_count;
      summary["path_capacity"] = index.path_capacity;
      summary["bucket_count"] = index.buckets.size();
    } else if (args.kind == "sym") {
      SymIndex index = build_sym_index(curves, args.delta, args.eps, args.budget);
      write_file(args.out_path, serialize_index(index));
      summary["bucket_count"] = index.buckets.size();
    } else if (args.kind == "asrs") {
      if (!args.has_k) throw invalid_parameter("kind=asrs requires --k");
      if (curves.size() != 1)
        throw invalid_parameter("kind=asrs indexes exactly one curve per file");
      AsrsIndex index =
          build_asrs_index(curves.front(), args.k, args.delta, args.eps, args.budget);
      write_file(args.out_path, serialize_index(index));
      summary["diameter_estimate"] = index.diameter_estimate;
      summary["lattice_point_count"] = index.lattice_point_count;
      summary["path_capacity"] = index.path_capacity;
      summary["bucket_count"] = index.buckets.size();
    } else {
      throw invalid_parameter("unknown kind '" + args.kind + "'");
    }
  }
  summary["elapsed_ms"] = elapsed_ms(start);
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

struct QueryArgs {
  std::string index_path;
  std::string query_path;
  double from = 0.0;
  double to = 0.0;
  bool has_window = false;
};

Curve read_single_query(const std::string& path) {
  const std::vector<Curve> curves = read_curves_jsonl(path);
  if (curves.size() != 1) throw invalid_parameter("query file must hold exactly one curve");
  return curves.front();
}

int cmd_query(const QueryArgs& args) {
  const std::string text = read_file(args.index_path);
  const std::string kind = index_kind(text);
  if (kind == "twd") {
    if (!args.has_window) throw invalid_parameter("twd queries take --from and --to");
    const TwdIndex index = deserialize_twd(text);
    const double scale = index.normalization.scale;
    const double offset = index.normalization.offset;
    const TwdQueryResult result =
        query_twd(index, (args.from - offset) / scale, (args.to - offset) / scale);
    for (const std::string& region : result.inner) std::cout << "S1 " << region << '\n';
    for (const std::string& region : result.outer) std::cout << "S2 " << region << '\n';
    return kExitOk;
  }
  if (args.query_path.empty())
    throw invalid_parameter("kind=" + kind + " queries take --query");
  const Curve q = read_single_query(args.query_path);
  if (kind == "asym") {
    const AsymIndex index = deserialize_asym(text);
    const AsymQueryOutcome outcome = query_asym(index, q);
    if (outcome.outside_grid) {
      std::cout << kRejectedSentinel << '\n';
      return kExitOk;
    }
    for (const std::string& id : outcome.ids) std::cout << id << '\n';
    return kExitOk;
  }
  if (kind == "sym") {
    const SymIndex index = deserialize_sym(text);
    for (const std::string& id : query_sym(index, q)) std::cout << id << '\n';
    return kExitOk;
  }
  if (kind == "asrs") {
    const AsrsIndex index = deserialize_asrs(text);
    const AsrsQueryOutcome outcome = query_asrs(index, q);
    if (outcome.outside_grid) {
      std::cout << kRejectedSentinel << '\n';
      return kExitOk;
    }
    for (const SubcurveRange& r : outcome.ranges) std::cout << range_text(r) << '\n';
    return kExitOk;
  }
  throw io_error("unknown index kind '" + kind + "'");
}

struct CheckArgs {
  std::string index_path;
  std::string curves_path;
  std::string points_path;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
};

int report_violation(const std::string& what, const json& instance) {
  json rec;
  rec["violation"] = what;
  rec["instance"] = instance;
  std::cout << rec.dump() << '\n';
  return kExitViolation;
}

bool is_subset(const std::vector<std::string>& inner, const std::vector<std::string>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

int check_rebuild(const std::string& original, const std::string& rebuilt) {
  if (original == rebuilt) return kExitOk;
  std::size_t at = 0;
  const std::size_t n = std::min(original.size(), rebuilt.size());
  while (at < n && original[at] == rebuilt[at]) ++at;
  json instance;
  instance["first_difference_at"] = at;
  instance["stored"] = original.substr(at > 40 ? at - 40 : 0, 80);
  instance["rebuilt"] = rebuilt.substr(at > 40 ? at - 40 : 0, 80);
  return report_violation("stored index differs from a deterministic rebuild", instance);
}

Curve random_query_in_grid(const Grid& grid, std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point min_corner = grid.min_corner();
  Curve q;
  q.id = "query";
  for (std::size_t i = 0; i < k; ++i) {
    Point v(grid.dim());
    for (std::size_t a = 0; a < grid.dim(); ++a)
      v[a] = min_corner[a] + unit(rng) * grid.side;
    q.vertices.push_back(std::move(v));
  }
  return q;
}

Curve perturbed_data_query(const std::vector<Curve>& curves, std::size_t k, double spread,
                           std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, curves.size() - 1);
  std::normal_distribution<double> noise(0.0, spread);
  const Curve& base = curves[pick(rng)];
  Curve q;
  q.id = "query";
  for (std::size_t i = 0; i < k; ++i) {
    Point v = base.vertices[i % base.size()];
    for (double& x : v) x += noise(rng);
    q.vertices.push_back(std::move(v));
  }
  return q;
}

int check_asym(const std::string& text, const std::string& curves_path, std::uint64_t trials,
               std::uint64_t seed, std::uint64_t budget) {
  const AsymIndex stored = deserialize_asym(text);
  const std::vector<Curve> curves = read_curves_jsonl(curves_path);
  const AsymIndex rebuilt =
      build_asym_index(curves, stored.params.k, stored.params.delta, stored.params.eps,
                       std::max(budget, stored.path_capacity), stored.params.metric);
  if (const int rc = check_rebuild(text, serialize_index(rebuilt)); rc != kExitOk) return rc;

  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Curve q = t % 2 == 0 ? random_query_in_grid(stored.grid, stored.params.k, rng)
                               : perturbed_data_query(curves, stored.params.k,
                                                      stored.params.delta / 2.0, rng);
    const AsymQueryOutcome outcome = query_asym(stored, q);
    const auto scan = oracle::scan_near_neighbors(curves, q, stored.params.delta,
                                                  stored.params.eps, stored.params.metric);
    json instance;
    instance["trial"] = t;
    instance["query"] = q.vertices;
    if (outcome.outside_grid) {
      if (!scan.within_delta.empty())
        return report_violation("rejected query has a curve within delta", instance);
      continue;
    }
    if (!is_subset(scan.within_delta, outcome.ids))
      return report_violation("curve within delta not returned", instance);
    if (!is_subset(outcome.ids, scan.within_stretched))
      return report_violation("returned curve beyond (1+eps)delta", instance);
  }
  return kExitOk;
}

int check_sym(const std::string& text, const std::string& curves_path, std::uint64_t trials,
              std::uint64_t seed, std::uint64_t budget) {
  const SymIndex stored = deserialize_sym(text);
  const std::vector<Curve> curves = read_curves_jsonl(curves_path);
  const SymIndex rebuilt =
      build_sym_index(curves, stored.params.delta, stored.params.eps, budget);
  if (const int rc = check_rebuild(text, serialize_index(rebuilt)); rc != kExitOk) return rc;
  if (curves.empty()) return kExitOk;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_k(1, 5);
  const double loose = (5.0 + stored.params.eps) * stored.params.delta;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Curve q =
        perturbed_data_query(curves, pick_k(rng), stored.params.delta / 2.0, rng);
    std::vector<std::string> returned = query_sym(stored, q);
    json instance;
    instance["trial"] = t;
    instance["query"] = q.vertices;
    for (const Curve& p : curves) {
      const bool in = std::binary_search(returned.begin(), returned.end(), p.id);
      const double dist = discrete_frechet(p, q);
      if (in && dist > loose)
        return report_violation("returned curve beyond (5+eps)delta", instance);
      if (!in && dist <= stored.params.delta)
        return report_violation("curve within delta not returned", instance);
    }
  }
  return kExitOk;
}

int check_asrs(const std::string& text, const std::string& curves_path, std::uint64_t trials,
               std::uint64_t seed, std::uint64_t budget) {
  const AsrsIndex stored = deserialize_asrs(text);
  const std::vector<Curve> curves = read_curves_jsonl(curves_path);
  if (curves.size() != 1) throw invalid_parameter("asrs check expects a single-curve file");
  const Curve& p = curves.front();
  if (p.id != stored.curve_id || p.size() != stored.curve_size)
    throw invalid_parameter("asrs check: curve file does not match the index");
  const AsrsIndex rebuilt =
      build_asrs_index(p, stored.params.k, stored.params.delta, stored.params.eps,
                       std::max(budget, stored.path_capacity));
  if (const int rc = check_rebuild(text, serialize_index(rebuilt)); rc != kExitOk) return rc;

  std::mt19937_64 rng(seed);
  const double loose = (1.0 + stored.params.eps) * stored.params.delta;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Curve q = random_query_in_grid(stored.grid, stored.params.k, rng);
    const AsrsQueryOutcome outcome = query_asrs(stored, q);
    if (outcome.outside_grid) continue;
    for (const SubcurveRange& r : outcome.ranges) {
      if (!continuous_frechet_decide(curve_slice(p, r.start, r.end), q, loose)) {
        json instance;
        instance["trial"] = t;
        instance["query"] = q.vertices;
        instance["range"] = range_text(r);
        return report_violation("returned subcurve beyond (1+eps)delta", instance);
      }
    }
  }
  return kExitOk;
}

int check_twd(const std::string& text, const std::string& points_path, std::uint64_t trials,
              std::uint64_t seed) {
  const TwdIndex stored = deserialize_twd(text);
  std::vector<StampedPoint> points = read_points_jsonl(points_path);
  if (stored.normalization.rescaled) {
    for (StampedPoint& p : points)
      p.t = (p.t - stored.normalization.offset) / stored.normalization.scale;
  }
  TwdIndex rebuilt = build_twd(points, stored.theta, stored.eps);
  rebuilt.normalization = stored.normalization;
  if (const int rc = check_rebuild(text, serialize_index(rebuilt)); rc != kExitOk) return rc;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> around(stored.t_min - stored.step,
                                                stored.t_max + stored.step);
  for (std::uint64_t t = 0; t < trials; ++t) {
    double q1 = around(rng);
    double q2 = around(rng);
    if (q1 > q2) std::swap(q1, q2);
    if (q1 == q2) continue;
    const TwdQueryResult result = query_twd(stored, q1, q2);
    std::vector<std::string> exact = oracle::window_regions(points, stored.theta, q1, q2);
    json instance;
    instance["trial"] = t;
    instance["window"] = {q1, q2};
    if (!is_subset(result.inner, exact))
      return report_violation("inner answer contains a region outside the exact answer",
                              instance);
    if (!is_subset(exact, result.outer))
      return report_violation("outer answer misses a region of the exact answer", instance);
  }
  return kExitOk;
}

int cmd_check(const CheckArgs& args) {
  const std::string text = read_file(args.index_path);
  const std::string kind = index_kind(text);
  int rc = kExitInvalid;
  if (kind == "twd") {
    if (args.points_path.empty()) throw invalid_parameter("twd check requires --points");
    rc = check_twd(text, args.points_path, args.trials, args.seed);
  } else {
    if (args.curves_path.empty())
      throw invalid_parameter(kind + " check requires --curves");
    if (kind == "asym")
      rc = check_asym(text, args.curves_path, args.trials, args.seed, args.budget);
    else if (kind == "sym")
      rc = check_sym(text, args.curves_path, args.trials, args.seed, args.budget);
    else if (kind == "asrs")
      rc = check_asrs(text, args.curves_path, args.trials, args.seed, args.budget);
    else
      throw io_error("unknown index kind '" + kind + "'");
  }
  if (rc == kExitOk) {
    json summary;
    summary["kind"] = kind;
    summary["trials"] = args.trials;
    summary["seed"] = args.seed;
    summary["result"] = "ok";
    std::cout << summary.dump() << '\n';
  }
  return rc;
}

struct BenchArgs {
  std::string index_path;
  std::string curves_path;
  std::string query_path;
  std::uint64_t reps = 3;
};

int cmd_bench(const BenchArgs& args) {
  if (args.reps < 1) throw invalid_parameter("bench requires --reps >= 1");
  const std::string text = read_file(args.index_path);
  if (index_kind(text) != "asym")
    throw invalid_parameter("bench supports asym indexes only");
  const AsymIndex index = deserialize_asym(text);
  const std::vector<Curve> curves = read_curves_jsonl(args.curves_path);
  const std::vector<Curve> queries = read_curves_jsonl(args.query_path);
  if (queries.empty()) throw invalid_parameter("bench requires at least one query curve");

  QueryStats per_rep_stats;
  double lookup_us = 0.0;
  double scan_us = 0.0;
  for (std::uint64_t rep = 0; rep < args.reps; ++rep) {
    QueryStats stats;
    auto start = std::chrono::steady_clock::now();
    for (const Curve& q : queries) query_asym(index, q, &stats);
    lookup_us += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                           start)
                     .count();
    per_rep_stats = stats;
    start = std::chrono::steady_clock::now();
    for (const Curve& q : queries)
      oracle::scan_near_neighbors(curves, q, index.params.delta, index.params.eps,
                                  index.params.metric);
    scan_us += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                         start)
                   .count();
  }

  json record;
  record["curves"] = curves.size();
  record["queries"] = queries.size();
  record["reps"] = args.reps;
  record["ops_per_rep"] = {{"coordinate_roundings", per_rep_stats.coordinate_roundings},
                           {"key_builds", per_rep_stats.key_builds},
                           {"bucket_lookups", per_rep_stats.bucket_lookups}};
  record["index_lookup_us"] = lookup_us / static_cast<double>(args.reps);
  record["oracle_scan_us"] = scan_us / static_cast<double>(args.reps);
  std::cout << record.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-hash indexes for curve similarity queries"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Build an index from a data file");
  build->add_option("--kind", build_args.kind, "asym | sym | asrs | twd")->required();
  build->add_option("--curves", build_args.curves_path, "curve data file (JSONL)");
  build->add_option("--points", build_args.points_path, "stamped point file (JSONL)");
  build->add_option("--delta", build_args.delta, "distance threshold")
      ->check(CLI::PositiveNumber);
  build->add_option("--eps", build_args.eps, "approximation parameter")
      ->required()
      ->check(CLI::PositiveNumber);
  build->add_option("--k", build_args.k, "query vertex count (asym, asrs)");
  build->add_option("--theta", build_args.theta, "density threshold (twd)");
  build->add_option("--budget", build_args.budget, "max sequences to enumerate");
  build->add_option("--metric", build_args.metric_name, "continuous | discrete (asym)");
  build->add_option("--out", build_args.out_path, "output index file")->required();

  QueryArgs query_args;
  CLI::App* query = app.add_subcommand("query", "Query a saved index");
  query->add_option("--index", query_args.index_path, "index file")->required();
  query->add_option("--query", query_args.query_path, "query curve file (one curve)");
  CLI::Option* from = query->add_option("--from", query_args.from, "window start (twd)");
  CLI::Option* to = query->add_option("--to", query_args.to, "window end (twd)");
  from->needs(to);
  to->needs(from);

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "Cross-check an index against the oracles");
  check->add_option("--index", check_args.index_path, "index file")->required();
  check->add_option("--curves", check_args.curves_path, "curve data file the index was built from");
  check->add_option("--points", check_args.points_path, "point data file the index was built from");
  check->add_option("--trials", check_args.trials, "randomized trials");
  check->add_option("--seed", check_args.seed, "RNG seed");
  check->add_option("--budget", check_args.budget, "rebuild budget");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Time index lookups against the linear scan");
  bench->add_option("--index", bench_args.index_path, "index file (asym)")->required();
  bench->add_option("--curves", bench_args.curves_path, "corpus file")->required();
  bench->add_option("--query", bench_args.query_path, "query curves file")->required();
  bench->add_option("--reps", bench_args.reps, "repetitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  build_args.has_delta = build->count("--delta") > 0;
  build_args.has_k = build->count("--k") > 0;
  build_args.has_theta = build->count("--theta") > 0;
  query_args.has_window = query->count("--from") > 0;

  if (*build) return run_guarded([&] { return cmd_build(build_args); });
  if (*query) return run_guarded([&] { return cmd_query(query_args); });
  if (*check) return run_guarded([&] { return cmd_check(check_args); });
  if (*bench) return run_guarded([&] { return cmd_bench(bench_args); });
  return kExitInvalid;
}
