#pragma once

// Shared helpers for the test suites: deterministic instance generators, an
// independent coupling-enumeration Frechet reference, dense resampling for
// bracketing the continuous decision, and subprocess plumbing for CLI tests.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curvegrid/geometry.hpp"

namespace testsupport {

inline curvegrid::Point random_point(std::mt19937_64& rng, std::size_t dim, double lo,
                                     double hi) {
  std::uniform_real_distribution<double> coord(lo, hi);
  curvegrid::Point p(dim);
  for (double& x : p) x = coord(rng);
  return p;
}

inline curvegrid::Curve random_curve(std::mt19937_64& rng, std::string id, std::size_t n,
                                     std::size_t dim, double lo, double hi) {
  curvegrid::Curve c;
  c.id = std::move(id);
  c.vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.vertices.push_back(random_point(rng, dim, lo, hi));
  return c;
}

// Discrete Frechet by explicit enumeration of every monotone coupling,
// straight from the definition. Exponential; keep curves tiny.
inline double coupling_frechet(const curvegrid::Curve& p, const curvegrid::Curve& q) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = p.size();
  const std::size_t k = q.size();
  auto walk = [&](auto&& self, std::size_t i, std::size_t j, double running) -> void {
    running = std::max(running, curvegrid::distance(p.vertices[i], q.vertices[j]));
    if (running >= best) return;
    if (i + 1 == m && j + 1 == k) {
      best = running;
      return;
    }
    if (i + 1 < m) self(self, i + 1, j, running);
    if (j + 1 < k) self(self, i, j + 1, running);
    if (i + 1 < m && j + 1 < k) self(self, i + 1, j + 1, running);
  };
  walk(walk, 0, 0, 0.0);
  return best;
}

// Inserts extra vertices so every edge is at most h long. The discrete
// Frechet distance of two such refinements brackets the continuous one:
// continuous <= discrete(refined) <= continuous + 2h.
inline curvegrid::Curve resample_dense(const curvegrid::Curve& c, double h) {
  curvegrid::Curve r;
  r.id = c.id;
  r.vertices.push_back(c.vertices.front());
  for (std::size_t i = 1; i < c.size(); ++i) {
    const curvegrid::Point& a = c.vertices[i - 1];
    const curvegrid::Point& b = c.vertices[i];
    const double len = curvegrid::distance(a, b);
    const int pieces = len > 0.0 ? static_cast<int>(std::ceil(len / h)) : 1;
    for (int s = 1; s <= pieces; ++s) {
      const double t = static_cast<double>(s) / pieces;
      curvegrid::Point v(a.size());
      for (std::size_t d = 0; d < a.size(); ++d) v[d] = a[d] + t * (b[d] - a[d]);
      r.vertices.push_back(std::move(v));
    }
  }
  return r;
}

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::string tpl = (std::filesystem::temp_directory_path() / "curvegrid-XXXXXX").string();
    if (!mkdtemp(tpl.data())) throw std::runtime_error("mkdtemp failed");
    path = tpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Runs the CLI with the given argument string; returns the exit code and
// captures the streams when asked.
inline int run_cli(const std::string& args, std::string* out_text = nullptr,
                   std::string* err_text = nullptr) {
  TempDir dir;
  const std::string out_path = dir.file("out.txt");
  const std::string err_path = dir.file("err.txt");
  const std::string cmd =
      std::string(CURVEGRID_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  if (out_text) *out_text = slurp(out_path);
  if (err_text) *err_text = slurp(err_path);
  if (raw == -1) return -1;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace testsupport
