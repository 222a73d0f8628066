#include "curvegrid/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "curvegrid/errors.hpp"

namespace curvegrid {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw io_error(std::string("index document does not parse: ") + e.what());
  }
}

void require_header(const json& doc, const char* kind) {
  if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("kind"))
    throw io_error("index document lacks a format_version/kind header");
  if (doc.at("format_version").get<int>() != kFormatVersion)
    throw io_error("unsupported index format_version");
  if (doc.at("kind").get<std::string>() != kind)
    throw io_error(std::string("index kind is not '") + kind + "'");
}

const char* metric_name(Metric m) {
  return m == Metric::continuous ? "continuous" : "discrete";
}

Metric metric_from(const std::string& name) {
  if (name == "continuous") return Metric::continuous;
  if (name == "discrete") return Metric::discrete;
  throw io_error("unknown metric '" + name + "'");
}

json grid_to_json(const Grid& g) {
  json j;
  j["origin"] = g.origin;
  j["side"] = g.side;
  j["cell"] = g.cell;
  j["cells_per_axis"] = g.cells_per_axis;
  return j;
}

Grid grid_from_json(const json& j) {
  Grid g;
  g.origin = j.at("origin").get<Point>();
  g.side = j.at("side").get<double>();
  g.cell = j.at("cell").get<double>();
  g.cells_per_axis = j.at("cells_per_axis").get<std::int64_t>();
  return g;
}

}  // namespace

std::vector<Curve> read_curves_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open curve file '" + path + "'");
  std::vector<Curve> curves;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
      Curve c;
      c.id = rec.at("id").get<std::string>();
      c.vertices = rec.at("points").get<std::vector<Point>>();
      if (c.vertices.empty())
        throw io_error("curve '" + c.id + "' has no points");
      for (const Point& p : c.vertices) {
        if (dim == 0) dim = p.size();
        if (p.size() != dim || dim == 0)
          throw io_error("curve '" + c.id + "' breaks the file's uniform dimension");
      }
      curves.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw io_error(path + ":" + std::to_string(line_no) + ": bad curve record: " + e.what());
    }
  }
  return curves;
}

void write_curves_jsonl(const std::string& path, const std::vector<Curve>& curves) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write curve file '" + path + "'");
  for (const Curve& c : curves) {
    json rec;
    rec["id"] = c.id;
    rec["points"] = c.vertices;
    out << rec.dump() << '\n';
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

std::vector<StampedPoint> read_points_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open point file '" + path + "'");
  std::vector<StampedPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      points.push_back(StampedPoint{rec.at("region").get<std::string>(),
                                    rec.at("t").get<double>()});
    } catch (const json::exception& e) {
      throw io_error(path + ":" + std::to_string(line_no) + ": bad point record: " + e.what());
    }
  }
  return points;
}

void write_points_jsonl(const std::string& path, const std::vector<StampedPoint>& points) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write point file '" + path + "'");
  for (const StampedPoint& p : points) {
    json rec;
    rec["region"] = p.region;
    rec["t"] = p.t;
    out << rec.dump() << '\n';
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

std::string serialize_index(const AsymIndex& index) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "asym";
  doc["metric"] = metric_name(index.params.metric);
  doc["d"] = index.params.dim;
  doc["delta"] = index.params.delta;
  doc["eps"] = index.params.eps;
  doc["k"] = index.params.k;
  doc["diameter_estimate"] = index.diameter_estimate;
  doc["grid"] = grid_to_json(index.grid);
  doc["lattice_point_count"] = index.lattice_point_count;
  doc["path_capacity"] = index.path_capacity;
  doc["buckets"] = index.buckets;
  return doc.dump();
}

AsymIndex deserialize_asym(const std::string& text) {
  json doc = parse_document(text);
  try {
    require_header(doc, "asym");
    AsymIndex index;
    index.params.metric = metric_from(doc.at("metric").get<std::string>());
    index.params.dim = doc.at("d").get<std::size_t>();
    index.params.delta = doc.at("delta").get<double>();
    index.params.eps = doc.at("eps").get<double>();
    index.params.k = doc.at("k").get<std::size_t>();
    index.diameter_estimate = doc.at("diameter_estimate").get<double>();
    index.grid = grid_from_json(doc.at("grid"));
    index.lattice_point_count = doc.at("lattice_point_count").get<std::uint64_t>();
    index.path_capacity = doc.at("path_capacity").get<std::uint64_t>();
    index.buckets = doc.at("buckets").get<decltype(index.buckets)>();
    return index;
  } catch (const json::exception& e) {
    throw io_error(std::string("bad asym index document: ") + e.what());
  }
}

std::string serialize_index(const SymIndex& index) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "sym";
  doc["metric"] = "discrete";
  doc["d"] = index.params.dim;
  doc["delta"] = index.params.delta;
  doc["eps"] = index.params.eps;
  doc["derived"] = {{"eps_internal", index.derived.eps_internal},
                    {"cell", index.derived.cell},
                    {"radius_outer", index.derived.radius_outer},
                    {"radius_marked", index.derived.radius_marked},
                    {"mu", index.derived.mu}};
  doc["curve_sizes"] = index.curve_meta;
  doc["buckets"] = index.buckets;
  return doc.dump();
}

SymIndex deserialize_sym(const std::string& text) {
  json doc = parse_document(text);
  try {
    require_header(doc, "sym");
    SymIndex index;
    index.params.dim = doc.at("d").get<std::size_t>();
    index.params.delta = doc.at("delta").get<double>();
    index.params.eps = doc.at("eps").get<double>();
    const json& der = doc.at("derived");
    index.derived.eps_internal = der.at("eps_internal").get<double>();
    index.derived.cell = der.at("cell").get<double>();
    index.derived.radius_outer = der.at("radius_outer").get<double>();
    index.derived.radius_marked = der.at("radius_marked").get<double>();
    index.derived.mu = der.at("mu").get<double>();
    index.curve_meta = doc.at("curve_sizes").get<decltype(index.curve_meta)>();
    index.buckets = doc.at("buckets").get<decltype(index.buckets)>();
    return index;
  } catch (const json::exception& e) {
    throw io_error(std::string("bad sym index document: ") + e.what());
  }
}

std::string serialize_index(const AsrsIndex& index) {
  json buckets = json::object();
  for (const auto& [key, ranges] : index.buckets) {
    json list = json::array();
    for (const SubcurveRange& r : ranges) list.push_back(range_text(r));
    buckets[key] = std::move(list);
  }
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "asrs";
  doc["metric"] = "continuous";
  doc["d"] = index.params.dim;
  doc["delta"] = index.params.delta;
  doc["eps"] = index.params.eps;
  doc["k"] = index.params.k;
  doc["curve_id"] = index.curve_id;
  doc["curve_size"] = index.curve_size;
  doc["diameter_estimate"] = index.diameter_estimate;
  doc["grid"] = grid_to_json(index.grid);
  doc["lattice_point_count"] = index.lattice_point_count;
  doc["path_capacity"] = index.path_capacity;
  doc["buckets"] = std::move(buckets);
  return doc.dump();
}

AsrsIndex deserialize_asrs(const std::string& text) {
  json doc = parse_document(text);
  try {
    require_header(doc, "asrs");
    AsrsIndex index;
    index.params.dim = doc.at("d").get<std::size_t>();
    index.params.delta = doc.at("delta").get<double>();
    index.params.eps = doc.at("eps").get<double>();
    index.params.k = doc.at("k").get<std::size_t>();
    index.curve_id = doc.at("curve_id").get<std::string>();
    index.curve_size = doc.at("curve_size").get<std::size_t>();
    index.diameter_estimate = doc.at("diameter_estimate").get<double>();
    index.grid = grid_from_json(doc.at("grid"));
    index.lattice_point_count = doc.at("lattice_point_count").get<std::uint64_t>();
    index.path_capacity = doc.at("path_capacity").get<std::uint64_t>();
    index.curve.id = index.curve_id;
    for (const auto& [key, list] : doc.at("buckets").items()) {
      std::vector<SubcurveRange> ranges;
      for (const auto& item : list) ranges.push_back(parse_range_text(item.get<std::string>()));
      index.buckets.emplace(key, std::move(ranges));
    }
    return index;
  } catch (const json::exception& e) {
    throw io_error(std::string("bad asrs index document: ") + e.what());
  }
}

std::string serialize_index(const TwdIndex& index) {
  json buckets = json::object();
  for (const auto& [key, regions] : index.buckets)
    buckets[std::to_string(key.first) + "-" + std::to_string(key.second)] = regions;
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "twd";
  doc["theta"] = index.theta;
  doc["eps"] = index.eps;
  doc["t_min"] = index.t_min;
  doc["t_max"] = index.t_max;
  doc["shift"] = index.shift;
  doc["step"] = index.step;
  doc["subinterval_count"] = index.subinterval_count;
  doc["normalization"] = {{"offset", index.normalization.offset},
                          {"scale", index.normalization.scale},
                          {"rescaled", index.normalization.rescaled}};
  doc["endpoints"] = index.endpoints();
  doc["buckets"] = std::move(buckets);
  return doc.dump();
}

TwdIndex deserialize_twd(const std::string& text) {
  json doc = parse_document(text);
  try {
    require_header(doc, "twd");
    TwdIndex index;
    index.theta = doc.at("theta").get<std::uint64_t>();
    index.eps = doc.at("eps").get<double>();
    index.t_min = doc.at("t_min").get<double>();
    index.t_max = doc.at("t_max").get<double>();
    index.shift = doc.at("shift").get<double>();
    index.step = doc.at("step").get<double>();
    index.subinterval_count = doc.at("subinterval_count").get<std::size_t>();
    const json& norm = doc.at("normalization");
    index.normalization.offset = norm.at("offset").get<double>();
    index.normalization.scale = norm.at("scale").get<double>();
    index.normalization.rescaled = norm.at("rescaled").get<bool>();
    for (const auto& [key, regions] : doc.at("buckets").items()) {
      const auto dash = key.find('-');
      if (dash == std::string::npos) throw io_error("bad twd bucket key '" + key + "'");
      index.buckets.emplace(
          std::make_pair(std::stoull(key.substr(0, dash)), std::stoull(key.substr(dash + 1))),
          regions.get<std::vector<std::string>>());
    }
    return index;
  } catch (const json::exception& e) {
    throw io_error(std::string("bad twd index document: ") + e.what());
  }
}

std::string index_kind(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("kind"))
    throw io_error("index document lacks a kind tag");
  return doc.at("kind").get<std::string>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace curvegrid
