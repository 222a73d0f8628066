#pragma once

#include <string>
#include <vector>

#include "curvegrid/anns_asym.hpp"
#include "curvegrid/anns_sym.hpp"
#include "curvegrid/asrs.hpp"
#include "curvegrid/geometry.hpp"
#include "curvegrid/twd.hpp"

namespace curvegrid {

/** Curve data files are line-delimited JSON, one curve per line:
 *  {"id": "...", "points": [[x, y, ...], ...]}. All curves in a file share
 *  one dimension and have at least one point. Point data files hold one
 *  record per line: {"region": "...", "t": 0.25}. Doubles are written in
 *  their shortest round-trip form, so write/read is bit-exact. */
std::vector<Curve> read_curves_jsonl(const std::string& path);
void write_curves_jsonl(const std::string& path, const std::vector<Curve>& curves);
std::vector<StampedPoint> read_points_jsonl(const std::string& path);
void write_points_jsonl(const std::string& path, const std::vector<StampedPoint>& points);

/** Index documents are single JSON objects with a format_version, a kind tag
 *  ("asym" | "sym" | "asrs" | "twd"), the build parameters, and the bucket
 *  map with sorted keys and sorted value lists. Serialization is
 *  deterministic: equal indexes produce byte-identical documents. Curve
 *  catalogs are not serialized; loaded indexes answer queries but tests that
 *  need the raw curves reread the data file. */
std::string serialize_index(const AsymIndex& index);
std::string serialize_index(const SymIndex& index);
std::string serialize_index(const AsrsIndex& index);
std::string serialize_index(const TwdIndex& index);

AsymIndex deserialize_asym(const std::string& text);
SymIndex deserialize_sym(const std::string& text);
AsrsIndex deserialize_asrs(const std::string& text);
TwdIndex deserialize_twd(const std::string& text);

/// The kind tag of a serialized index document.
std::string index_kind(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace curvegrid
