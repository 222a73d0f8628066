#pragma once

#include <cstdint>

namespace curvegrid {

/// Operation counter threaded through query paths. Lets callers assert the
/// constant-work query contracts (per-coordinate roundings, key builds, map
/// lookups, endpoint clamps) instead of trusting wall-clock noise.
struct QueryStats {
  std::uint64_t coordinate_roundings = 0;
  std::uint64_t key_builds = 0;
  std::uint64_t bucket_lookups = 0;
  std::uint64_t endpoint_clamps = 0;

  bool operator==(const QueryStats&) const = default;
};

}  // namespace curvegrid
