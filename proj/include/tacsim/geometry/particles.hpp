// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tacsim {

/// Region tags partition every particle set.
enum class RegionTag : std::uint8_t {
  membrane_surface = 0,
  membrane_interior = 1,
  support = 2,
  actuator = 3,
  object = 4,
};

inline constexpr std::string_view to_string(RegionTag t) {
  switch (t) {
  case RegionTag::membrane_surface: return "membrane-surface";
  case RegionTag::membrane_interior: return "membrane-interior";
  case RegionTag::support: return "support";
  case RegionTag::actuator: return "actuator";
  case RegionTag::object: return "object";
  }
  return "unknown";
}

inline RegionTag region_tag_from_string(std::string_view s) {
  for (auto t : {RegionTag::membrane_surface, RegionTag::membrane_interior, RegionTag::support, RegionTag::actuator,
                 RegionTag::object}) {
    if (to_string(t) == s) return t;
  }
  throw ValidationError("unknown region tag '" + std::string(s) + "'");
}

/// Tagged particle cloud with stable integer indices (mm).
struct ParticleSet {
  Vec3List positions;
  std::vector<std::int64_t> indices;
  std::vector<RegionTag> tags;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void push_back(const Vec3& p, std::int64_t index, RegionTag tag) {
    positions.push_back(p);
    indices.push_back(index);
    tags.push_back(tag);
  }

  std::size_t count(RegionTag t) const {
    std::size_t n = 0;
    for (RegionTag x : tags) n += (x == t);
    return n;
  }

  /// Subset whose tag equals `t`, original indices kept.
  ParticleSet with_tag(RegionTag t) const {
    ParticleSet out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (tags[i] == t) out.push_back(positions[i], indices[i], tags[i]);
    }
    return out;
  }

  /// Re-tags every particle for which `pred(position, tag)` holds.
  template <typename Pred> void retag(Pred&& pred, RegionTag to) {
    for (std::size_t i = 0; i < size(); ++i) {
      if (pred(positions[i], tags[i])) tags[i] = to;
    }
  }

  /// Appends `other`, offsetting its indices to follow this set.
  void append(const ParticleSet& other) {
    std::int64_t base = 0;
    for (std::int64_t i : indices) base = std::max(base, i + 1);
    for (std::size_t i = 0; i < other.size(); ++i) push_back(other.positions[i], base + other.indices[i], other.tags[i]);
  }
};

} // namespace tacsim
