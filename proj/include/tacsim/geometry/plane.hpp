// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <cmath>

namespace tacsim::geometry {

struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();

  Plane() = default;

  /// `normal` is normalized here; a zero normal is rejected.
  Plane(const Vec3& p, const Vec3& n) : point(p), normal(n) {
    const double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw ValidationError("plane normal must be non-zero");
    }
    normal /= len;
  }

  double signed_distance(const Vec3& x) const { return normal.dot(x - point); }
};

} // namespace tacsim::geometry
