// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/particles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace tacsim::mpm {

/// Velocity (mm/s) to apply during the step [t, t + dt]; t is local to the
/// current boundary phase.
using VelocitySchedule = std::function<Vec3(double t, double dt)>;

struct RigidConstraint {
  RegionTag tag;
  VelocitySchedule velocity;
};

struct BoundarySpec {
  std::vector<RegionTag> fixed;
  std::vector<RigidConstraint> rigid;

  void validate() const {
    std::set<RegionTag> seen;
    for (RegionTag t : fixed) {
      if (!seen.insert(t).second) {
        throw ValidationError("boundary: tag '" + std::string(to_string(t)) + "' listed twice");
      }
    }
    for (const auto& r : rigid) {
      if (!r.velocity) throw ValidationError("boundary: rigid constraint without a schedule");
      if (!seen.insert(r.tag).second) {
        throw ValidationError("boundary: tag '" + std::string(to_string(r.tag)) + "' in more than one constraint");
      }
    }
  }
};

inline VelocitySchedule constant_velocity(const Vec3& v) {
  return [v](double, double) { return v; };
}

/// Straight move by `displacement` at `speed` mm/s. The velocity reported for
/// a step is the exact position increment over that step, so the body lands
/// on the target and then stays put.
struct LinearMove {
  Vec3 displacement = Vec3::Zero();
  double speed = 1.0;

  double duration() const { return displacement.norm() / speed; }

  Vec3 position(double t) const {
    const double T = duration();
    if (!(T > 0.0)) return displacement;
    return displacement * std::clamp(t / T, 0.0, 1.0);
  }

  Vec3 velocity(double t, double dt) const { return (position(t + dt) - position(t)) / dt; }

  /// True once the phase time covers the whole move (before the step that
  /// would overshoot, the clamp has already delivered the remainder).
  bool finished(double t) const { return t >= duration() * (1.0 - 1e-12); }

  VelocitySchedule schedule() const {
    if (!(speed > 0.0)) throw ValidationError("linear move: speed must be > 0");
    const LinearMove m = *this;
    return [m](double t, double dt) { return m.velocity(t, dt); };
  }
};

} // namespace tacsim::mpm
