// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Indenter trajectory harnesses. GelSight: square grid of contact points on a
// flat top face, normal presses only. GelTip: contact paths from the dome tip
// down the cylinder, each press followed by a shear sweep. Custom: an explicit
// list of indenter offsets.

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace tacsim::scene {

/// Inclusive sweep lo, lo + step, ... up to hi (with a 1e-9 relative slack).
struct Sweep {
  double lo = 0.0, hi = 0.0, step = 1.0;

  std::size_t count() const { return static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9)) + 1; }
  double value(std::size_t i) const { return lo + step * static_cast<double>(i); }
  std::vector<double> values() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < count(); ++i) v.push_back(value(i));
    return v;
  }

  void validate(const std::string& what) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
      throw ValidationError(what + ": sweep values must be finite");
    }
    if (!(step > 0.0)) throw ValidationError(what + ": step must be > 0");
    if (!(hi > lo)) throw ValidationError(what + ": range [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is degenerate");
  }
};

enum class TrajectoryKind { gelsight, geltip, custom };

inline const char* to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::gelsight: return "gelsight";
    case TrajectoryKind::geltip: return "geltip";
    case TrajectoryKind::custom: return "custom";
  }
  return "?";
}

struct Waypoint {
  Vec3 offset = Vec3::Zero(); // indenter displacement from its start pose (mm)
  bool record = true;
};

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::gelsight;
  Sweep grid{-3.0, 3.0, 1.5};      // gelsight contact grid, both axes (mm)
  Sweep tip_angle{0.0, 90.0, 10.0}; // geltip dome, degrees from the apex
  Sweep base{0.0, 12.0, 1.0};       // geltip wall, mm below the dome seam
  int paths = 4;                    // geltip contact paths around the axis
  Sweep depth{0.1, 1.2, 0.1};       // indentation depths (mm)
  int shear_directions = 0;
  double shear_step_deg = 45.0;
  Sweep shear_extent{0.1, 0.5, 0.1}; // mm
  bool record_release = true;
  std::vector<Waypoint> waypoints;

  static TrajectorySpec gelsight_default() { return TrajectorySpec{}; }

  static TrajectorySpec geltip_default() {
    TrajectorySpec t;
    t.kind = TrajectoryKind::geltip;
    t.depth = Sweep{0.1, 1.0, 0.1};
    t.shear_directions = 8;
    return t;
  }

  void validate() const {
    switch (kind) {
      case TrajectoryKind::gelsight:
        grid.validate("trajectory.grid");
        break;
      case TrajectoryKind::geltip:
        tip_angle.validate("trajectory.tip_angle");
        base.validate("trajectory.base");
        if (paths < 1) throw ValidationError("trajectory.paths: must be >= 1");
        if (tip_angle.lo < 0.0 || tip_angle.hi > 90.0) {
          throw ValidationError("trajectory.tip_angle: must stay within [0, 90] degrees");
        }
        if (base.lo < 0.0) throw ValidationError("trajectory.base: must be >= 0");
        break;
      case TrajectoryKind::custom:
        if (waypoints.empty()) throw ValidationError("trajectory.waypoints: at least one waypoint required");
        return;
    }
    depth.validate("trajectory.depth");
    if (depth.lo < 0.0) throw ValidationError("trajectory.depth: depths must be >= 0");
    if (shear_directions < 0) throw ValidationError("trajectory.shear.directions: must be >= 0");
    if (shear_directions > 0) {
      if (!(shear_step_deg > 0.0)) throw ValidationError("trajectory.shear.step_deg: must be > 0");
      shear_extent.validate("trajectory.shear.extent");
      if (shear_extent.lo < 0.0) throw ValidationError("trajectory.shear.extent: must be >= 0");
    }
  }

  std::size_t contact_count() const {
    switch (kind) {
      case TrajectoryKind::gelsight: return grid.count() * grid.count();
      case TrajectoryKind::geltip: return static_cast<std::size_t>(paths) * (tip_angle.count() + base.count());
      case TrajectoryKind::custom: return 1;
    }
    return 0;
  }

  /// Frames recorded while pressing or shearing.
  std::size_t contact_frames() const {
    if (kind == TrajectoryKind::custom) {
      std::size_t n = 0;
      for (const auto& w : waypoints) n += w.record;
      return n;
    }
    const std::size_t shear = static_cast<std::size_t>(shear_directions) * shear_extent.count();
    return contact_count() * depth.count() * (1 + shear);
  }

  /// Flagged frames after each return to the contact origin.
  std::size_t release_frames() const {
    if (kind == TrajectoryKind::custom || !record_release) return 0;
    return contact_count() * depth.count() * static_cast<std::size_t>(std::max(shear_directions, 1));
  }

  std::size_t total_frames() const { return contact_frames() + release_frames(); }
};

/// Analytic mounting primitive: the flat top face of a slab or the finger
/// (cylinder of `radius` for 0 <= z <= `length`, dome centred at z = length).
struct Mount {
  enum Kind { plane, finger } kind = plane;
  Vec3 centre = Vec3::Zero(); // plane: point on the face; its normal is +z
  double radius = 10.0, length = 20.0;
};

struct ContactPoint {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ(); // outward surface normal
  Vec3 t1 = Vec3::UnitX(), t2 = Vec3::UnitY();
  int path = 0;       // geltip path or gelsight row
  int position = 0;   // index along the path or gelsight column
  std::string region; // "grid", "tip", "base"
};

/// Orthonormal tangent pair with t1 x t2 = n: t1 follows +z projected onto
/// the tangent plane (the meridian on the finger), +x when n is near +-z.
inline void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  Vec3 ref = std::abs(n.z()) > 0.9 ? Vec3::UnitX() : Vec3::UnitZ();
  t1 = (ref - ref.dot(n) * n).normalized();
  t2 = n.cross(t1);
}

/// Contact points in the harness loop order.
inline std::vector<ContactPoint> contact_points(const TrajectorySpec& t, const Mount& m) {
  std::vector<ContactPoint> out;
  auto finish = [&](ContactPoint c) {
    tangent_basis(c.normal, c.t1, c.t2);
    out.push_back(c);
  };
  if (t.kind == TrajectoryKind::gelsight) {
    if (m.kind != Mount::plane) throw ValidationError("trajectory: gelsight harness needs a flat sensor");
    const auto g = t.grid.values();
    for (std::size_t iy = 0; iy < g.size(); ++iy)
      for (std::size_t ix = 0; ix < g.size(); ++ix) {
        ContactPoint c;
        c.point = m.centre + Vec3(g[ix], g[iy], 0.0);
        c.normal = Vec3::UnitZ();
        c.path = static_cast<int>(iy);
        c.position = static_cast<int>(ix);
        c.region = "grid";
        finish(c);
      }
  } else if (t.kind == TrajectoryKind::geltip) {
    if (m.kind != Mount::finger) throw ValidationError("trajectory: geltip harness needs a finger sensor");
    for (int p = 0; p < t.paths; ++p) {
      const double phi = 2.0 * std::numbers::pi * p / t.paths;
      const Vec3 radial(std::cos(phi), std::sin(phi), 0.0);
      int k = 0;
      for (double a : t.tip_angle.values()) {
        const double al = a * std::numbers::pi / 180.0;
        ContactPoint c;
        c.normal = std::sin(al) * radial + std::cos(al) * Vec3::UnitZ();
        c.point = Vec3(0.0, 0.0, m.length) + m.radius * c.normal;
        c.path = p;
        c.position = k++;
        c.region = "tip";
        finish(c);
      }
      for (double d : t.base.values()) {
        if (d > m.length) throw ValidationError("trajectory.base: contact below the finger base");
        ContactPoint c;
        c.normal = radial;
        c.point = m.radius * radial + Vec3(0.0, 0.0, m.length - d);
        c.path = p;
        c.position = k++;
        c.region = "base";
        finish(c);
      }
    }
  } else {
    throw ValidationError("trajectory: custom trajectories have no contact grid");
  }
  return out;
}

/// Shear direction k in the tangent plane of `c`.
inline Vec3 shear_direction(const ContactPoint& c, const TrajectorySpec& t, int k) {
  const double b = k * t.shear_step_deg * std::numbers::pi / 180.0;
  return std::cos(b) * c.t1 + std::sin(b) * c.t2;
}

} // namespace tacsim::scene
