// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Analytic membranes seen by an on-axis camera at the origin: a flat sheet at
// z = 20 and a finger (cylinder wall + dome, axis +z, base at z = 0).

#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/primitives.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/normals.hpp"
#include "tacsim/imaging/projection.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace tacsim::test {

struct FieldScene {
  imaging::Camera cam;
  std::shared_ptr<geometry::TriangleMesh> mesh;
  std::shared_ptr<geometry::Bvh> bvh;
  imaging::DepthMap depth;
  imaging::PointCloud cloud;
  imaging::NormalMap normals;
};

inline imaging::Camera origin_camera(int w, int h) {
  imaging::Camera c;
  c.width = w;
  c.height = h;
  c.fov = std::numbers::pi / 2;
  return c;
}

inline void finish_scene(FieldScene& s) {
  s.depth.provenance = imaging::Provenance::dense;
  s.cloud = imaging::unproject(s.depth, s.cam);
  s.normals = imaging::normals_sobel(s.cloud);
  s.bvh = std::make_shared<geometry::Bvh>(*s.mesh);
}

inline FieldScene flat_scene(int w = 80, int h = 60, double z = 20.0) {
  FieldScene s;
  s.cam = origin_camera(w, h);
  s.mesh = std::make_shared<geometry::TriangleMesh>(geometry::make_grid_patch(-40, 40, -40, 40, z, 16, 16, false));
  s.depth = imaging::DepthMap(w, h);
  for (auto& d : s.depth.z) d = z;
  finish_scene(s);
  return s;
}

inline constexpr double kFingerRadius = 10.0;
inline constexpr double kFingerLength = 20.0;

/// Exact depth of the finger surface along pixel (u, v).
inline double finger_depth(const imaging::Intrinsics& k, double u, double v) {
  const double dx = (u - k.cx) / k.fu, dy = (v - k.cy) / k.fv;
  const double r2 = dx * dx + dy * dy;
  if (r2 > 0.0) {
    const double t = kFingerRadius / std::sqrt(r2);
    if (t <= kFingerLength) return t;
  }
  // dome: |t d - c|^2 = R^2 with d = (dx, dy, 1), c = (0, 0, L)
  const double a = r2 + 1.0, b = -2.0 * kFingerLength, c = kFingerLength * kFingerLength - kFingerRadius * kFingerRadius;
  return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

inline FieldScene finger_scene(int w = 96, int h = 72, int segments = 256) {
  FieldScene s;
  s.cam = origin_camera(w, h);
  s.mesh = std::make_shared<geometry::TriangleMesh>(
      geometry::make_finger_outer_surface(kFingerRadius, kFingerLength, segments, 48, 80));
  const auto k = s.cam.k();
  s.depth = imaging::DepthMap(w, h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) s.depth.z[s.depth.at(u, v)] = finger_depth(k, u, v);
  finish_scene(s);
  return s;
}

/// Outward cylinder normal at a wall point.
inline Vec3 cylinder_normal(const Vec3& p) { return Vec3(p.x(), p.y(), 0.0).normalized(); }

} // namespace tacsim::test
