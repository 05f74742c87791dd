// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/parallel.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/particles.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/depth.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tacsim::imaging {

/// Ordered H x W point cloud in the camera frame; `valid` is false where the
/// source depth had a hole.
struct PointCloud {
  int width = 0, height = 0;
  Vec3List points;
  std::vector<char> valid;

  std::size_t at(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  const Vec3& operator()(int u, int v) const { return points[at(u, v)]; }
};

struct PixelDepth {
  double u, v, z;
};

/// Continuous pixel coordinates and z-depth of a camera-frame point.
inline PixelDepth project_point(const Intrinsics& k, const Vec3& q) {
  return {q.x() / q.z() * k.fu + k.cx, q.y() / q.z() * k.fv + k.cy, q.z()};
}

inline Vec3 unproject_pixel(const Intrinsics& k, double u, double v, double z) {
  return Vec3((u - k.cx) * z / k.fu, (v - k.cy) * z / k.fv, z);
}

/// Rasterizes world-space particles into a sparse z-depth map. Particles
/// behind the camera or outside the frame are dropped; in a shared pixel the
/// smallest z wins, then the lowest particle index.
inline DepthMap project(const ParticleSet& particles, const Camera& cam) {
  const Intrinsics k = cam.k();
  DepthMap d(cam.width, cam.height);
  for (std::size_t p = 0; p < particles.size(); ++p) {
    const Vec3 q = cam.to_camera(particles.positions[p]);
    if (!(q.z() > 0.0)) continue;
    const PixelDepth px = project_point(k, q);
    const double fu = std::floor(px.u + 0.5), fv = std::floor(px.v + 0.5);
    if (!(fu >= 0.0 && fu < cam.width && fv >= 0.0 && fv < cam.height)) continue;
    const std::size_t i = d.at(static_cast<int>(fu), static_cast<int>(fv));
    const std::int64_t id = particles.indices[p];
    if (d.hole(i) || q.z() < d.z[i] || (q.z() == d.z[i] && id < d.source[i])) {
      d.z[i] = q.z();
      d.distance[i] = q.norm();
      d.source[i] = id;
    }
  }
  d.provenance = d.is_dense() ? Provenance::dense : Provenance::sparse;
  return d;
}

/// Camera-frame points for every pixel (holes are flagged invalid).
inline PointCloud unproject(const DepthMap& d, const Camera& cam) {
  const Intrinsics k = cam.k();
  PointCloud pc;
  pc.width = d.width;
  pc.height = d.height;
  pc.points.assign(d.size(), Vec3::Constant(std::numeric_limits<double>::quiet_NaN()));
  pc.valid.assign(d.size(), 0);
  for (int v = 0; v < d.height; ++v)
    for (int u = 0; u < d.width; ++u) {
      const std::size_t i = d.at(u, v);
      if (d.hole(i)) continue;
      pc.points[i] = unproject_pixel(k, u, v, d.z[i]);
      pc.valid[i] = 1;
    }
  return pc;
}

/// Keeps the particles whose segment from the camera centre has no surface
/// hit closer than (distance - eps).
inline ParticleSet remove_occluded(const ParticleSet& particles, const geometry::Bvh& surface, const Camera& cam,
                                   double eps = geometry::kRayEpsilon) {
  std::vector<char> keep(particles.size(), 0);
  parallel_for(static_cast<std::ptrdiff_t>(particles.size()), [&](std::ptrdiff_t p) {
    const Vec3 ray = particles.positions[p] - cam.position;
    const double dist = ray.norm();
    if (!(dist > 0.0)) return;
    keep[p] = !surface.first_hit(cam.position, ray / dist, dist - eps);
  });
  ParticleSet out;
  for (std::size_t p = 0; p < particles.size(); ++p) {
    if (keep[p]) out.push_back(particles.positions[p], particles.indices[p], particles.tags[p]);
  }
  return out;
}

} // namespace tacsim::imaging
