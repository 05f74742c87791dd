// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/imaging/projection.hpp"

#include <algorithm>
#include <vector>

namespace tacsim::imaging {

/// Unit surface normals in the camera frame, oriented toward the camera.
/// `degenerate` marks pixels whose Sobel cross product vanished; they carry
/// the fallback normal (0, 0, -1), i.e. facing straight back at the camera.
struct NormalMap {
  int width = 0, height = 0;
  Vec3List n;
  std::vector<char> degenerate;

  std::size_t at(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  const Vec3& operator()(int u, int v) const { return n[at(u, v)]; }
};

inline const Vec3 kFallbackNormal(0.0, 0.0, -1.0);

/// Sobel derivatives of the ordered cloud (1/8 normalization, replicated
/// borders); N = normalize(dp/du x dp/dv), flipped to face the camera.
inline NormalMap normals_sobel(const PointCloud& pc) {
  const int w = pc.width, h = pc.height;
  for (char ok : pc.valid) {
    if (!ok) throw ValidationError("normals_sobel: point cloud has holes; interpolate the depth map first");
  }
  NormalMap out;
  out.width = w;
  out.height = h;
  out.n.assign(pc.points.size(), kFallbackNormal);
  out.degenerate.assign(pc.points.size(), 0);
  auto P = [&](int u, int v) -> const Vec3& {
    return pc(std::clamp(u, 0, w - 1), std::clamp(v, 0, h - 1));
  };
  parallel_for(static_cast<std::ptrdiff_t>(h), [&](std::ptrdiff_t vv) {
    const int v = static_cast<int>(vv);
    for (int u = 0; u < w; ++u) {
      const Vec3 du = ((P(u + 1, v - 1) - P(u - 1, v - 1)) + 2.0 * (P(u + 1, v) - P(u - 1, v)) +
                       (P(u + 1, v + 1) - P(u - 1, v + 1))) / 8.0;
      const Vec3 dv = ((P(u - 1, v + 1) - P(u - 1, v - 1)) + 2.0 * (P(u, v + 1) - P(u, v - 1)) +
                       (P(u + 1, v + 1) - P(u + 1, v - 1))) / 8.0;
      Vec3 c = du.cross(dv);
      const double len = c.norm();
      const std::size_t i = out.at(u, v);
      if (!(len > 1e-12 * du.norm() * dv.norm()) || !(len > 0.0)) {
        out.degenerate[i] = 1;
        continue;
      }
      c /= len;
      if (c.dot(-pc.points[i]) < 0.0) c = -c;
      out.n[i] = c;
    }
  });
  return out;
}

} // namespace tacsim::imaging
