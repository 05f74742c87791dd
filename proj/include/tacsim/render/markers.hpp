// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/particles.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/projection.hpp"
#include "tacsim/render/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace tacsim::render {

/// Markers bound to membrane particles. Positions are world-space; `uv0`/`uv1`
/// are the continuous pixel coordinates before and after displacement.
struct MarkerSet {
  std::vector<std::int64_t> indices;
  Vec3List initial;
  Vec3List displaced;
  std::vector<Vec2> uv0, uv1;

  std::size_t size() const { return indices.size(); }
  Vec2 arrow(std::size_t k) const { return uv1[k] - uv0[k]; }
};

inline Vec2 project_uv(const imaging::Camera& cam, const Vec3& world) {
  const auto px = imaging::project_point(cam.k(), cam.to_camera(world));
  return Vec2(px.u, px.v);
}

/// One marker per `pitch`-sized world cell: the surface particle closest to
/// the cell centre (lowest index on ties). Order follows particle index.
inline MarkerSet make_marker_grid(const ParticleSet& surface, double pitch, const imaging::Camera& cam) {
  if (!(pitch > 0.0)) throw ValidationError("marker grid: pitch must be > 0");
  std::map<std::tuple<long, long, long>, std::size_t> best;
  auto cell = [&](const Vec3& p) {
    return std::make_tuple(static_cast<long>(std::floor(p.x() / pitch)), static_cast<long>(std::floor(p.y() / pitch)),
                           static_cast<long>(std::floor(p.z() / pitch)));
  };
  auto centre_dist = [&](const Vec3& p) {
    const auto [i, j, k] = cell(p);
    return (p - Vec3((i + 0.5) * pitch, (j + 0.5) * pitch, (k + 0.5) * pitch)).squaredNorm();
  };
  for (std::size_t p = 0; p < surface.size(); ++p) {
    auto [it, fresh] = best.try_emplace(cell(surface.positions[p]), p);
    if (fresh) continue;
    const std::size_t q = it->second;
    const double dp = centre_dist(surface.positions[p]), dq = centre_dist(surface.positions[q]);
    if (dp < dq || (dp == dq && surface.indices[p] < surface.indices[q])) it->second = p;
  }
  std::vector<std::size_t> chosen;
  for (const auto& [key, p] : best) chosen.push_back(p);
  std::sort(chosen.begin(), chosen.end(),
            [&](std::size_t a, std::size_t b) { return surface.indices[a] < surface.indices[b]; });
  MarkerSet m;
  for (std::size_t p : chosen) {
    m.indices.push_back(surface.indices[p]);
    m.initial.push_back(surface.positions[p]);
    m.displaced.push_back(surface.positions[p]);
    const Vec2 uv = project_uv(cam, surface.positions[p]);
    m.uv0.push_back(uv);
    m.uv1.push_back(uv);
  }
  return m;
}

/// Markers at explicit particle indices of `surface`.
inline MarkerSet make_markers(const ParticleSet& surface, const std::vector<std::int64_t>& indices,
                              const imaging::Camera& cam) {
  std::unordered_map<std::int64_t, std::size_t> at;
  for (std::size_t p = 0; p < surface.size(); ++p) at.emplace(surface.indices[p], p);
  MarkerSet m;
  for (std::int64_t id : indices) {
    auto it = at.find(id);
    if (it == at.end()) throw ValidationError("markers: particle index " + std::to_string(id) + " not found");
    const Vec3& x = surface.positions[it->second];
    m.indices.push_back(id);
    m.initial.push_back(x);
    m.displaced.push_back(x);
    m.uv0.push_back(project_uv(cam, x));
    m.uv1.push_back(m.uv0.back());
  }
  return m;
}

/// Moves markers to the deformed positions of their particles.
inline MarkerSet track_markers(const MarkerSet& markers, const ParticleSet& deformed, const imaging::Camera& cam) {
  std::unordered_map<std::int64_t, std::size_t> at;
  for (std::size_t p = 0; p < deformed.size(); ++p) at.emplace(deformed.indices[p], p);
  MarkerSet out = markers;
  for (std::size_t k = 0; k < markers.size(); ++k) {
    auto it = at.find(markers.indices[k]);
    if (it == at.end()) {
      throw ValidationError("track_markers: particle index " + std::to_string(markers.indices[k]) + " missing");
    }
    out.displaced[k] = deformed.positions[it->second];
    out.uv0[k] = project_uv(cam, markers.initial[k]);
    out.uv1[k] = project_uv(cam, out.displaced[k]);
  }
  return out;
}

struct MarkerStyle {
  std::uint8_t dot[3] = {0, 0, 0};
  std::uint8_t arrow[3] = {255, 255, 0};
  int radius = 1;           // dot covers (2r+1)^2 pixels
  double arrow_scale = 1.0; // multiplies the pixel displacement
  bool draw_arrows = true;
};

/// Burns dots (displaced positions) and displacement arrows into a copy.
inline TactileImage overlay_markers(const TactileImage& image, const MarkerSet& markers, const MarkerStyle& style = {}) {
  TactileImage out = image;
  auto put = [&](long x, long y, const std::uint8_t* col) {
    if (x < 0 || y < 0 || x >= out.width || y >= out.height) return;
    const std::size_t p = static_cast<std::size_t>(y) * out.width + x;
    for (int c = 0; c < 3; ++c) out(p, c) = col[c];
  };
  for (std::size_t k = 0; k < markers.size(); ++k) {
    const Vec2 a = markers.uv0[k], b = markers.uv1[k];
    const long cx = static_cast<long>(std::floor(b.x() + 0.5)), cy = static_cast<long>(std::floor(b.y() + 0.5));
    if (!std::isfinite(b.x()) || !std::isfinite(b.y()) || cx < 0 || cy < 0 || cx >= out.width || cy >= out.height) {
      continue;
    }
    if (style.draw_arrows) {
      const Vec2 tip = a + style.arrow_scale * (b - a);
      const double len = (tip - a).norm();
      const int steps = static_cast<int>(std::ceil(len));
      for (int s = 1; s <= steps; ++s) {
        const Vec2 q = a + (tip - a) * (static_cast<double>(s) / steps);
        put(static_cast<long>(std::floor(q.x() + 0.5)), static_cast<long>(std::floor(q.y() + 0.5)), style.arrow);
      }
    }
    for (int dy = -style.radius; dy <= style.radius; ++dy)
      for (int dx = -style.radius; dx <= style.radius; ++dx) put(cx + dx, cy + dy, style.dot);
  }
  return out;
}

/// Marker table: index (i64), uv0 and uv1 (N x 2 f64).
inline void add_markers(Container& c, const std::string& prefix, const MarkerSet& m) {
  const auto n = static_cast<std::uint64_t>(m.size());
  std::vector<double> uv0, uv1;
  for (std::size_t k = 0; k < m.size(); ++k) {
    uv0.insert(uv0.end(), {m.uv0[k].x(), m.uv0[k].y()});
    uv1.insert(uv1.end(), {m.uv1[k].x(), m.uv1[k].y()});
  }
  c.add<std::int64_t>(prefix + "index", {n}, m.indices);
  c.add<double>(prefix + "uv0", {n, 2}, uv0);
  c.add<double>(prefix + "uv1", {n, 2}, uv1);
}

} // namespace tacsim::render
