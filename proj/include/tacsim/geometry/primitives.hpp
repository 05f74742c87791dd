// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Procedural meshes: boxes, icospheres, planar patches and surfaces of
// revolution (used for finger-shaped membranes).

#include "tacsim/core/error.hpp"
#include "tacsim/geometry/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace tacsim::geometry {

/// Closed axis-aligned box with outward winding, 12 triangles.
inline TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
  Vec3List v;
  for (int i = 0; i < 8; ++i) {
    v.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  std::vector<Face> f = {
      {0, 2, 3}, {0, 3, 1}, // z = lo
      {4, 5, 7}, {4, 7, 6}, // z = hi
      {0, 1, 5}, {0, 5, 4}, // y = lo
      {2, 6, 7}, {2, 7, 3}, // y = hi
      {0, 4, 6}, {0, 6, 2}, // x = lo
      {1, 3, 7}, {1, 7, 5}, // x = hi
  };
  return TriangleMesh(std::move(v), std::move(f));
}

/// Icosphere: icosahedron refined `subdivisions` times, vertices on the sphere.
inline TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Vec3List v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                         {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const auto id = static_cast<std::uint32_t>(v.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const Face& tri : f) {
      const auto a = midpoint(tri[0], tri[1]);
      const auto b = midpoint(tri[1], tri[2]);
      const auto c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  for (auto& p : v) p = center + radius * p;
  return TriangleMesh(std::move(v), std::move(f));
}

/// Planar rectangular patch tessellated into nx x ny quads. `normal_up`
/// selects +z winding (otherwise -z).
inline TriangleMesh make_grid_patch(double x0, double x1, double y0, double y1, double z, int nx, int ny,
                                    bool normal_up = true) {
  if (nx < 1 || ny < 1) {
    throw ValidationError("make_grid_patch: resolution must be >= 1");
  }
  Vec3List v;
  std::vector<Face> f;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      v.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, z);
    }
  }
  auto id = [nx](int i, int j) { return static_cast<std::uint32_t>(j * (nx + 1) + i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (normal_up) {
        f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        f.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
        f.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      }
    }
  }
  return TriangleMesh(std::move(v), std::move(f));
}

/// Surface of revolution about +z. `profile` holds (r, z) samples; points with
/// r == 0 become single pole vertices and axis-to-axis edges are skipped.
/// A closed profile traversed counter-clockwise in the (r, z) plane yields a
/// watertight solid with outward normals.
inline TriangleMesh make_lathe(const std::vector<Vec2>& profile, int segments, bool closed) {
  if (segments < 3 || profile.size() < 2) {
    throw ValidationError("make_lathe: need >= 3 segments and >= 2 profile points");
  }
  Vec3List v;
  std::vector<std::vector<std::uint32_t>> rings(profile.size());
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double r = profile[k].x(), z = profile[k].y();
    if (r < 0.0) {
      throw ValidationError("make_lathe: negative radius in profile");
    }
    if (r == 0.0) {
      rings[k].assign(segments, static_cast<std::uint32_t>(v.size()));
      v.emplace_back(0.0, 0.0, z);
      continue;
    }
    for (int s = 0; s < segments; ++s) {
      const double th = 2.0 * std::numbers::pi * s / segments;
      rings[k].push_back(static_cast<std::uint32_t>(v.size()));
      v.emplace_back(r * std::cos(th), r * std::sin(th), z);
    }
  }
  std::vector<Face> f;
  const std::size_t n = profile.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t k = 0; k < edges; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const bool pole0 = profile[k].x() == 0.0, pole1 = profile[k1].x() == 0.0;
    if (pole0 && pole1) continue;
    for (int s = 0; s < segments; ++s) {
      const int s1 = (s + 1) % segments;
      const std::uint32_t a = rings[k][s], b = rings[k][s1], c = rings[k1][s1], d = rings[k1][s];
      f.push_back({a, b, c});
      f.push_back({a, c, d});
    }
  }
  // At a pole two corners of each quad coincide; drop the collapsed triangle.
  std::vector<Face> clean;
  for (const Face& t : f) {
    if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2]) clean.push_back(t);
  }
  return TriangleMesh(std::move(v), std::move(clean));
}

/// Half-circle arc samples (r, z) from angle a0 to a1 (radians, measured
/// from +r toward +z) around (0, zc).
inline std::vector<Vec2> arc_profile(double radius, double zc, double a0, double a1, int steps) {
  std::vector<Vec2> out;
  for (int i = 0; i <= steps; ++i) {
    const double a = a0 + (a1 - a0) * i / steps;
    double r = radius * std::cos(a);
    if (std::abs(r) < 1e-12 * radius) r = 0.0;
    out.emplace_back(r, zc + radius * std::sin(a));
  }
  return out;
}

/// Finger-shaped membrane: hollow cylinder of height `length` capped by a
/// hemispherical dome, wall thickness `thickness`, base at z = 0.
inline std::vector<Vec2> finger_shell_profile(double outer_radius, double thickness, double length, int arc_steps) {
  const double ri = outer_radius - thickness;
  if (!(ri > 0.0) || !(length > 0.0)) {
    throw ValidationError("finger shell: need 0 < thickness < radius and length > 0");
  }
  std::vector<Vec2> p;
  p.emplace_back(outer_radius, 0.0);
  auto outer = arc_profile(outer_radius, length, 0.0, std::numbers::pi / 2, arc_steps);
  p.insert(p.end(), outer.begin(), outer.end());
  auto inner = arc_profile(ri, length, std::numbers::pi / 2, 0.0, arc_steps);
  p.insert(p.end(), inner.begin(), inner.end());
  p.emplace_back(ri, 0.0);
  return p;
}

inline TriangleMesh make_finger_shell(double outer_radius, double thickness, double length, int segments,
                                      int arc_steps) {
  return make_lathe(finger_shell_profile(outer_radius, thickness, length, arc_steps), segments, true);
}

/// Outer (reflective) surface of the finger shell only: open cylinder + dome.
inline TriangleMesh make_finger_outer_surface(double outer_radius, double length, int segments, int arc_steps,
                                              int wall_steps) {
  std::vector<Vec2> p;
  for (int i = 0; i < wall_steps; ++i) p.emplace_back(outer_radius, length * i / wall_steps);
  auto outer = arc_profile(outer_radius, length, 0.0, std::numbers::pi / 2, arc_steps);
  p.insert(p.end(), outer.begin(), outer.end());
  return make_lathe(p, segments, false);
}

} // namespace tacsim::geometry
