// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/hash.hpp"
#include "tacsim/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace tacsim::geometry {

using Face = std::array<std::uint32_t, 3>;

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void grow(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void grow(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  bool empty() const { return (hi.array() < lo.array()).any(); }
  Vec3 extent() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }
};

/// Triangle surface in millimetres. Immutable after construction; face
/// normals and areas are derived once.
class TriangleMesh {
public:
  TriangleMesh() = default;

  /// Validates indices and drops zero-area faces (count available through
  /// degenerate_faces()).
  TriangleMesh(Vec3List vertices, std::vector<Face> faces) : vertices_(std::move(vertices)) {
    const double scale = std::max(1.0, bounds_of(vertices_).extent().maxCoeff());
    const double area_floor = 1e-14 * scale * scale;
    faces_.reserve(faces.size());
    for (const Face& f : faces) {
      for (std::uint32_t i : f) {
        if (i >= vertices_.size()) {
          throw ValidationError("mesh face index " + std::to_string(i) + " out of range (" +
                                std::to_string(vertices_.size()) + " vertices)");
        }
      }
      const Vec3 n = (vertices_[f[1]] - vertices_[f[0]]).cross(vertices_[f[2]] - vertices_[f[0]]);
      const double twice_area = n.norm();
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || !(0.5 * twice_area > area_floor)) {
        ++degenerate_;
        continue;
      }
      faces_.push_back(f);
      normals_.push_back(n / twice_area);
      areas_.push_back(0.5 * twice_area);
    }
  }

  const Vec3List& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Vec3List& face_normals() const { return normals_; }
  const std::vector<double>& face_areas() const { return areas_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  /// Faces removed at construction because their area was zero.
  std::size_t degenerate_faces() const { return degenerate_; }

  std::array<Vec3, 3> triangle(std::size_t f) const {
    const Face& t = faces_[f];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  }

  Aabb bounds() const { return bounds_of(vertices_); }

  double surface_area() const {
    double a = 0.0;
    for (double x : areas_) a += x;
    return a;
  }

  /// Signed volume enclosed by the surface (positive for outward winding).
  double volume() const {
    double v = 0.0;
    for (const Face& f : faces_) {
      v += vertices_[f[0]].dot(vertices_[f[1]].cross(vertices_[f[2]]));
    }
    return v / 6.0;
  }

  /// Every undirected edge is used by exactly two faces, once in each direction.
  bool is_watertight() const {
    if (faces_.empty()) return false;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const Face& f : faces_) {
      for (int k = 0; k < 3; ++k) {
        ++directed[{f[k], f[(k + 1) % 3]}];
      }
    }
    for (const auto& [e, n] : directed) {
      if (n != 1) return false;
      auto rev = directed.find({e.second, e.first});
      if (rev == directed.end() || rev->second != 1) return false;
    }
    return true;
  }

  /// FNV-1a of the raw vertex buffer (x, y, z doubles per vertex).
  std::uint64_t vertex_hash() const {
    std::uint64_t h = kFnvOffset;
    for (const Vec3& v : vertices_) {
      const double xyz[3] = {v.x(), v.y(), v.z()};
      h = fnv1a64_of(std::span<const double>(xyz, 3), h);
    }
    return h;
  }

  /// Copy with every vertex mapped through `f` (topology kept).
  template <typename Fn> TriangleMesh transformed(Fn&& f) const {
    Vec3List v(vertices_.size());
    std::transform(vertices_.begin(), vertices_.end(), v.begin(), f);
    return TriangleMesh(std::move(v), faces_);
  }

  TriangleMesh with_vertices(Vec3List v) const {
    if (v.size() != vertices_.size()) {
      throw ValidationError("with_vertices: vertex count changed");
    }
    return TriangleMesh(std::move(v), faces_);
  }

private:
  static Aabb bounds_of(const Vec3List& v) {
    Aabb b;
    for (const Vec3& p : v) b.grow(p);
    return b;
  }

  Vec3List vertices_;
  std::vector<Face> faces_;
  Vec3List normals_;
  std::vector<double> areas_;
  std::size_t degenerate_ = 0;
};

/// Merges vertices with identical coordinates and remaps faces.
inline TriangleMesh weld_exact(const Vec3List& vertices, const std::vector<Face>& faces) {
  std::map<std::array<double, 3>, std::uint32_t> index;
  Vec3List out;
  std::vector<std::uint32_t> remap(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::array<double, 3> key{vertices[i].x(), vertices[i].y(), vertices[i].z()};
    auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(out.size()));
    if (inserted) out.push_back(vertices[i]);
    remap[i] = it->second;
  }
  std::vector<Face> f2;
  f2.reserve(faces.size());
  for (const Face& f : faces) f2.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  return TriangleMesh(std::move(out), std::move(f2));
}

/// Concatenates meshes (vertex indices offset, no welding).
inline TriangleMesh merge(std::span<const TriangleMesh> parts) {
  Vec3List v;
  std::vector<Face> f;
  for (const TriangleMesh& m : parts) {
    const auto base = static_cast<std::uint32_t>(v.size());
    v.insert(v.end(), m.vertices().begin(), m.vertices().end());
    for (const Face& t : m.faces()) f.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  return TriangleMesh(std::move(v), std::move(f));
}

} // namespace tacsim::geometry
