// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bounding-volume hierarchy over the faces of one TriangleMesh. Traversal only
// prunes; every candidate face goes through the same exact triangle test, so
// results match an all-faces scan.

#include "tacsim/geometry/mesh.hpp"
#include "tacsim/geometry/plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

namespace tacsim::geometry {

/// Self-intersection guard for ray queries (mm).
inline constexpr double kRayEpsilon = 1e-6;

struct RayHit {
  double t = 0.0;
  std::uint32_t face = 0;
};

/// Moller-Trumbore; returns the ray parameter of the hit (any sign) or
/// nothing when the ray is parallel or misses the triangle.
inline std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                                                const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  return e2.dot(q) * inv;
}

/// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

class Bvh {
public:
  static constexpr std::uint32_t kLeafSize = 4;

  explicit Bvh(TriangleMesh mesh) : mesh_(std::make_shared<const TriangleMesh>(std::move(mesh))) {
    const TriangleMesh& m = *mesh_;
    const std::size_t n = m.face_count();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    face_boxes_.resize(n);
    centroids_.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
      const auto tri = m.triangle(f);
      Aabb b;
      for (const Vec3& p : tri) b.grow(p);
      // Inflate so that the slab test can never reject a ray the exact
      // triangle test would accept.
      const Vec3 pad = 1e-9 * (b.extent().array() + 1.0).matrix();
      b.lo -= pad;
      b.hi += pad;
      face_boxes_[f] = b;
      centroids_[f] = (tri[0] + tri[1] + tri[2]) / 3.0;
    }
    if (n > 0) {
      nodes_.reserve(4 * n / kLeafSize + 1);
      nodes_.push_back({});
      build_into(0, 0, static_cast<std::uint32_t>(n));
    }
  }

  const TriangleMesh& mesh() const { return *mesh_; }

  /// Nearest hit with t in (eps, t_max); ties resolve to the lower face index.
  std::optional<RayHit> first_hit(const Vec3& origin, const Vec3& dir, double t_max,
                                  double eps = kRayEpsilon) const {
    std::optional<RayHit> best;
    if (nodes_.empty()) return best;
    const Vec3 inv = dir.cwiseInverse();
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      const double limit = best ? best->t : t_max;
      if (!slab(node.box, origin, inv, limit)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          const std::uint32_t f = order_[i];
          const auto tri = mesh_->triangle(f);
          const auto t = intersect_triangle(origin, dir, tri[0], tri[1], tri[2]);
          if (!t || !(*t > eps) || !(*t < t_max)) continue;
          if (!best || *t < best->t || (*t == best->t && f < best->face)) best = RayHit{*t, f};
        }
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
    return best;
  }

  /// Every hit with t > t_min, sorted by (t, face).
  std::vector<RayHit> all_hits(const Vec3& origin, const Vec3& dir, double t_min = 0.0) const {
    std::vector<RayHit> hits;
    visit_ray(origin, dir, std::numeric_limits<double>::infinity(), [&](std::uint32_t f) {
      const auto tri = mesh_->triangle(f);
      const auto t = intersect_triangle(origin, dir, tri[0], tri[1], tri[2]);
      if (t && *t > t_min) hits.push_back({*t, f});
    });
    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
      return a.t < b.t || (a.t == b.t && a.face < b.face);
    });
    return hits;
  }

  /// True when some face lies within `radius` of p.
  bool any_within(const Vec3& p, double radius) const {
    if (nodes_.empty()) return false;
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    const double r2 = radius * radius;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (box_distance2(node.box, p) > r2) continue;
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          const auto tri = mesh_->triangle(order_[i]);
          if ((closest_point_on_triangle(p, tri[0], tri[1], tri[2]) - p).squaredNorm() <= r2) return true;
        }
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
    return false;
  }

  /// Distance from p to the surface together with the nearest face.
  std::pair<double, std::uint32_t> closest(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_face = 0;
    if (nodes_.empty()) return {best, best_face};
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (box_distance2(node.box, p) > best) continue;
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          const std::uint32_t f = order_[i];
          const auto tri = mesh_->triangle(f);
          const double d2 = (closest_point_on_triangle(p, tri[0], tri[1], tri[2]) - p).squaredNorm();
          if (d2 < best || (d2 == best && f < best_face)) {
            best = d2;
            best_face = f;
          }
        }
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
    return {std::sqrt(best), best_face};
  }

  /// Faces whose bounding boxes touch the plane, ascending face order.
  std::vector<std::uint32_t> faces_near_plane(const Plane& plane) const {
    std::vector<std::uint32_t> out;
    if (nodes_.empty()) return out;
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      const Vec3 c = node.box.center();
      const Vec3 h = 0.5 * node.box.extent();
      const double radius = h.dot(plane.normal.cwiseAbs());
      if (std::abs(plane.signed_distance(c)) > radius) continue;
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) out.push_back(order_[i]);
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t node_count() const { return nodes_.size(); }

private:
  struct Node {
    Aabb box;
    std::uint32_t first = 0; // child index (inner) or first order_ slot (leaf)
    std::uint32_t count = 0; // 0 for inner nodes
  };

  template <typename Fn> void visit_ray(const Vec3& origin, const Vec3& dir, double t_max, Fn&& fn) const {
    if (nodes_.empty()) return;
    const Vec3 inv = dir.cwiseInverse();
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!slab(node.box, origin, inv, t_max)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) fn(order_[i]);
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
  }

  static bool slab(const Aabb& b, const Vec3& o, const Vec3& inv, double t_max) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = t_max;
    for (int k = 0; k < 3; ++k) {
      if (std::isinf(inv[k])) {
        if (o[k] < b.lo[k] || o[k] > b.hi[k]) return false;
        continue;
      }
      double ta = (b.lo[k] - o[k]) * inv[k];
      double tb = (b.hi[k] - o[k]) * inv[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    // Small relative slack keeps the test conservative under rounding.
    const double slack = 1e-12 * (1.0 + std::abs(t0) + std::abs(t1));
    return t0 <= t1 + slack && t1 + slack >= 0.0;
  }

  static double box_distance2(const Aabb& b, const Vec3& p) {
    const Vec3 d = (b.lo - p).cwiseMax(Vec3::Zero()).cwiseMax(p - b.hi);
    return d.squaredNorm();
  }

  void build_into(std::uint32_t slot, std::uint32_t first, std::uint32_t count) {
    Aabb box;
    Aabb cbox;
    for (std::uint32_t i = first; i < first + count; ++i) {
      box.grow(face_boxes_[order_[i]]);
      cbox.grow(centroids_[order_[i]]);
    }
    nodes_[slot].box = box;
    if (count <= kLeafSize) {
      nodes_[slot].first = first;
      nodes_[slot].count = count;
      return;
    }
    int axis = 0;
    cbox.extent().maxCoeff(&axis);
    const std::uint32_t mid = first + count / 2;
    std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = centroids_[a][axis], cb = centroids_[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const auto left = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_.push_back({});
    build_into(left, first, mid - first);
    build_into(left + 1, mid, first + count - mid);
    nodes_[slot].first = left;
    nodes_[slot].count = 0;
  }

  std::shared_ptr<const TriangleMesh> mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Aabb> face_boxes_;
  Vec3List centroids_;
  std::vector<Node> nodes_;
};

} // namespace tacsim::geometry
