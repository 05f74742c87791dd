// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plane / triangle-mesh cross sections chained into polylines.

#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/mesh.hpp"
#include "tacsim/geometry/plane.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace tacsim::geometry {

/// Endpoint weld tolerance used when chaining intersection segments (mm).
inline constexpr double kWeldTolerance = 1e-6;

struct Polyline {
  Vec3List points;
  bool closed = false;

  double length() const {
    double l = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) l += (points[i] - points[i - 1]).norm();
    if (closed && points.size() > 1) l += (points.front() - points.back()).norm();
    return l;
  }
};

namespace detail {

using EdgeKey = std::pair<std::uint32_t, std::uint32_t>;

inline void drop_repeats(Polyline& pl, double tol) {
  Vec3List out;
  for (const Vec3& p : pl.points) {
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  }
  if (pl.closed && out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
  pl.points = std::move(out);
}

/// Joins open polylines whose ends coincide within `tol` (meshes that were not
/// vertex-welded produce such breaks).
inline void merge_open_ends(std::vector<Polyline>& lines, double tol) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < lines.size() && !merged; ++a) {
      if (lines[a].closed) continue;
      if (lines[a].points.size() > 2 && (lines[a].points.front() - lines[a].points.back()).norm() <= tol) {
        lines[a].points.pop_back();
        lines[a].closed = true;
        merged = true;
        break;
      }
      for (std::size_t b = a + 1; b < lines.size() && !merged; ++b) {
        if (lines[b].closed) continue;
        auto& pa = lines[a].points;
        auto& pb = lines[b].points;
        auto near = [tol](const Vec3& x, const Vec3& y) { return (x - y).norm() <= tol; };
        if (near(pa.back(), pb.front())) {
          pa.insert(pa.end(), pb.begin() + 1, pb.end());
        } else if (near(pa.back(), pb.back())) {
          pa.insert(pa.end(), pb.rbegin() + 1, pb.rend());
        } else if (near(pa.front(), pb.back())) {
          pb.insert(pb.end(), pa.begin() + 1, pa.end());
          pa = std::move(pb);
        } else if (near(pa.front(), pb.front())) {
          std::reverse(pa.begin(), pa.end());
          pa.insert(pa.end(), pb.begin() + 1, pb.end());
        } else {
          continue;
        }
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(b));
        merged = true;
      }
    }
  }
}

inline std::vector<Polyline> slice_faces(const TriangleMesh& mesh, const Plane& plane,
                                         const std::vector<std::uint32_t>& candidates) {
  const auto& verts = mesh.vertices();
  auto d = [&](std::uint32_t v) { return plane.signed_distance(verts[v]); };
  // Vertices exactly on the plane count as positive (symbolic perturbation):
  // every crossing triangle then has exactly two crossing edges.
  auto positive = [&](std::uint32_t v) { return d(v) >= 0.0; };
  auto pack = [](EdgeKey k) { return (static_cast<std::uint64_t>(k.first) << 32) | k.second; };

  // one segment per crossing face, joining two crossed edges
  std::vector<std::pair<EdgeKey, EdgeKey>> segs;
  for (std::uint32_t f : candidates) {
    const Face& t = mesh.faces()[f];
    EdgeKey hits[2];
    int nh = 0;
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = t[k], b = t[(k + 1) % 3];
      if (positive(a) == positive(b)) continue;
      if (nh < 2) hits[nh++] = std::minmax(a, b);
    }
    if (nh == 2) segs.emplace_back(hits[0], hits[1]);
  }

  // edge key -> incident segments, in insertion order
  std::vector<std::pair<std::uint64_t, std::uint32_t>> ends;
  ends.reserve(2 * segs.size());
  for (std::uint32_t i = 0; i < segs.size(); ++i) {
    ends.emplace_back(pack(segs[i].first), i);
    ends.emplace_back(pack(segs[i].second), i);
  }
  std::sort(ends.begin(), ends.end());
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> first; // range start per key in `ends`
  for (std::uint32_t i = 0; i < ends.size(); ++i) {
    if (keys.empty() || keys.back() != ends[i].first) {
      keys.push_back(ends[i].first);
      first.push_back(i);
    }
  }
  first.push_back(static_cast<std::uint32_t>(ends.size()));
  auto key_index = [&](EdgeKey k) {
    return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), pack(k)) - keys.begin());
  };
  auto point_of = [&](std::size_t ki) {
    const auto a = static_cast<std::uint32_t>(keys[ki] >> 32), b = static_cast<std::uint32_t>(keys[ki]);
    const double da = d(a), db = d(b);
    const Vec3& va = verts[a];
    const Vec3& vb = verts[b];
    return da == 0.0 ? va : (db == 0.0 ? vb : Vec3(va + (vb - va) * (da / (da - db))));
  };

  std::vector<char> used(segs.size(), 0);
  auto remaining = [&](std::size_t ki) {
    int n = 0;
    for (std::uint32_t e = first[ki]; e < first[ki + 1]; ++e) n += !used[ends[e].second];
    return n;
  };

  std::vector<Polyline> lines;
  auto walk = [&](std::size_t start) {
    Polyline pl;
    pl.points.push_back(point_of(start));
    std::size_t cur = start;
    for (;;) {
      std::uint32_t seg = UINT32_MAX;
      for (std::uint32_t e = first[cur]; e < first[cur + 1]; ++e) {
        if (!used[ends[e].second]) {
          seg = ends[e].second;
          break;
        }
      }
      if (seg == UINT32_MAX) break;
      used[seg] = 1;
      const std::size_t a = key_index(segs[seg].first), b = key_index(segs[seg].second);
      cur = a == cur ? b : a;
      if (cur == start) {
        pl.closed = true;
        break;
      }
      pl.points.push_back(point_of(cur));
    }
    drop_repeats(pl, kWeldTolerance);
    if (pl.points.size() >= 2) lines.push_back(std::move(pl));
  };
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (remaining(k) == 1) walk(k);
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (remaining(k) > 0) walk(k);
  }
  merge_open_ends(lines, kWeldTolerance);
  return lines;
}

} // namespace detail

/// Cross section of `mesh` with `plane`: one segment per crossing triangle,
/// chained into polylines; disjoint components are returned separately.
inline std::vector<Polyline> plane_mesh_intersection(const TriangleMesh& mesh, const Plane& plane) {
  std::vector<std::uint32_t> all(mesh.face_count());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return detail::slice_faces(mesh, plane, all);
}

/// Same result as the all-faces overload; the hierarchy only culls faces.
inline std::vector<Polyline> plane_mesh_intersection(const Bvh& bvh, const Plane& plane) {
  return detail::slice_faces(bvh.mesh(), plane, bvh.faces_near_plane(plane));
}

} // namespace tacsim::geometry
