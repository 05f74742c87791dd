// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Particleization: structured lattice sampling of closed volumes and
// area-uniform sampling of surfaces.

#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/random.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/mesh.hpp"
#include "tacsim/geometry/particles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace tacsim::geometry {

/// Nodes of the lattice anchored at the mesh AABB minimum with pitch
/// `spacing` that lie inside or on the closed surface. Indices follow x-fastest
/// lattice scan order. Nodes with a 6-neighbour outside the set are tagged
/// membrane-surface, the rest membrane-interior.
inline ParticleSet sample_volume(const TriangleMesh& mesh, double spacing) {
  if (!(spacing > 0.0)) {
    throw ValidationError("sample_volume: spacing must be > 0");
  }
  if (!mesh.is_watertight()) {
    throw ValidationError("sample_volume: mesh is not watertight");
  }
  const Aabb box = mesh.bounds();
  const Vec3 ext = box.extent();
  if (spacing > ext.minCoeff()) {
    throw ValidationError("sample_volume: spacing exceeds the smallest mesh extent");
  }
  const Bvh bvh(mesh);
  const Vec3i n = ((ext / spacing).array() * (1.0 + 1e-12) + 1e-9).floor().cast<int>() + Eigen::Array3i::Ones();
  const double on_surface = 1e-9 * std::max(1.0, ext.maxCoeff());
  // Row rays run along +x from just outside the box; the tiny transverse
  // offsets keep them off mesh edges and vertices.
  const double jy = 0.7071067811865476e-7 * spacing, jz = 0.5772156649015329e-7 * spacing;
  const double x_start = box.lo.x() - spacing;

  const std::size_t nx = static_cast<std::size_t>(n.x()), ny = static_cast<std::size_t>(n.y()),
                    nz = static_cast<std::size_t>(n.z());
  std::vector<std::uint8_t> inside(nx * ny * nz, 0);
  parallel_for(static_cast<std::ptrdiff_t>(ny * nz), [&](std::ptrdiff_t row) {
    const std::size_t j = static_cast<std::size_t>(row) % ny, k = static_cast<std::size_t>(row) / ny;
    const double y = box.lo.y() + spacing * j, z = box.lo.z() + spacing * k;
    const auto hits = bvh.all_hits(Vec3(x_start, y + jy, z + jz), Vec3::UnitX(), 0.0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      const Vec3 p(box.lo.x() + spacing * i, y, z);
      const double t = p.x() - x_start;
      while (h < hits.size() && hits[h].t < t) ++h;
      bool in = (h % 2) == 1;
      if (!in) in = bvh.any_within(p, on_surface);
      inside[(k * ny + j) * nx + i] = in ? 1 : 0;
    }
  });

  auto at = [&](long i, long j, long k) -> bool {
    if (i < 0 || j < 0 || k < 0 || i >= n.x() || j >= n.y() || k >= n.z()) return false;
    return inside[(static_cast<std::size_t>(k) * ny + static_cast<std::size_t>(j)) * nx + static_cast<std::size_t>(i)];
  };

  ParticleSet out;
  std::int64_t next = 0;
  for (long k = 0; k < n.z(); ++k) {
    for (long j = 0; j < n.y(); ++j) {
      for (long i = 0; i < n.x(); ++i) {
        if (!at(i, j, k)) continue;
        const bool shell = !at(i - 1, j, k) || !at(i + 1, j, k) || !at(i, j - 1, k) || !at(i, j + 1, k) ||
                           !at(i, j, k - 1) || !at(i, j, k + 1);
        out.push_back(box.lo + spacing * Vec3(double(i), double(j), double(k)), next++,
                      shell ? RegionTag::membrane_surface : RegionTag::membrane_interior);
      }
    }
  }
  return out;
}

/// `count` points distributed uniformly by area over the surface, tagged object.
inline ParticleSet sample_surface(const TriangleMesh& mesh, std::size_t count, Rng& rng) {
  if (count < 1) {
    throw ValidationError("sample_surface: count must be >= 1");
  }
  if (mesh.empty()) {
    throw ValidationError("sample_surface: mesh is empty");
  }
  std::vector<double> cdf(mesh.face_count());
  double acc = 0.0;
  for (std::size_t f = 0; f < cdf.size(); ++f) {
    acc += mesh.face_areas()[f];
    cdf[f] = acc;
  }
  ParticleSet out;
  out.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t f = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    const auto tri = mesh.triangle(f);
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const Vec3 p = (1.0 - r1) * tri[0] + r1 * (1.0 - r2) * tri[1] + r1 * r2 * tri[2];
    out.push_back(p, static_cast<std::int64_t>(i), RegionTag::object);
  }
  return out;
}

} // namespace tacsim::geometry
