// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace tacsim::mpm {

/// Background grid: n nodes per axis spanning `length` mm from `origin`;
/// node (i, j, k) sits at origin + (i, j, k) * dx.
struct GridConfig {
  int nodes = 256;
  double length = 70.0;
  double dt = 1e-4;
  Vec3 origin = Vec3::Constant(-35.0);

  double dx() const { return length / nodes; }

  void validate() const {
    if (nodes < 8) throw ValidationError("grid: need at least 8 nodes per axis");
    if (!(length > 0.0)) throw ValidationError("grid: domain length must be > 0");
    if (!(dt > 0.0)) throw ValidationError("grid: time step must be > 0");
  }

  /// Centres the domain on `c`.
  GridConfig centered_on(const Vec3& c) const {
    GridConfig g = *this;
    g.origin = c - Vec3::Constant(0.5 * length);
    return g;
  }
};

/// Quadratic B-spline stencil of one point: base node and per-axis weights.
struct Stencil {
  Vec3i base;
  std::array<Vec3, 3> w; // w[j][axis]
  Vec3 frac;             // position relative to base, in cells

  double weight(int a, int b, int c) const { return w[a].x() * w[b].y() * w[c].z(); }
  /// (X_node - x_p) / dx for stencil offset (a, b, c).
  Vec3 offset(int a, int b, int c) const { return Vec3(a, b, c) - frac; }
};

inline Stencil make_stencil(const Vec3& x, const Vec3& origin, double inv_dx) {
  Stencil s;
  const Vec3 fx = (x - origin) * inv_dx;
  for (int a = 0; a < 3; ++a) s.base[a] = static_cast<int>(std::floor(fx[a] - 0.5));
  s.frac = fx - s.base.cast<double>();
  const Vec3& d = s.frac;
  s.w[0] = 0.5 * (1.5 - d.array()).square();
  s.w[1] = 0.75 - (d.array() - 1.0).square();
  s.w[2] = 0.5 * (d.array() - 0.5).square();
  return s;
}

/// Dense block of nodes covering the current particle footprint.
struct GridWindow {
  Vec3i lo = Vec3i::Zero();
  Vec3i shape = Vec3i::Zero();
  std::vector<double> mass;
  Vec3List momentum;
  Vec3List velocity;

  std::size_t size() const { return mass.size(); }

  std::size_t index(const Vec3i& node) const {
    const Vec3i r = node - lo;
    return (static_cast<std::size_t>(r.z()) * shape.y() + r.y()) * shape.x() + r.x();
  }

  void reset(const Vec3i& lo_node, const Vec3i& hi_node) {
    lo = lo_node;
    shape = hi_node - lo_node + Vec3i::Ones();
    const std::size_t n = static_cast<std::size_t>(shape.x()) * shape.y() * shape.z();
    mass.assign(n, 0.0);
    momentum.assign(n, Vec3::Zero());
    velocity.assign(n, Vec3::Zero());
  }
};

} // namespace tacsim::mpm
