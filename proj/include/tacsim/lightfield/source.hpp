// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tacsim::lightfield {

enum class SourceKind { point, line, area };

/// A light in world coordinates. `position` is used by point lights, `a`/`b`
/// are line endpoints, and `corners` holds a triangle (3) or a parallelogram
/// quad (4, in order) for area lights. Per-channel intensities are
/// color * i_d and color * i_s.
struct LightSource {
  SourceKind kind = SourceKind::point;
  Vec3 position = Vec3::Zero();
  Vec3 a = Vec3::Zero(), b = Vec3::Zero();
  Vec3List corners;
  Vec3 color = Vec3::Ones();
  Vec3 i_d = Vec3::Ones();
  Vec3 i_s = Vec3::Ones();
  int samples = 1;

  Vec3 diffuse() const { return color.cwiseProduct(i_d); }
  Vec3 specular() const { return color.cwiseProduct(i_s); }

  void validate() const {
    for (int c = 0; c < 3; ++c) {
      if (!(color[c] >= 0.0 && color[c] <= 1.0)) throw ValidationError("light source: color channels must be in [0, 1]");
      if (!(i_d[c] >= 0.0) || !(i_s[c] >= 0.0)) throw ValidationError("light source: intensities must be >= 0");
    }
    if (kind != SourceKind::point && samples < 1) {
      throw ValidationError("light source: extended sources need a discretization count >= 1");
    }
    if (kind == SourceKind::area && corners.size() != 3 && corners.size() != 4) {
      throw ValidationError("light source: area lights take 3 or 4 corners");
    }
  }
};

inline LightSource point_light(const Vec3& p, const Vec3& color = Vec3::Ones(), const Vec3& i_d = Vec3::Ones(),
                               const Vec3& i_s = Vec3::Ones()) {
  LightSource s;
  s.position = p;
  s.color = color;
  s.i_d = i_d;
  s.i_s = i_s;
  return s;
}

namespace detail {

inline double radical_inverse(unsigned i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

/// Splits `total` into n parts whose left-to-right sum is `total` again:
/// the last part absorbs the rounding of total / n.
inline std::vector<double> split_intensity(double total, int n) {
  std::vector<double> parts(static_cast<std::size_t>(n), total / n);
  double acc = 0.0;
  for (int k = 0; k + 1 < n; ++k) acc += parts[k];
  parts.back() = total - acc;
  return parts;
}

} // namespace detail

/// Point lights sampled uniformly over a line (inclusive endpoints) or area
/// (Halton points, deterministic). Each sample carries 1/n of the intensity.
inline std::vector<LightSource> discretize_source(const LightSource& src, int n) {
  if (n < 1) throw ValidationError("discretize_source: n must be >= 1");
  src.validate();
  if (src.kind == SourceKind::point) return {src};

  Vec3List pts;
  pts.reserve(static_cast<std::size_t>(n));
  if (src.kind == SourceKind::line) {
    for (int k = 0; k < n; ++k) {
      const double t = n == 1 ? 0.5 : static_cast<double>(k) / (n - 1);
      pts.push_back(src.a + t * (src.b - src.a));
    }
  } else {
    const Vec3& o = src.corners[0];
    const Vec3 e1 = src.corners[1] - o;
    const Vec3 e2 = (src.corners.size() == 4 ? src.corners[3] : src.corners[2]) - o;
    for (int k = 0; k < n; ++k) {
      const double s = detail::radical_inverse(static_cast<unsigned>(k) + 1, 2);
      const double t = detail::radical_inverse(static_cast<unsigned>(k) + 1, 3);
      if (src.corners.size() == 3) {
        // area-uniform map of the unit square onto the triangle (o, o+e1, o+e2)
        const double r = std::sqrt(s);
        pts.push_back(o + (r * (1.0 - t)) * e1 + (r * t) * e2);
      } else {
        pts.push_back(o + s * e1 + t * e2);
      }
    }
  }

  std::vector<double> parts_d[3], parts_s[3];
  for (int c = 0; c < 3; ++c) {
    parts_d[c] = detail::split_intensity(src.i_d[c], n);
    parts_s[c] = detail::split_intensity(src.i_s[c], n);
  }
  std::vector<LightSource> out;
  out.reserve(pts.size());
  for (int k = 0; k < n; ++k) {
    LightSource p;
    p.position = pts[k];
    p.color = src.color;
    for (int c = 0; c < 3; ++c) {
      p.i_d[c] = parts_d[c][k];
      p.i_s[c] = parts_s[c][k];
    }
    out.push_back(p);
  }
  return out;
}

} // namespace tacsim::lightfield
