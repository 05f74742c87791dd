// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/depth.hpp"
#include "tacsim/imaging/normals.hpp"
#include "tacsim/imaging/projection.hpp"
#include "tacsim/lightfield/field.hpp"
#include "tacsim/render/image.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace tacsim::render {

struct RenderParams {
  Vec3 k_a = Vec3::Constant(1.0);
  Vec3 k_d = Vec3::Constant(0.6);
  Vec3 k_s = Vec3::Constant(0.2);
  double alpha = 10.0;
  /// Uniform ambient intensity, used when no ambient image is supplied.
  Vec3 i_a = Vec3::Constant(0.1);

  void validate() const {
    for (int c = 0; c < 3; ++c) {
      if (!(k_a[c] >= 0.0 && k_a[c] <= 1.0) || !(k_d[c] >= 0.0 && k_d[c] <= 1.0) || !(k_s[c] >= 0.0 && k_s[c] <= 1.0)) {
        throw ValidationError("render params: reflectance coefficients must be in [0, 1]");
      }
      if (!(i_a[c] >= 0.0)) throw ValidationError("render params: ambient intensity must be >= 0");
    }
    if (!(alpha > 0.0)) throw ValidationError("render params: shininess alpha must be > 0");
  }
};

/// R = 2 (L.N) N - L.
inline Vec3 reflect(const Vec3& l, const Vec3& n) { return 2.0 * l.dot(n) * n - l; }

/// Diffuse and specular weights (L.N)+ and ((R.V)+)^alpha. Specular is only
/// lit when the light is above the surface.
struct PhongTerms {
  double diffuse = 0.0, specular = 0.0;
};

inline PhongTerms phong_terms(const Vec3& l, const Vec3& n, const Vec3& v, double alpha) {
  PhongTerms t;
  const double ln = l.dot(n);
  if (!(ln > 0.0)) return t;
  t.diffuse = ln;
  const double rv = reflect(l, n).dot(v);
  if (rv > 0.0) t.specular = std::pow(rv, alpha);
  return t;
}

/// Per-pixel Phong over a dense depth map. `ambient`, when given, replaces
/// the uniform i_a (e.g. a background render or a captured image).
inline FloatImage shade(const imaging::DepthMap& depth, const imaging::NormalMap& normals,
                        const std::vector<lightfield::LightField>& fields, const RenderParams& params,
                        const imaging::Camera& cam, const FloatImage* ambient = nullptr) {
  params.validate();
  const int w = depth.width, h = depth.height;
  if (normals.width != w || normals.height != h) throw ValidationError("shade: normal map raster differs from depth");
  if (cam.width != w || cam.height != h) throw ValidationError("shade: camera raster differs from depth");
  for (const auto& f : fields) {
    if (f.width != w || f.height != h) throw ValidationError("shade: light field raster differs from depth");
  }
  if (ambient && (ambient->width != w || ambient->height != h)) {
    throw ValidationError("shade: ambient image raster differs from depth");
  }
  if (!depth.is_dense()) throw ValidationError("shade: depth map has holes; interpolate it first");

  std::vector<Vec3> diffuse(fields.size()), specular(fields.size());
  for (std::size_t m = 0; m < fields.size(); ++m) {
    diffuse[m] = fields[m].source.diffuse();
    specular[m] = fields[m].source.specular();
  }
  const imaging::Intrinsics k = cam.k();
  FloatImage out(w, h);
  parallel_for(static_cast<std::ptrdiff_t>(h), [&](std::ptrdiff_t vv) {
    const int v = static_cast<int>(vv);
    for (int u = 0; u < w; ++u) {
      const std::size_t i = depth.at(u, v);
      double acc[3];
      for (int c = 0; c < 3; ++c) acc[c] = params.k_a[c] * (ambient ? (*ambient)(i, c) : params.i_a[c]);
      const Vec3 p = imaging::unproject_pixel(k, u, v, depth.z[i]);
      const Vec3 view = (-p).normalized();
      const Vec3& n = normals.n[i];
      for (std::size_t m = 0; m < fields.size(); ++m) {
        if (fields[m].pixel_status(i) == lightfield::PixelStatus::invalid) continue;
        const PhongTerms t = phong_terms(fields[m].dir(i), n, view, params.alpha);
        for (int c = 0; c < 3; ++c) {
          acc[c] += params.k_d[c] * t.diffuse * diffuse[m][c] + params.k_s[c] * t.specular * specular[m][c];
        }
      }
      for (int c = 0; c < 3; ++c) out(i, c) = acc[c];
    }
  });
  return out;
}

/// Ambient-plus-linear-field render of the undeformed membrane.
inline TactileImage render_background(const imaging::DepthMap& undeformed, const imaging::NormalMap& normals,
                                      const std::vector<lightfield::LightField>& linear_fields,
                                      const RenderParams& params, const imaging::Camera& cam,
                                      std::optional<std::uint64_t> surface_hash = std::nullopt) {
  for (const auto& f : linear_fields) {
    if (f.kind != lightfield::FieldKind::linear) throw ValidationError("render_background: expects linear fields");
    if (surface_hash && f.surface_hash != *surface_hash) {
      throw ValidationError("render_background: light field built for a different surface (hash mismatch)");
    }
  }
  return quantize(shade(undeformed, normals, linear_fields, params, cam));
}

} // namespace tacsim::render
