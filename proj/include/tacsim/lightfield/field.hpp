// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Incident-light direction rasters. A linear field points straight from each
// surface point to the source; a nonlinear field follows the membrane: the
// direction is the tangent, at the surface point T, of the cross section of
// the membrane with the plane through T and the source spanned by the
// surface normal and the chord.

#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/hash.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/mesh.hpp"
#include "tacsim/geometry/slicing.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/normals.hpp"
#include "tacsim/imaging/projection.hpp"
#include "tacsim/lightfield/source.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace tacsim::lightfield {

enum class FieldKind : std::uint8_t { linear = 0, nonlinear = 1 };

/// Per-pixel construction outcome.
enum class PixelStatus : std::uint8_t {
  ok = 0,
  fallback = 1, // n parallel to L: linear direction used
  invalid = 2,  // hole, T at the source, or no cross-section component near T
};

/// Unit directions toward the source in the camera frame, one per pixel of
/// the reference depth raster, stored as float32 (H x W x 3).
struct LightField {
  int width = 0, height = 0;
  FieldKind kind = FieldKind::linear;
  std::vector<float> dirs;
  std::vector<std::uint8_t> status;
  LightSource source;
  std::uint64_t surface_hash = 0;

  std::size_t size() const { return static_cast<std::size_t>(width) * height; }
  Vec3 dir(std::size_t i) const { return Vec3(dirs[3 * i], dirs[3 * i + 1], dirs[3 * i + 2]); }
  PixelStatus pixel_status(std::size_t i) const { return static_cast<PixelStatus>(status[i]); }

  void set(std::size_t i, const Vec3& d, PixelStatus s) {
    dirs[3 * i] = static_cast<float>(d.x());
    dirs[3 * i + 1] = static_cast<float>(d.y());
    dirs[3 * i + 2] = static_cast<float>(d.z());
    status[i] = static_cast<std::uint8_t>(s);
  }

  void allocate(int w, int h) {
    width = w;
    height = h;
    dirs.assign(3 * size(), 0.0f);
    status.assign(size(), static_cast<std::uint8_t>(PixelStatus::invalid));
  }
};

/// FNV-1a over the vertex buffer (x, y, z doubles in vertex order).
inline std::uint64_t surface_hash(const geometry::TriangleMesh& mesh) {
  std::uint64_t h = kFnvOffset;
  for (const Vec3& v : mesh.vertices()) h = fnv1a64_of(std::span<const double>(v.data(), 3), h);
  return h;
}

inline const Vec3 kInvalidDirection(0.0, 0.0, -1.0);

/// Straight-line field from a point source (world coordinates) over an
/// undeformed camera-frame cloud.
inline LightField linear_field(const imaging::PointCloud& surface, const imaging::Camera& cam, const LightSource& src,
                               std::uint64_t hash) {
  if (src.kind != SourceKind::point) throw ValidationError("linear_field: discretize extended sources first");
  LightField f;
  f.kind = FieldKind::linear;
  f.source = src;
  f.surface_hash = hash;
  f.allocate(surface.width, surface.height);
  const Vec3 ls = cam.to_camera(src.position);
  parallel_for(static_cast<std::ptrdiff_t>(f.size()), [&](std::ptrdiff_t i) {
    if (!surface.valid[i]) {
      f.set(i, kInvalidDirection, PixelStatus::invalid);
      return;
    }
    const Vec3 d = ls - surface.points[i];
    const double len = d.norm();
    if (!(len > 0.0)) {
      f.set(i, kInvalidDirection, PixelStatus::invalid);
      return;
    }
    f.set(i, d / len, PixelStatus::ok);
  });
  return f;
}

struct NonlinearOptions {
  /// Maximum distance from T to the chosen cross-section component (mm).
  double attach_tolerance = 1.0;
  /// |n x L| <= tol * |L| counts as n parallel to L.
  double parallel_tolerance = 1e-9;
};

/// Result for one surface point, world frame.
struct PathDirection {
  Vec3 dir = Vec3::Zero();
  Vec3 plane_normal = Vec3::Zero();
  PixelStatus status = PixelStatus::invalid;
};

namespace detail {

struct Foot {
  std::size_t segment = 0;
  double t = 0.0;
  double distance = std::numeric_limits<double>::infinity();
  double arc = 0.0;
};

inline std::size_t segment_count(const geometry::Polyline& pl) {
  return pl.closed ? pl.points.size() : pl.points.size() - 1;
}

inline Foot closest_foot(const geometry::Polyline& pl, const Vec3& x) {
  Foot best;
  double arc = 0.0;
  const std::size_t n = pl.points.size();
  for (std::size_t s = 0; s < segment_count(pl); ++s) {
    const Vec3& a = pl.points[s];
    const Vec3& b = pl.points[(s + 1) % n];
    const Vec3 e = b - a;
    const double len2 = e.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((x - a).dot(e) / len2, 0.0, 1.0) : 0.0;
    const double d = (a + t * e - x).norm();
    if (d < best.distance) best = {s, t, d, arc + t * std::sqrt(len2)};
    arc += std::sqrt(len2);
  }
  return best;
}

/// Unit tangent at vertex i by central difference of its neighbours.
inline Vec3 vertex_tangent(const geometry::Polyline& pl, std::size_t i) {
  const std::size_t n = pl.points.size();
  std::size_t prev = i, next = i;
  if (pl.closed) {
    prev = (i + n - 1) % n;
    next = (i + 1) % n;
  } else {
    prev = i == 0 ? 0 : i - 1;
    next = i + 1 == n ? i : i + 1;
  }
  return (pl.points[next] - pl.points[prev]).normalized();
}

} // namespace detail

/// Direction toward `ls` along the membrane at T. `n` is the surface normal
/// at T and `slices` the cross sections of the plane through T with normal
/// n x (ls - T); all inputs in one frame.
inline PathDirection path_direction(const std::vector<geometry::Polyline>& slices, const Vec3& t_point, const Vec3& n,
                                    const Vec3& ls, const NonlinearOptions& opt = {}) {
  PathDirection out;
  const Vec3 chord = ls - t_point;
  const double len = chord.norm();
  if (!(len > 0.0)) return out;
  const Vec3 lin = chord / len;
  const Vec3 pn = n.cross(chord);
  if (!(pn.norm() > opt.parallel_tolerance * len * n.norm())) {
    out.dir = lin;
    out.status = PixelStatus::fallback;
    return out;
  }
  out.plane_normal = pn.normalized();

  // component nearest to both endpoints among those passing through T
  const geometry::Polyline* best = nullptr;
  detail::Foot foot_t, foot_s;
  double score = std::numeric_limits<double>::infinity();
  for (const auto& pl : slices) {
    if (pl.points.size() < 2) continue;
    const detail::Foot ft = detail::closest_foot(pl, t_point);
    if (ft.distance > opt.attach_tolerance) continue;
    const detail::Foot fs = detail::closest_foot(pl, ls);
    if (ft.distance + fs.distance < score) {
      score = ft.distance + fs.distance;
      best = &pl;
      foot_t = ft;
      foot_s = fs;
    }
  }
  if (!best) {
    out.dir = lin;
    return out;
  }

  const std::size_t nv = best->points.size();
  const Vec3 ta = detail::vertex_tangent(*best, foot_t.segment);
  const Vec3 tb = detail::vertex_tangent(*best, (foot_t.segment + 1) % nv);
  Vec3 tan = (1.0 - foot_t.t) * ta + foot_t.t * tb;
  // keep it in the surface tangent plane; n lies in the cutting plane, so the
  // result stays in the plane as well
  const Vec3 nu = n.normalized();
  tan -= tan.dot(nu) * nu;
  tan -= tan.dot(out.plane_normal) * out.plane_normal;
  if (!(tan.norm() > 0.0)) {
    out.dir = lin;
    out.status = PixelStatus::fallback;
    return out;
  }
  tan.normalize();

  // orient toward decreasing arc length to the source
  double forward = foot_s.arc - foot_t.arc;
  if (best->closed) {
    const double total = best->length();
    double ahead = std::fmod(forward, total);
    if (ahead < 0.0) ahead += total;
    forward = ahead <= 0.5 * total ? ahead : ahead - total;
  }
  double sign = 0.0;
  if (std::abs(forward) > geometry::kWeldTolerance) sign = forward > 0.0 ? 1.0 : -1.0;
  else sign = tan.dot(chord) >= 0.0 ? 1.0 : -1.0;
  out.dir = sign * tan;
  out.status = PixelStatus::ok;
  return out;
}

/// Surface-following field. `mesh` is the undeformed membrane outer surface
/// (world), `surface`/`normals` the undeformed camera-frame cloud and its
/// normals.
inline LightField nonlinear_field(const geometry::Bvh& mesh, const imaging::PointCloud& surface,
                                  const imaging::NormalMap& normals, const imaging::Camera& cam,
                                  const LightSource& src, const NonlinearOptions& opt = {}) {
  if (src.kind != SourceKind::point) throw ValidationError("nonlinear_field: discretize extended sources first");
  if (normals.width != surface.width || normals.height != surface.height) {
    throw ValidationError("nonlinear_field: normal map and point cloud rasters differ");
  }
  LightField f;
  f.kind = FieldKind::nonlinear;
  f.source = src;
  f.surface_hash = surface_hash(mesh.mesh());
  f.allocate(surface.width, surface.height);
  parallel_for(static_cast<std::ptrdiff_t>(f.size()), [&](std::ptrdiff_t i) {
    if (!surface.valid[i]) {
      f.set(i, kInvalidDirection, PixelStatus::invalid);
      return;
    }
    const Vec3 tw = cam.to_world(surface.points[i]);
    const Vec3 nw = cam.direction_to_world(normals.n[i]);
    const Vec3 chord = src.position - tw;
    PathDirection pd;
    const Vec3 pn = nw.cross(chord);
    if (pn.norm() > opt.parallel_tolerance * chord.norm() * nw.norm()) {
      const auto slices = geometry::plane_mesh_intersection(mesh, geometry::Plane(tw, pn));
      pd = path_direction(slices, tw, nw, src.position, opt);
    } else {
      pd = path_direction({}, tw, nw, src.position, opt);
    }
    if (pd.status == PixelStatus::invalid && !(pd.dir.norm() > 0.0)) {
      f.set(i, kInvalidDirection, PixelStatus::invalid);
      return;
    }
    f.set(i, cam.direction_to_camera(pd.dir), pd.status);
  });
  return f;
}

/// One field per point light of each (discretized) source.
inline std::vector<LightField> linear_fields(const imaging::PointCloud& surface, const imaging::Camera& cam,
                                             const std::vector<LightSource>& sources, std::uint64_t hash) {
  std::vector<LightField> out;
  for (const auto& s : sources) {
    for (const auto& p : discretize_source(s, s.kind == SourceKind::point ? 1 : s.samples)) {
      out.push_back(linear_field(surface, cam, p, hash));
    }
  }
  return out;
}

inline std::vector<LightField> nonlinear_fields(const geometry::Bvh& mesh, const imaging::PointCloud& surface,
                                                const imaging::NormalMap& normals, const imaging::Camera& cam,
                                                const std::vector<LightSource>& sources,
                                                const NonlinearOptions& opt = {}) {
  std::vector<LightField> out;
  for (const auto& s : sources) {
    for (const auto& p : discretize_source(s, s.kind == SourceKind::point ? 1 : s.samples)) {
      out.push_back(nonlinear_field(mesh, surface, normals, cam, p, opt));
    }
  }
  return out;
}

// ------------------------------------------------------------------- files

inline void add_field(Container& c, const std::string& prefix, const LightField& f) {
  const auto h = static_cast<std::uint64_t>(f.height), w = static_cast<std::uint64_t>(f.width);
  c.add<float>(prefix + "dirs", {h, w, 3}, f.dirs);
  c.add<std::uint8_t>(prefix + "status", {h, w}, f.status);
  c.add_scalar<std::uint8_t>(prefix + "kind", static_cast<std::uint8_t>(f.kind));
  c.add_scalar<std::uint64_t>(prefix + "surface_hash", f.surface_hash);
  auto vec = [&](const std::string& name, const Vec3& v) {
    c.add<double>(prefix + name, {3}, std::vector<double>{v.x(), v.y(), v.z()});
  };
  vec("source.position", f.source.position);
  vec("source.color", f.source.color);
  vec("source.i_d", f.source.i_d);
  vec("source.i_s", f.source.i_s);
}

inline LightField get_field(const Container& c, const std::string& prefix) {
  LightField f;
  const auto& shape = c.shape(prefix + "dirs");
  if (shape.size() != 3 || shape[2] != 3) throw FormatError("light field: dirs must be H x W x 3");
  f.height = static_cast<int>(shape[0]);
  f.width = static_cast<int>(shape[1]);
  f.dirs = c.get<float>(prefix + "dirs");
  f.status = c.get<std::uint8_t>(prefix + "status");
  if (f.status.size() != f.size()) throw FormatError("light field: status raster size mismatch");
  const auto kind = c.scalar<std::uint8_t>(prefix + "kind");
  if (kind > 1) throw FormatError("light field: unknown kind " + std::to_string(kind));
  f.kind = static_cast<FieldKind>(kind);
  f.surface_hash = c.scalar<std::uint64_t>(prefix + "surface_hash");
  auto vec = [&](const std::string& name) {
    const auto v = c.get<double>(prefix + name);
    if (v.size() != 3) throw FormatError("light field: '" + name + "' must have 3 entries");
    return Vec3(v[0], v[1], v[2]);
  };
  f.source.position = vec("source.position");
  f.source.color = vec("source.color");
  f.source.i_d = vec("source.i_d");
  f.source.i_s = vec("source.i_s");
  return f;
}

/// Saves fields for all sources in one container (`field.<k>.` prefixes).
inline void save_fields(const std::filesystem::path& path, const std::vector<LightField>& fields) {
  Container c;
  c.add_scalar<std::uint64_t>("field_count", static_cast<std::uint64_t>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k) add_field(c, "field." + std::to_string(k) + ".", fields[k]);
  c.write(path);
}

/// Loads fields; when `expected_hash` is given, every field must have been
/// built against that surface unless `force` is set.
inline std::vector<LightField> load_fields(const std::filesystem::path& path,
                                           std::optional<std::uint64_t> expected_hash = std::nullopt,
                                           bool force = false) {
  const Container c = Container::read(path);
  const auto n = c.scalar<std::uint64_t>("field_count");
  std::vector<LightField> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    out.push_back(get_field(c, "field." + std::to_string(k) + "."));
    if (expected_hash && !force && out.back().surface_hash != *expected_hash) {
      throw ValidationError("light field " + std::to_string(k) + " in '" + path.string() +
                            "' was built for a different surface (hash mismatch)");
    }
  }
  return out;
}

inline void save_field(const std::filesystem::path& path, const LightField& f) { save_fields(path, {f}); }

inline LightField load_field(const std::filesystem::path& path, std::optional<std::uint64_t> expected_hash = std::nullopt,
                             bool force = false) {
  auto v = load_fields(path, expected_hash, force);
  if (v.size() != 1) throw FormatError("'" + path.string() + "' holds " + std::to_string(v.size()) + " fields");
  return v.front();
}

} // namespace tacsim::lightfield
