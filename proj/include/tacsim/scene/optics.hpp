// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Offline optics of one sensor (rest depth, normals, light fields,
// background) and the per-frame path: occlusion removal -> projection ->
// interpolation -> contact mask -> Phong foreground -> compositing.

#include "tacsim/core/error.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/mesh.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/imaging/depth.hpp"
#include "tacsim/imaging/interpolate.hpp"
#include "tacsim/imaging/normals.hpp"
#include "tacsim/imaging/projection.hpp"
#include "tacsim/imaging/smooth.hpp"
#include "tacsim/lightfield/field.hpp"
#include "tacsim/render/compose.hpp"
#include "tacsim/render/image.hpp"
#include "tacsim/render/phong.hpp"
#include "tacsim/scene/config.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

namespace tacsim::scene {

struct Optics {
  imaging::Camera camera;
  std::shared_ptr<const geometry::TriangleMesh> rest_mesh;
  std::uint64_t surface_hash = 0;
  imaging::DepthMap rest_depth;
  imaging::PointCloud rest_cloud;
  imaging::NormalMap rest_normals;
  std::vector<lightfield::LightField> linear, nonlinear;
  render::TactileImage background;
  render::FloatImage background_f;
  render::RenderParams params;
  int feather = render::kFeatherPixels;
  double contact_threshold = render::kContactThreshold;
  double occlusion_epsilon = 0.2;
  double normal_smoothing = 1.5;
};

struct Frame {
  render::TactileImage image;
  imaging::DepthMap depth;
  std::size_t contact_pixels = 0;
};

/// Dense camera depth of the reflective particles that `surface` does not
/// hide. Throws when too few particles are visible to interpolate.
inline imaging::DepthMap surface_depth(const ParticleSet& particles, const geometry::Bvh& surface,
                                       const imaging::Camera& cam, double occlusion_epsilon) {
  const ParticleSet visible = imaging::remove_occluded(particles, surface, cam, occlusion_epsilon);
  return imaging::interpolate_depth(imaging::project(visible, cam));
}

/// Linear and nonlinear fields for a rest surface seen as `cloud`/`normals`.
inline std::vector<lightfield::LightField> build_fields(const SceneConfig& c, const geometry::Bvh& rest,
                                                        const imaging::PointCloud& cloud,
                                                        const imaging::NormalMap& normals) {
  auto fields = lightfield::linear_fields(cloud, c.camera, c.lights, lightfield::surface_hash(rest.mesh()));
  lightfield::NonlinearOptions opt;
  opt.attach_tolerance = c.attach_tolerance;
  for (auto& f : lightfield::nonlinear_fields(rest, cloud, normals, c.camera, c.lights, opt)) fields.push_back(std::move(f));
  return fields;
}

/// `fields` (linear and nonlinear, e.g. from a cache) are built when empty.
inline Optics build_optics(const SceneConfig& c, std::shared_ptr<const geometry::TriangleMesh> rest_mesh,
                           const ParticleSet& rest_surface, std::vector<lightfield::LightField> fields = {}) {
  Optics o;
  o.camera = c.camera;
  o.rest_mesh = rest_mesh;
  o.surface_hash = lightfield::surface_hash(*rest_mesh);
  o.params = c.render.params;
  o.feather = c.render.feather;
  o.contact_threshold = c.render.contact_threshold;
  o.occlusion_epsilon = c.simulation.occlusion_epsilon;
  o.normal_smoothing = c.render.normal_smoothing;

  const geometry::Bvh bvh(*rest_mesh);
  o.rest_depth = surface_depth(rest_surface, bvh, o.camera, o.occlusion_epsilon);
  const auto rest_smooth = imaging::smooth_depth(o.rest_depth, o.normal_smoothing);
  o.rest_cloud = imaging::unproject(rest_smooth, o.camera);
  o.rest_normals = imaging::normals_sobel(o.rest_cloud);

  if (fields.empty()) fields = build_fields(c, bvh, o.rest_cloud, o.rest_normals);
  for (auto& f : fields) {
    if (f.surface_hash != o.surface_hash) {
      throw ValidationError("optics: light field built for a different surface (hash mismatch)");
    }
    if (f.width != o.camera.width || f.height != o.camera.height) {
      throw ValidationError("optics: light field raster differs from the camera");
    }
    (f.kind == lightfield::FieldKind::linear ? o.linear : o.nonlinear).push_back(std::move(f));
  }
  if (o.linear.empty() || o.nonlinear.empty()) throw ValidationError("optics: need both linear and nonlinear fields");

  if (c.render.background_image) {
    o.background = render::read_png(*c.render.background_image);
    if (o.background.width != o.camera.width || o.background.height != o.camera.height) {
      throw ValidationError("$.render.background_image: image size differs from the camera raster");
    }
  } else {
    o.background = render::render_background(rest_smooth, o.rest_normals, o.linear, o.params, o.camera, o.surface_hash);
  }
  o.background_f = render::to_float(o.background);
  return o;
}

/// Every field of `o`, linear first, in the order they shade.
inline std::vector<lightfield::LightField> all_fields(const Optics& o) {
  std::vector<lightfield::LightField> f = o.linear;
  f.insert(f.end(), o.nonlinear.begin(), o.nonlinear.end());
  return f;
}

/// Renders the deformed state: `surface` are the reflective particles and
/// `mesh_vertices` the deformed positions of the rest mesh's vertices.
inline Frame render_frame(const Optics& o, const ParticleSet& surface, const Vec3List& mesh_vertices) {
  if (mesh_vertices.size() != o.rest_mesh->vertex_count()) {
    throw ValidationError("render_frame: deformed vertex count differs from the rest mesh");
  }
  const geometry::Bvh bvh(geometry::TriangleMesh(mesh_vertices, o.rest_mesh->faces()));
  Frame fr;
  fr.depth = surface_depth(surface, bvh, o.camera, o.occlusion_epsilon);
  const auto mask = render::contact_mask(o.rest_depth, fr.depth, o.contact_threshold);
  fr.contact_pixels = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  if (fr.contact_pixels == 0) {
    fr.image = o.background;
    return fr;
  }
  const auto smooth = imaging::smooth_depth(fr.depth, o.normal_smoothing);
  const auto cloud = imaging::unproject(smooth, o.camera);
  const auto normals = imaging::normals_sobel(cloud);
  const auto fg = render::shade(smooth, normals, o.nonlinear, o.params, o.camera, &o.background_f);
  fr.image = render::compose(o.background, fg, mask, o.feather);
  return fr;
}

} // namespace tacsim::scene
