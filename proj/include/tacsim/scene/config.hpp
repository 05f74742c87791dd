// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scene configuration: JSON document -> schema validation with defaults ->
// fully resolved SceneConfig (sensor presets, camera, lights, trajectory).

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/imaging/camera.hpp"
#include "tacsim/lightfield/source.hpp"
#include "tacsim/mpm/material.hpp"
#include "tacsim/render/phong.hpp"
#include "tacsim/scene/config_schema.hpp"
#include "tacsim/scene/schema.hpp"
#include "tacsim/scene/trajectory.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tacsim::scene {

namespace fs = std::filesystem;

enum class SensorKind { gelsight, geltip, mesh };
enum class ReleaseMode { reset, simulate };

struct SensorSpec {
  SensorKind kind = SensorKind::gelsight;
  std::uint32_t material = 0;
  Vec3 size = Vec3(24.0, 24.0, 4.0); // gelsight slab
  double radius = 10.0;              // geltip outer radius
  double length = 20.0;              // geltip cylinder length
  double thickness = 1.5;            // geltip wall
  int segments = 96;
  fs::path membrane_mesh, reflective_mesh; // mesh sensors
  int support_axis = 2;
  double support_below = 0.0;
  double surface_band = 0.0; // mesh sensors: distance to the reflective mesh tagged as surface
};

struct IndenterSpec {
  enum Shape { sphere, mesh } shape = sphere;
  enum Sampling { volume, surface } sampling = volume;
  double radius = 3.0;
  fs::path mesh_path;
  std::uint32_t material = 1;
  double gap = 0.4;
  std::optional<Vec3> position; // custom trajectories: start centre
};

struct GridSpec {
  std::optional<int> nodes;
  std::optional<double> length;
  double dt = 1e-4;
  int padding = 4;
};

struct RenderSpec {
  render::RenderParams params;
  int feather = 3;
  double contact_threshold = 0.02;
  double normal_smoothing = 1.5; // Gaussian sigma (px) on depth ahead of normals
  std::optional<fs::path> background_image;
};

struct MarkerSpec {
  std::optional<double> pitch;
  std::vector<std::int64_t> indices;
  int radius = 1;
  double arrow_scale = 5.0;
  bool overlay = false;

  bool enabled() const { return pitch.has_value() || !indices.empty(); }
};

struct SimulationSpec {
  double indenter_speed = 50.0;
  int settle_steps = 0;
  ReleaseMode release = ReleaseMode::reset;
  std::size_t max_steps_per_move = 200000;
  double occlusion_epsilon = 0.2;
};

struct OutputSpec {
  double depth_mm_per_unit = 1e-3;
  bool write_depth = true;
  bool write_displacement = true;
};

struct SceneConfig {
  std::string name = "scene";
  std::uint64_t seed = 0;
  double spacing = 0.4;
  SensorSpec sensor;
  std::vector<mpm::Material> materials;
  std::vector<std::string> material_names;
  IndenterSpec indenter;
  imaging::Camera camera;
  std::vector<lightfield::LightSource> lights;
  GridSpec grid;
  RenderSpec render;
  double attach_tolerance = 1.0;
  std::optional<fs::path> field_cache;
  MarkerSpec markers;
  SimulationSpec simulation;
  TrajectorySpec trajectory;
  OutputSpec output;
  /// The validated document with defaults filled in.
  Json document;
  fs::path base_dir;
};

inline const Json& config_schema() {
  static const Json schema = Json::parse(kConfigSchema);
  return schema;
}

namespace detail {

inline Vec3 vec3(const Json& j) { return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>()); }

inline Sweep sweep(const Json& j) {
  return Sweep{j["range"][0].get<double>(), j["range"][1].get<double>(), j["step"].get<double>()};
}

inline fs::path existing(const fs::path& base, const std::string& rel, const std::string& key) {
  fs::path p = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
  if (!fs::exists(p)) throw ValidationError(key + ": file '" + p.string() + "' does not exist");
  return p;
}

/// GelSight: camera under the slab looking up (+z) at the top face from
/// 10 mm, four LEDs at the top-face edge midpoints (red, green, blue, white).
inline void gelsight_optics(SceneConfig& c) {
  const Vec3 s = c.sensor.size;
  c.camera.position = Vec3(0.5 * s.x(), 0.5 * s.y(), s.z() - 10.0);
  c.camera.rotation = Mat3::Identity();
  c.camera.fov = 2.0 * std::atan(0.8);
  const Vec3 cols[4] = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)};
  const Vec3 pos[4] = {Vec3(0.0, 0.5 * s.y(), s.z()), Vec3(s.x(), 0.5 * s.y(), s.z()), Vec3(0.5 * s.x(), 0.0, s.z()),
                       Vec3(0.5 * s.x(), s.y(), s.z())};
  for (int k = 0; k < 4; ++k) c.lights.push_back(lightfield::point_light(pos[k], cols[k], Vec3::Constant(0.6), Vec3::Constant(0.3)));
}

/// GelTip: camera on the axis at the open base looking at the tip, a ring of
/// red, white, blue and green LEDs inside the wall just above the base.
inline void geltip_optics(SceneConfig& c) {
  c.camera.position = Vec3::Zero();
  c.camera.rotation = Mat3::Identity();
  c.camera.fov = 110.0 * std::numbers::pi / 180.0;
  const double r = c.sensor.radius - 0.5 * c.sensor.thickness;
  const Vec3 cols[4] = {Vec3(1, 0, 0), Vec3(1, 1, 1), Vec3(0, 0, 1), Vec3(0, 1, 0)};
  for (int k = 0; k < 4; ++k) {
    const double phi = 0.5 * std::numbers::pi * k + 0.25 * std::numbers::pi;
    c.lights.push_back(lightfield::point_light(Vec3(r * std::cos(phi), r * std::sin(phi), 0.5), cols[k],
                                               Vec3::Constant(0.3), Vec3::Constant(0.1)));
  }
}

} // namespace detail

/// Resolves a JSON document. `base_dir` anchors relative file paths.
inline SceneConfig config_from_json(Json doc, const fs::path& base_dir = fs::current_path()) {
  validate(doc, config_schema());
  SceneConfig c;
  c.base_dir = base_dir;
  c.name = doc["name"].get<std::string>();
  c.seed = doc["seed"].get<std::uint64_t>();
  c.spacing = doc["particle_spacing"].get<double>();

  // materials
  for (const auto& m : doc["materials"]) {
    mpm::Material mat;
    mat.youngs_modulus = m["youngs_modulus"].get<double>();
    mat.poisson_ratio = m["poisson_ratio"].get<double>();
    mat.density = m["density"].get<double>();
    mat.kind = m["kind"] == "rigid" ? mpm::MaterialKind::rigid : mpm::MaterialKind::elastic;
    mat.validate();
    c.materials.push_back(mat);
    c.material_names.push_back(m["name"].get<std::string>());
  }

  // sensor
  const Json& s = doc["sensor"];
  const std::string kind = s["kind"].get<std::string>();
  c.sensor.kind = kind == "gelsight" ? SensorKind::gelsight : kind == "geltip" ? SensorKind::geltip : SensorKind::mesh;
  c.sensor.material = s["material"].get<std::uint32_t>();
  if (c.sensor.material >= c.materials.size()) throw ValidationError("$.sensor.material: no such material id");
  if (c.materials[c.sensor.material].kind != mpm::MaterialKind::elastic) {
    throw ValidationError("$.sensor.material: the membrane material must be elastic");
  }
  if (s.contains("size")) c.sensor.size = detail::vec3(s["size"]);
  if (s.contains("radius")) c.sensor.radius = s["radius"].get<double>();
  if (s.contains("length")) c.sensor.length = s["length"].get<double>();
  if (s.contains("thickness")) c.sensor.thickness = s["thickness"].get<double>();
  if (s.contains("segments")) c.sensor.segments = s["segments"].get<int>();
  c.sensor.surface_band = s.contains("surface_band") ? s["surface_band"].get<double>() : c.spacing;
  if (c.sensor.kind == SensorKind::geltip && !(c.sensor.thickness < c.sensor.radius)) {
    throw ValidationError("$.sensor.thickness: must be smaller than the radius");
  }
  if (c.sensor.kind == SensorKind::mesh) {
    for (const char* key : {"membrane_mesh", "reflective_mesh", "support"}) {
      if (!s.contains(key)) throw ValidationError(std::string("$.sensor.") + key + ": required for mesh sensors");
    }
    c.sensor.membrane_mesh = detail::existing(base_dir, s["membrane_mesh"].get<std::string>(), "$.sensor.membrane_mesh");
    c.sensor.reflective_mesh =
        detail::existing(base_dir, s["reflective_mesh"].get<std::string>(), "$.sensor.reflective_mesh");
    const std::string axis = s["support"]["axis"].get<std::string>();
    c.sensor.support_axis = axis == "x" ? 0 : axis == "y" ? 1 : 2;
    c.sensor.support_below = s["support"]["below"].get<double>();
  }

  // indenter
  const Json& ind = doc["indenter"];
  c.indenter.shape = ind["shape"] == "mesh" ? IndenterSpec::mesh : IndenterSpec::sphere;
  c.indenter.sampling = ind["sampling"] == "surface" ? IndenterSpec::surface : IndenterSpec::volume;
  c.indenter.radius = ind["radius"].get<double>();
  c.indenter.material = ind["material"].get<std::uint32_t>();
  c.indenter.gap = ind.contains("gap") ? ind["gap"].get<double>() : c.spacing;
  if (c.indenter.material >= c.materials.size()) throw ValidationError("$.indenter.material: no such material id");
  if (c.materials[c.indenter.material].kind != mpm::MaterialKind::rigid) {
    throw ValidationError("$.indenter.material: the indenter material must be rigid");
  }
  if (c.indenter.shape == IndenterSpec::mesh) {
    if (!ind.contains("mesh")) throw ValidationError("$.indenter.mesh: required when shape is 'mesh'");
    c.indenter.mesh_path = detail::existing(base_dir, ind["mesh"].get<std::string>(), "$.indenter.mesh");
  }
  if (ind.contains("position")) c.indenter.position = detail::vec3(ind["position"]);

  // camera and lights: presets first, explicit keys override
  if (c.sensor.kind == SensorKind::gelsight) detail::gelsight_optics(c);
  if (c.sensor.kind == SensorKind::geltip) detail::geltip_optics(c);
  const Json& cam = doc["camera"];
  if (c.sensor.kind == SensorKind::mesh && !cam.contains("position")) {
    throw ValidationError("$.camera.position: required for mesh sensors");
  }
  if (cam.contains("position")) c.camera.position = detail::vec3(cam["position"]);
  if (cam.contains("rotation") && cam.contains("look_at")) {
    throw ValidationError("$.camera: give either rotation or look_at, not both");
  }
  if (cam.contains("rotation")) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.camera.rotation(i, j) = cam["rotation"][i][j].get<double>();
  }
  if (cam.contains("look_at")) {
    const Vec3 up = cam.contains("up") ? detail::vec3(cam["up"]) : Vec3(0.0, -1.0, 0.0);
    c.camera.rotation = imaging::look_at(c.camera.position, detail::vec3(cam["look_at"]), up);
  }
  if (cam.contains("fov")) c.camera.fov = cam["fov"].get<double>();
  c.camera.width = cam["width"].get<int>();
  c.camera.height = cam["height"].get<int>();
  c.camera.validate();

  if (doc.contains("lights")) {
    c.lights.clear();
    for (std::size_t i = 0; i < doc["lights"].size(); ++i) {
      const Json& l = doc["lights"][i];
      const std::string at = "$.lights[" + std::to_string(i) + "]";
      lightfield::LightSource src;
      const std::string k = l["kind"].get<std::string>();
      src.kind = k == "line" ? lightfield::SourceKind::line
                 : k == "area" ? lightfield::SourceKind::area
                               : lightfield::SourceKind::point;
      if (src.kind == lightfield::SourceKind::point) {
        if (!l.contains("position")) throw ValidationError(at + ".position: required for point lights");
        src.position = detail::vec3(l["position"]);
      } else if (src.kind == lightfield::SourceKind::line) {
        if (!l.contains("a") || !l.contains("b")) throw ValidationError(at + ": line lights need a and b");
        src.a = detail::vec3(l["a"]);
        src.b = detail::vec3(l["b"]);
      } else {
        if (!l.contains("corners")) throw ValidationError(at + ".corners: required for area lights");
        for (const auto& q : l["corners"]) src.corners.push_back(detail::vec3(q));
      }
      src.color = detail::vec3(l["color"]);
      src.i_d = detail::vec3(l["i_d"]);
      src.i_s = detail::vec3(l["i_s"]);
      src.samples = l["samples"].get<int>();
      src.validate();
      c.lights.push_back(src);
    }
  }
  if (c.lights.empty()) throw ValidationError("$.lights: at least one light source required");

  // grid
  const Json& g = doc["grid"];
  if (g.contains("nodes")) c.grid.nodes = g["nodes"].get<int>();
  if (g.contains("length")) c.grid.length = g["length"].get<double>();
  if (c.grid.nodes.has_value() != c.grid.length.has_value()) {
    throw ValidationError("$.grid: give both nodes and length, or neither for an automatic grid");
  }
  c.grid.dt = g["dt"].get<double>();
  c.grid.padding = g["padding"].get<int>();

  // render
  const Json& r = doc["render"];
  c.render.params.k_a = detail::vec3(r["k_a"]);
  c.render.params.k_d = detail::vec3(r["k_d"]);
  c.render.params.k_s = detail::vec3(r["k_s"]);
  c.render.params.alpha = r["alpha"].get<double>();
  c.render.params.i_a = detail::vec3(r["i_a"]);
  c.render.params.validate();
  c.render.feather = r["feather"].get<int>();
  c.render.contact_threshold = r["contact_threshold"].get<double>();
  c.render.normal_smoothing = r["normal_smoothing"].get<double>();
  if (r.contains("background_image")) {
    c.render.background_image =
        detail::existing(base_dir, r["background_image"].get<std::string>(), "$.render.background_image");
  }

  c.attach_tolerance = doc["lightfield"]["attach_tolerance"].get<double>();
  if (doc["lightfield"].contains("cache")) {
    const std::string p = doc["lightfield"]["cache"].get<std::string>();
    c.field_cache = fs::path(p).is_absolute() ? fs::path(p) : base_dir / p;
  }

  const Json& mk = doc["markers"];
  if (mk.contains("pitch")) c.markers.pitch = mk["pitch"].get<double>();
  if (mk.contains("indices")) c.markers.indices = mk["indices"].get<std::vector<std::int64_t>>();
  if (c.markers.pitch && !c.markers.indices.empty()) {
    throw ValidationError("$.markers: give either pitch or indices, not both");
  }
  c.markers.radius = mk["radius"].get<int>();
  c.markers.arrow_scale = mk["arrow_scale"].get<double>();
  c.markers.overlay = mk["overlay"].get<bool>();

  const Json& sim = doc["simulation"];
  c.simulation.indenter_speed = sim["indenter_speed"].get<double>();
  c.simulation.settle_steps = sim["settle_steps"].get<int>();
  c.simulation.release = sim["release"] == "simulate" ? ReleaseMode::simulate : ReleaseMode::reset;
  c.simulation.max_steps_per_move = sim["max_steps_per_move"].get<std::size_t>();
  c.simulation.occlusion_epsilon =
      sim.contains("occlusion_epsilon") ? sim["occlusion_epsilon"].get<double>() : 0.5 * c.spacing;

  // trajectory: harness defaults for the sensor, then explicit keys
  if (!doc.contains("trajectory")) {
    doc["trajectory"] = Json{{"kind", c.sensor.kind == SensorKind::gelsight ? "gelsight"
                                      : c.sensor.kind == SensorKind::geltip ? "geltip"
                                                                            : "custom"}};
    if (c.sensor.kind == SensorKind::mesh) doc["trajectory"]["waypoints"] = Json::array({Json{{"offset", {0, 0, 0}}}});
    validate(doc, config_schema());
  }
  const Json& t = doc["trajectory"];
  const std::string tk = t["kind"].get<std::string>();
  if (tk == "gelsight") {
    c.trajectory = TrajectorySpec::gelsight_default();
    if (c.sensor.kind != SensorKind::gelsight) throw ValidationError("$.trajectory.kind: gelsight harness needs a gelsight sensor");
  } else if (tk == "geltip") {
    c.trajectory = TrajectorySpec::geltip_default();
    if (c.sensor.kind != SensorKind::geltip) throw ValidationError("$.trajectory.kind: geltip harness needs a geltip sensor");
  } else {
    c.trajectory.kind = TrajectoryKind::custom;
    if (!t.contains("waypoints")) throw ValidationError("$.trajectory.waypoints: required for custom trajectories");
    for (const auto& w : t["waypoints"]) c.trajectory.waypoints.push_back({detail::vec3(w["offset"]), w["record"].get<bool>()});
  }
  if (t.contains("grid")) c.trajectory.grid = detail::sweep(t["grid"]);
  if (t.contains("tip_angle")) c.trajectory.tip_angle = detail::sweep(t["tip_angle"]);
  if (t.contains("base")) c.trajectory.base = detail::sweep(t["base"]);
  if (t.contains("paths")) c.trajectory.paths = t["paths"].get<int>();
  if (t.contains("depth")) c.trajectory.depth = detail::sweep(t["depth"]);
  if (t.contains("shear")) {
    const Json& sh = t["shear"];
    if (sh.contains("directions")) c.trajectory.shear_directions = sh["directions"].get<int>();
    if (sh.contains("step_deg")) c.trajectory.shear_step_deg = sh["step_deg"].get<double>();
    if (sh.contains("extent")) c.trajectory.shear_extent = detail::sweep(sh["extent"]);
  }
  c.trajectory.record_release = t["record_release"].get<bool>();
  c.trajectory.validate();

  const Json& o = doc["output"];
  c.output.depth_mm_per_unit = o["depth_mm_per_unit"].get<double>();
  c.output.write_depth = o["write_depth"].get<bool>();
  c.output.write_displacement = o["write_displacement"].get<bool>();

  c.document = std::move(doc);
  return c;
}

inline Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

inline SceneConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("config '" + path.string() + "' does not exist");
  return config_from_json(read_json(path), fs::absolute(path).parent_path());
}

} // namespace tacsim::scene
