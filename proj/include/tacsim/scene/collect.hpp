// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Trajectory execution. Each contact point owns a private MPM world holding
// the membrane and the indenter in its approach pose; the indenter follows
// straight displacement-controlled moves (one run_until per waypoint) and a
// record is emitted after every recorded waypoint.
//
// Depth ladders press straight on from the previous depth; shear sweeps and
// simulated releases run on copies of the pressed world, so the main world
// always continues from depth j to j + 1.

#include "tacsim/core/error.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/lightfield/field.hpp"
#include "tacsim/mpm/world.hpp"
#include "tacsim/render/markers.hpp"
#include "tacsim/scene/config.hpp"
#include "tacsim/scene/optics.hpp"
#include "tacsim/scene/sensor.hpp"
#include "tacsim/scene/trajectory.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tacsim::scene {

enum class RecordKind { normal, shear, release, waypoint };

inline const char* to_string(RecordKind k) {
  switch (k) {
    case RecordKind::normal: return "normal";
    case RecordKind::shear: return "shear";
    case RecordKind::release: return "release";
    case RecordKind::waypoint: return "waypoint";
  }
  return "?";
}

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct RecordInfo {
  std::size_t id = 0;
  RecordKind kind = RecordKind::normal;
  int contact = -1, path = -1, position = -1;
  std::string region = "-";
  int depth_index = -1;
  double depth = kUnset; // mm
  int shear_direction = -1, shear_index = -1;
  double shear = kUnset; // mm along the shear direction
  int waypoint = -1;
  Pose pose; // commanded indenter pose
  bool release() const { return kind == RecordKind::release; }
};

struct Snapshot {
  Frame frame;              // empty when rendering is off
  ParticleSet surface;      // reflective particles, current positions
  Vec3List mesh;            // reflective mesh vertices, current positions
  Vec3List displacement;    // per surface particle, from rest
  std::optional<render::MarkerSet> markers;
};

/// Everything shared by the contacts of one collection.
struct Scene {
  SceneConfig config;
  Sensor sensor;
  ParticleSet rest_surface;
  Optics optics;
  std::optional<render::MarkerSet> markers;
  Snapshot rest;
  bool render_frames = true; // off: simulate only
};

/// Light fields from the configured cache when it matches the rest surface,
/// else built (and written to the cache path when one is configured).
inline std::vector<lightfield::LightField> scene_fields(const SceneConfig& c, const Sensor& s) {
  const std::uint64_t hash = lightfield::surface_hash(*s.surface);
  if (c.field_cache && fs::exists(*c.field_cache)) return lightfield::load_fields(*c.field_cache, hash);
  const geometry::Bvh bvh(*s.surface);
  const auto rest = s.membrane.with_tag(RegionTag::membrane_surface);
  const auto depth = surface_depth(rest, bvh, c.camera, c.simulation.occlusion_epsilon);
  const auto cloud = imaging::unproject(imaging::smooth_depth(depth, c.render.normal_smoothing), c.camera);
  auto fields = build_fields(c, bvh, cloud, imaging::normals_sobel(cloud));
  if (c.field_cache) lightfield::save_fields(*c.field_cache, fields);
  return fields;
}

inline Snapshot take_snapshot(const Scene& s, const ParticleSet& surface, const Vec3List& mesh_vertices) {
  Snapshot sn;
  sn.surface = surface;
  sn.mesh = mesh_vertices;
  if (s.render_frames) sn.frame = render_frame(s.optics, surface, mesh_vertices);
  if (surface.size() != s.rest_surface.size()) throw Error("snapshot: surface particle count changed");
  sn.displacement.resize(surface.size());
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (surface.indices[i] != s.rest_surface.indices[i]) throw Error("snapshot: surface particle order changed");
    sn.displacement[i] = surface.positions[i] - s.rest_surface.positions[i];
  }
  if (s.markers) sn.markers = render::track_markers(*s.markers, surface, s.optics.camera);
  return sn;
}

/// Sensor, optics and markers of `c`. With `render` off no light fields are
/// built and snapshots carry geometry only.
inline Scene prepare_scene(const SceneConfig& c, std::vector<lightfield::LightField> fields = {}, bool render = true) {
  Scene s;
  s.config = c;
  s.render_frames = render;
  s.sensor = build_sensor(c);
  s.rest_surface = s.sensor.membrane.with_tag(RegionTag::membrane_surface);
  if (render) {
    if (fields.empty()) fields = scene_fields(c, s.sensor);
    s.optics = build_optics(c, s.sensor.surface, s.rest_surface, std::move(fields));
  } else {
    s.optics.camera = c.camera;
    s.optics.rest_mesh = s.sensor.surface;
    s.optics.surface_hash = lightfield::surface_hash(*s.sensor.surface);
  }
  if (c.markers.pitch) {
    s.markers = render::make_marker_grid(s.rest_surface, *c.markers.pitch, c.camera);
  } else if (!c.markers.indices.empty()) {
    s.markers = render::make_markers(s.rest_surface, c.markers.indices, c.camera);
  }
  s.rest = take_snapshot(s, s.rest_surface, s.sensor.surface->vertices());
  return s;
}

/// Receives records in id order.
using RecordSink = std::function<void(const RecordInfo&, const Snapshot&)>;

struct CollectionSummary {
  std::size_t records = 0;
  std::size_t contact_frames = 0;
  std::size_t release_frames = 0;
  std::size_t contacts = 0;
  std::size_t steps = 0;
};

namespace detail {

/// Re-raises MPM failures with the record they interrupted, keeping the type.
template <typename F> void for_record(std::size_t id, F&& f) {
  const std::string at = "record " + std::to_string(id) + ": ";
  try {
    f();
  } catch (const InversionError& e) {
    throw InversionError(at + e.what());
  } catch (const OutOfDomainError& e) {
    throw OutOfDomainError(at + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(at + e.what());
  } catch (const Error& e) {
    throw Error(at + e.what());
  }
}

inline void grow(Vec3& lo, Vec3& hi, const Vec3& x) {
  lo = lo.cwiseMin(x);
  hi = hi.cwiseMax(x);
}

/// World with the membrane, the indenter at `start` and the rest mesh
/// vertices as tracers. The grid covers every indenter placement in `reach`.
inline mpm::World contact_world(const Scene& s, const Pose& start, const std::vector<Vec3>& reach) {
  const SceneConfig& c = s.config;
  const ParticleSet body = place(s.sensor.indenter, start);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const Vec3& x : s.sensor.membrane.positions) grow(lo, hi, x);
  Vec3 blo = lo, bhi = hi;
  blo.setConstant(std::numeric_limits<double>::infinity());
  bhi = -blo;
  for (const Vec3& x : body.positions) grow(blo, bhi, x);
  for (const Vec3& d : reach) {
    grow(lo, hi, blo + d);
    grow(lo, hi, bhi + d);
  }
  mpm::World w(scene_grid(c, lo, hi), c.materials);
  const double volume = c.spacing * c.spacing * c.spacing;
  w.add_body(s.sensor.membrane, c.sensor.material, volume);
  w.add_body(body, c.indenter.material, volume);
  w.add_tracers(s.sensor.surface->vertices());
  return w;
}

/// Moves the indenter from displacement `from` to `to` (relative to its start
/// pose), then settles. Returns the steps taken.
inline std::size_t drive(mpm::World& w, const SceneConfig& c, const Vec3& from, const Vec3& to) {
  const mpm::LinearMove move{to - from, c.simulation.indenter_speed};
  mpm::BoundarySpec b;
  b.fixed = {RegionTag::support};
  b.rigid.push_back({RegionTag::object, move.schedule()});
  w.set_boundaries(b);
  std::size_t n = w.run_until([&](const mpm::World& x) { return move.finished(x.phase_time()); },
                              c.simulation.max_steps_per_move);
  for (int k = 0; k < c.simulation.settle_steps; ++k, ++n) w.step();
  return n;
}

} // namespace detail

/// Runs the configured trajectory and hands every record to `sink`.
inline CollectionSummary run_collection(const Scene& s, const RecordSink& sink) {
  const SceneConfig& c = s.config;
  const TrajectorySpec& t = c.trajectory;
  t.validate();
  CollectionSummary sum;
  std::size_t next = 0;

  auto emit = [&](RecordInfo info, const Snapshot& sn) {
    info.id = next++;
    (info.release() ? sum.release_frames : sum.contact_frames)++;
    ++sum.records;
    sink(info, sn);
  };
  auto snap = [&](const mpm::World& w) { return take_snapshot(s, w.extract_surface(), w.tracers()); };
  auto posed = [](const Pose& start, const Vec3& d) { return Pose{start.position + d, start.rotation}; };

  if (t.kind == TrajectoryKind::custom) {
    const Pose start = custom_start_pose(c, s.sensor);
    std::vector<Vec3> reach{Vec3::Zero()};
    for (const Waypoint& wp : t.waypoints) reach.push_back(wp.offset);
    mpm::World w = detail::contact_world(s, start, reach);
    Vec3 at = Vec3::Zero();
    sum.contacts = 1;
    for (std::size_t k = 0; k < t.waypoints.size(); ++k) {
      const Waypoint& wp = t.waypoints[k];
      detail::for_record(next, [&] { sum.steps += detail::drive(w, c, at, wp.offset); });
      at = wp.offset;
      if (!wp.record) continue;
      RecordInfo info;
      info.kind = RecordKind::waypoint;
      info.waypoint = static_cast<int>(k);
      info.pose = posed(start, at);
      emit(info, snap(w));
    }
    return sum;
  }

  const auto contacts = contact_points(t, s.sensor.mount);
  const auto depths = t.depth.values();
  const auto extents = t.shear_directions > 0 ? t.shear_extent.values() : std::vector<double>{};
  const double gap = c.indenter.gap;
  sum.contacts = contacts.size();

  for (std::size_t ci = 0; ci < contacts.size(); ++ci) {
    const ContactPoint& cp = contacts[ci];
    const Pose start = approach_pose(s.sensor.indenter, cp, gap);
    const double emax = extents.empty() ? 0.0 : extents.back();
    const Vec3 deepest = -(gap + depths.back()) * cp.normal;
    std::vector<Vec3> reach{Vec3::Zero(), deepest};
    for (const Vec3& d : {cp.t1, cp.t2, Vec3(-cp.t1), Vec3(-cp.t2)}) reach.push_back(deepest + emax * d);
    mpm::World w = detail::contact_world(s, start, reach);
    Vec3 at = Vec3::Zero();

    RecordInfo base;
    base.contact = static_cast<int>(ci);
    base.path = cp.path;
    base.position = cp.position;
    base.region = cp.region;

    auto release = [&](RecordInfo info, const mpm::World* pressed, const Vec3& from) {
      if (!t.record_release) return;
      info.kind = RecordKind::release;
      info.pose = start;
      if (c.simulation.release == ReleaseMode::reset) {
        emit(info, s.rest);
        return;
      }
      mpm::World r = *pressed;
      detail::for_record(next, [&] { sum.steps += detail::drive(r, c, from, Vec3::Zero()); });
      emit(info, snap(r));
    };

    for (std::size_t j = 0; j < depths.size(); ++j) {
      const Vec3 pressed = -(gap + depths[j]) * cp.normal;
      detail::for_record(next, [&] { sum.steps += detail::drive(w, c, at, pressed); });
      at = pressed;
      RecordInfo info = base;
      info.kind = RecordKind::normal;
      info.depth_index = static_cast<int>(j);
      info.depth = depths[j];
      info.pose = posed(start, at);
      emit(info, snap(w));

      if (t.shear_directions == 0) {
        release(info, &w, at);
        continue;
      }
      for (int k = 0; k < t.shear_directions; ++k) {
        const Vec3 dir = shear_direction(cp, t, k);
        mpm::World ws = w;
        Vec3 sat = at;
        RecordInfo sh = info;
        sh.kind = RecordKind::shear;
        sh.shear_direction = k;
        for (std::size_t e = 0; e < extents.size(); ++e) {
          const Vec3 target = pressed + extents[e] * dir;
          detail::for_record(next, [&] { sum.steps += detail::drive(ws, c, sat, target); });
          sat = target;
          sh.shear_index = static_cast<int>(e);
          sh.shear = extents[e];
          sh.pose = posed(start, sat);
          emit(sh, snap(ws));
        }
        RecordInfo rel = info;
        rel.shear_direction = k;
        release(rel, &ws, sat);
      }
    }
  }
  return sum;
}

} // namespace tacsim::scene
