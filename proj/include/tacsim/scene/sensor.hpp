// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Sensor assembly from a resolved config: tagged membrane particles, the
// reflective (outer) surface mesh, the mounting primitive and the indenter
// body in its local frame.

#include "tacsim/core/error.hpp"
#include "tacsim/core/random.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/bvh.hpp"
#include "tacsim/geometry/mesh.hpp"
#include "tacsim/geometry/mesh_io.hpp"
#include "tacsim/geometry/particles.hpp"
#include "tacsim/geometry/primitives.hpp"
#include "tacsim/geometry/sampling.hpp"
#include "tacsim/mpm/grid.hpp"
#include "tacsim/scene/config.hpp"
#include "tacsim/scene/trajectory.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace tacsim::scene {

struct Sensor {
  ParticleSet membrane;                           // all membrane particles, tagged
  std::shared_ptr<geometry::TriangleMesh> surface; // reflective surface at rest
  Mount mount;
  ParticleSet indenter; // local frame, tag object
};

/// Placement of the indenter body: world = position + rotation * local.
struct Pose {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  Vec3 apply(const Vec3& local) const { return position + rotation * local; }
  Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(rotation).normalized(); }
};

namespace detail {

inline ParticleSet gelsight_membrane(const SceneConfig& c) {
  const Vec3 s = c.sensor.size;
  const double h = c.spacing;
  ParticleSet p = geometry::sample_volume(geometry::make_box(Vec3::Zero(), s), h);
  p.retag([&](const Vec3& x, RegionTag t) { return t == RegionTag::membrane_surface && x.z() < s.z() - 0.5 * h; },
          RegionTag::membrane_interior);
  p.retag([&](const Vec3& x, RegionTag) { return x.z() < 0.5 * h; }, RegionTag::support);
  return p;
}

/// Depth of x below the outer finger surface.
inline double finger_depth_below_surface(const Vec3& x, double radius, double length) {
  const double rho = x.z() <= length ? std::hypot(x.x(), x.y()) : (x - Vec3(0.0, 0.0, length)).norm();
  return radius - rho;
}

inline ParticleSet geltip_membrane(const SceneConfig& c) {
  const auto& s = c.sensor;
  const double h = c.spacing;
  const auto shell = geometry::make_finger_shell(s.radius, s.thickness, s.length, s.segments, std::max(4, s.segments / 4));
  ParticleSet p = geometry::sample_volume(shell, h);
  // The lattice marks both walls and the base ring as surface; keep the
  // outer skin as reflective surface, pin the inner wall and the base.
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3& x = p.positions[i];
    const double d = finger_depth_below_surface(x, s.radius, s.length);
    RegionTag t = RegionTag::membrane_interior;
    if (x.z() < 0.5 * h) {
      t = RegionTag::support;
    } else if (p.tags[i] == RegionTag::membrane_surface && d < 0.5 * s.thickness) {
      t = RegionTag::membrane_surface;
    } else if (d > s.thickness - h) {
      t = RegionTag::support;
    }
    p.tags[i] = t;
  }
  return p;
}

/// Moves reflective-surface particles onto the closest point of the
/// reflective mesh, so imaging sees the surface rather than lattice steps.
inline void snap_to_surface(ParticleSet& p, const geometry::Bvh& surface) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.tags[i] != RegionTag::membrane_surface) continue;
    const auto face = surface.closest(p.positions[i]).second;
    const auto tri = surface.mesh().triangle(face);
    p.positions[i] = geometry::closest_point_on_triangle(p.positions[i], tri[0], tri[1], tri[2]);
  }
}

inline ParticleSet mesh_membrane(const SceneConfig& c, const geometry::Bvh& reflective) {
  ParticleSet p = geometry::sample_volume(geometry::load_mesh(c.sensor.membrane_mesh), c.spacing);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3& x = p.positions[i];
    if (x[c.sensor.support_axis] < c.sensor.support_below) {
      p.tags[i] = RegionTag::support;
    } else {
      p.tags[i] = reflective.closest(x).first <= c.sensor.surface_band ? RegionTag::membrane_surface
                                                                       : RegionTag::membrane_interior;
    }
  }
  return p;
}

} // namespace detail

/// Indenter particles in the body frame (sphere centred at the origin).
inline ParticleSet build_indenter(const SceneConfig& c) {
  geometry::TriangleMesh body = c.indenter.shape == IndenterSpec::sphere
                                    ? geometry::make_icosphere(Vec3::Zero(), c.indenter.radius, 3)
                                    : geometry::load_mesh(c.indenter.mesh_path);
  ParticleSet p;
  if (c.indenter.sampling == IndenterSpec::volume) {
    p = geometry::sample_volume(body, c.spacing);
  } else {
    Rng rng(c.seed);
    const auto n = static_cast<std::size_t>(std::ceil(body.surface_area() / (c.spacing * c.spacing)));
    p = geometry::sample_surface(body, std::max<std::size_t>(n, 1), rng);
  }
  p.retag([](const Vec3&, RegionTag) { return true; }, RegionTag::object);
  return p;
}

inline Sensor build_sensor(const SceneConfig& c) {
  Sensor s;
  const double h = c.spacing;
  switch (c.sensor.kind) {
    case SensorKind::gelsight: {
      const Vec3 z = c.sensor.size;
      const int nx = std::max(1, static_cast<int>(std::lround(z.x() / h)));
      const int ny = std::max(1, static_cast<int>(std::lround(z.y() / h)));
      s.surface = std::make_shared<geometry::TriangleMesh>(geometry::make_grid_patch(0.0, z.x(), 0.0, z.y(), z.z(), nx, ny, true));
      s.membrane = detail::gelsight_membrane(c);
      s.mount.kind = Mount::plane;
      s.mount.centre = Vec3(0.5 * z.x(), 0.5 * z.y(), z.z());
      break;
    }
    case SensorKind::geltip: {
      const auto& g = c.sensor;
      const int wall = std::max(2, static_cast<int>(std::ceil(g.length / h)));
      s.surface = std::make_shared<geometry::TriangleMesh>(
          geometry::make_finger_outer_surface(g.radius, g.length, g.segments, std::max(4, g.segments / 4), wall));
      s.membrane = detail::geltip_membrane(c);
      detail::snap_to_surface(s.membrane, geometry::Bvh(*s.surface));
      s.mount.kind = Mount::finger;
      s.mount.radius = g.radius;
      s.mount.length = g.length;
      break;
    }
    case SensorKind::mesh: {
      s.surface = std::make_shared<geometry::TriangleMesh>(geometry::load_mesh(c.sensor.reflective_mesh));
      const geometry::Bvh bvh(*s.surface);
      s.membrane = detail::mesh_membrane(c, bvh);
      detail::snap_to_surface(s.membrane, bvh);
      break;
    }
  }
  if (s.membrane.count(RegionTag::membrane_surface) == 0) {
    throw ValidationError("sensor: no membrane particles lie on the reflective surface");
  }
  s.indenter = build_indenter(c);
  return s;
}

/// Indenter perpendicular to the surface at `cp` (body +z along the outward
/// normal), its lowest particle `gap` above the contact point.
inline Pose approach_pose(const ParticleSet& indenter, const ContactPoint& cp, double gap) {
  Pose pose;
  pose.rotation.col(0) = cp.t1;
  pose.rotation.col(1) = cp.t2;
  pose.rotation.col(2) = cp.normal;
  double lowest = std::numeric_limits<double>::infinity();
  for (const Vec3& x : indenter.positions) lowest = std::min(lowest, (pose.rotation * x).dot(cp.normal));
  pose.position = cp.point + (gap - lowest) * cp.normal;
  return pose;
}

/// Start pose for custom trajectories: the configured centre, else above the
/// mounting primitive's top.
inline Pose custom_start_pose(const SceneConfig& c, const Sensor& s) {
  if (c.indenter.position) return Pose{*c.indenter.position, Mat3::Identity()};
  ContactPoint cp;
  if (c.sensor.kind == SensorKind::gelsight) {
    cp.point = s.mount.centre;
  } else if (c.sensor.kind == SensorKind::geltip) {
    cp.point = Vec3(0.0, 0.0, s.mount.length + s.mount.radius);
  } else {
    throw ValidationError("$.indenter.position: required for custom trajectories on mesh sensors");
  }
  tangent_basis(cp.normal, cp.t1, cp.t2);
  return approach_pose(s.indenter, cp, c.indenter.gap);
}

inline ParticleSet place(const ParticleSet& local, const Pose& pose) {
  ParticleSet out = local;
  for (Vec3& x : out.positions) x = pose.apply(x);
  return out;
}

/// Cubic grid with pitch 2h enclosing `lo`..`hi` plus padding cells, unless
/// the config fixes nodes and length (then centred on the box).
inline mpm::GridConfig scene_grid(const SceneConfig& c, const Vec3& lo, const Vec3& hi) {
  mpm::GridConfig g;
  g.dt = c.grid.dt;
  if (c.grid.nodes) {
    g.nodes = *c.grid.nodes;
    g.length = *c.grid.length;
    return g.centered_on(0.5 * (lo + hi));
  }
  const double dx = 2.0 * c.spacing;
  const double extent = (hi - lo).maxCoeff();
  g.nodes = std::max(8, static_cast<int>(std::ceil(extent / dx)) + 2 * c.grid.padding);
  g.length = g.nodes * dx;
  return g.centered_on(0.5 * (lo + hi));
}

} // namespace tacsim::scene
