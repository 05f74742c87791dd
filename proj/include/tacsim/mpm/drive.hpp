// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Force-coupled drive for a rigid body: the body is pulled toward a moving
// base through a damped spring and pushed back by the momentum the grid
// hands its particles. Unlike a prescribed move, the penetration it reaches
// depends on how hard the membrane pushes back.

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/mpm/boundary.hpp"
#include "tacsim/mpm/world.hpp"

#include <memory>

namespace tacsim::mpm {

struct SpringDrive {
  LinearMove base;        // commanded motion of the spring anchor
  double stiffness = 0.2; // N/mm
  double damping = 0.0;   // N s/mm, on the body velocity
};

struct SpringDriveState {
  Vec3 displacement = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

/// Schedule for `tag` in `world`. Must be installed on that world. It reads
/// the gathered particle velocities before apply_boundaries overwrites them,
/// so the body momentum after G2P contains the contact impulse. `state`
/// exposes the body's displacement for inspection.
inline VelocitySchedule spring_drive(const World& world, RegionTag tag, const SpringDrive& d,
                                     std::shared_ptr<SpringDriveState> state) {
  if (!(d.stiffness > 0.0)) throw ValidationError("spring drive: stiffness must be > 0");
  if (d.damping < 0.0) throw ValidationError("spring drive: damping must be >= 0");
  if (!state) throw ValidationError("spring drive: state required");
  const World* w = &world;
  return [w, tag, d, state](double t, double dt) {
    const ParticleState& p = w->particles();
    double mass = 0.0;
    Vec3 momentum = Vec3::Zero();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.tag[i] != tag) continue;
      mass += p.m[i];
      momentum += p.m[i] * p.v[i];
    }
    if (!(mass > 0.0)) throw ValidationError("spring drive: no particles carry the driven tag");
    const Vec3 force = d.stiffness * (d.base.position(t) - state->displacement) - d.damping * state->velocity;
    state->velocity = (momentum + dt * force) / mass;
    state->displacement += dt * state->velocity;
    return state->velocity;
  };
}

} // namespace tacsim::mpm
