// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Explicit MLS-MPM world: particles, an active grid window and boundary
// constraints, advanced with P2G -> grid update -> G2P -> boundaries -> advect.

#include "tacsim/core/arrays.hpp"
#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/geometry/particles.hpp"
#include "tacsim/mpm/boundary.hpp"
#include "tacsim/mpm/grid.hpp"
#include "tacsim/mpm/material.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace tacsim::mpm {

struct Options {
  /// Use the affine update C = dx^2/dt * sum w v_p (X - x)/dx with the
  /// freshly gathered particle velocity, instead of the MLS-MPM gather
  /// C = 4/dx^2 * sum w V_i (X - x)^T. Kept for comparison only: the B-spline
  /// first moment vanishes, so C stays (numerically) zero and F never evolves.
  bool literal_affine_update = false;
  /// Grid velocity damping rate (1/s); 0 disables.
  double grid_damping = 0.0;
  std::size_t max_steps = 1'000'000;
  bool enforce_cfl = true;
};

/// Structure-of-arrays particle state.
struct ParticleState {
  Vec3List x, v, x0;
  std::vector<Mat3> F, C;
  std::vector<double> m, V0;
  std::vector<RegionTag> tag;
  std::vector<std::uint32_t> material;
  std::vector<std::int64_t> index;

  std::size_t size() const { return x.size(); }
};

/// Upper bound on dt for an explicit step with this material and spacing.
inline double cfl_limit(const Material& mat, double dx) { return 0.4 * dx / mat.wave_speed(); }

class World {
public:
  World(GridConfig grid, std::vector<Material> materials, Options options = {})
      : grid_(grid), materials_(std::move(materials)), options_(options) {
    grid_.validate();
    if (materials_.empty()) throw ValidationError("mpm world: at least one material required");
    for (const Material& m : materials_) {
      m.validate();
      if (options_.enforce_cfl && m.kind == MaterialKind::elastic && grid_.dt > cfl_limit(m, grid_.dx())) {
        std::ostringstream msg;
        msg << "mpm world: dt = " << grid_.dt << " s exceeds the CFL bound " << cfl_limit(m, grid_.dx())
            << " s for E = " << m.youngs_modulus << " MPa, rho = " << m.density << " t/mm^3";
        throw ValidationError(msg.str());
      }
    }
    if (options_.grid_damping < 0.0) throw ValidationError("mpm world: damping must be >= 0");
  }

  /// Adds a body of identical particles (F = I, C = 0, v = 0). Returns the
  /// slot of its first particle.
  std::size_t add_body(const ParticleSet& body, std::uint32_t material_id, double particle_volume) {
    if (material_id >= materials_.size()) throw ValidationError("mpm world: unknown material id");
    if (!(particle_volume > 0.0)) throw ValidationError("mpm world: particle volume must be > 0");
    const std::size_t first = p_.size();
    const double mass = materials_[material_id].density * particle_volume;
    for (std::size_t i = 0; i < body.size(); ++i) {
      p_.x.push_back(body.positions[i]);
      p_.x0.push_back(body.positions[i]);
      p_.v.push_back(Vec3::Zero());
      p_.F.push_back(Mat3::Identity());
      p_.C.push_back(Mat3::Zero());
      p_.m.push_back(mass);
      p_.V0.push_back(particle_volume);
      p_.tag.push_back(body.tags[i]);
      p_.material.push_back(material_id);
      p_.index.push_back(body.indices[i]);
    }
    return first;
  }

  /// Massless points carried with the mass-weighted grid velocity, used to
  /// follow surface mesh vertices.
  void add_tracers(const Vec3List& points) {
    tracers_.insert(tracers_.end(), points.begin(), points.end());
    tracers0_.insert(tracers0_.end(), points.begin(), points.end());
    tracer_v_.resize(tracers_.size(), Vec3::Zero());
  }

  /// Installs constraints and restarts the phase clock seen by schedules.
  void set_boundaries(BoundarySpec spec) {
    spec.validate();
    bounds_ = std::move(spec);
    phase_steps_ = 0;
  }

  // ---------------------------------------------------------------- stages

  void p2g() {
    const std::size_t n = p_.size();
    if (n == 0) throw ValidationError("mpm world: no particles");
    const double inv_dx = 1.0 / grid_.dx();
    stencils_.resize(n);
    std::vector<char> bad(n, 0);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t p) {
      stencils_[p] = make_stencil(p_.x[p], grid_.origin, inv_dx);
      bad[p] = !inside(p_.x[p]);
    });
    check_domain(bad, p_.x, "particle", &p_.index);
    std::vector<char> tbad(tracers_.size(), 0);
    for (std::size_t t = 0; t < tracers_.size(); ++t) tbad[t] = !inside(tracers_[t]);
    check_domain(tbad, tracers_, "tracer", nullptr);

    Vec3i lo = Vec3i::Constant(std::numeric_limits<int>::max());
    Vec3i hi = Vec3i::Constant(std::numeric_limits<int>::min());
    for (const Stencil& s : stencils_) {
      lo = lo.cwiseMin(s.base);
      hi = hi.cwiseMax(s.base);
    }
    window_.reset(lo, hi + Vec3i::Constant(2));

    // Per-particle affine matrix: MLS stress term plus m * C.
    const double dx = grid_.dx(), dt = grid_.dt;
    affine_.resize(n);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t p) {
      const Material& mat = materials_[p_.material[p]];
      Mat3 a = p_.m[p] * p_.C[p];
      if (mat.kind == MaterialKind::elastic) {
        const Mat3 P = neo_hookean_pk1(p_.F[p], mat.mu(), mat.lambda());
        a -= dt * p_.V0[p] * 4.0 / (dx * dx) * P * p_.F[p].transpose();
      }
      affine_[p] = a;
    });

    // Slabs of 4 cells along x never share a node with the slab after next,
    // so even slabs run concurrently, then odd ones. Each slab accumulates
    // its particles in index order, which makes the sums independent of the
    // thread count.
    const int nslab = (window_.shape.x() + 3) / 4;
    std::vector<std::size_t> start(nslab + 1, 0);
    for (const Stencil& s : stencils_) ++start[(s.base.x() - lo.x()) / 4 + 1];
    for (int s = 0; s < nslab; ++s) start[s + 1] += start[s];
    std::vector<std::size_t> order(n);
    {
      std::vector<std::size_t> fill(start.begin(), start.end() - 1);
      for (std::size_t p = 0; p < n; ++p) order[fill[(stencils_[p].base.x() - lo.x()) / 4]++] = p;
    }
    for (int parity = 0; parity < 2; ++parity) {
      const std::ptrdiff_t count = (nslab - parity + 1) / 2;
      parallel_for(count, [&](std::ptrdiff_t k) {
        const int s = static_cast<int>(2 * k + parity);
        for (std::size_t q = start[s]; q < start[s + 1]; ++q) scatter(order[q], dx);
      });
    }
  }

  void grid_update() {
    const double floor = mass_floor();
    const double keep = options_.grid_damping > 0.0 ? std::max(0.0, 1.0 - options_.grid_damping * grid_.dt) : 1.0;
    parallel_for(static_cast<std::ptrdiff_t>(window_.size()), [&](std::ptrdiff_t i) {
      window_.velocity[i] = window_.mass[i] > floor ? Vec3(keep * window_.momentum[i] / window_.mass[i]) : Vec3::Zero();
    });
  }

  void g2p() {
    const std::size_t n = p_.size();
    const double dx = grid_.dx(), dt = grid_.dt;
    std::vector<Vec3> v_new(n);
    std::vector<Mat3> C_new(n), F_new(n);
    std::vector<char> bad(n, 0);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t p) {
      const Stencil& s = stencils_[p];
      Vec3 v = Vec3::Zero();
      Mat3 B = Mat3::Zero();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const double w = s.weight(a, b, c);
            const Vec3& V = window_.velocity[window_.index(s.base + Vec3i(a, b, c))];
            v += w * V;
            B += w * V * s.offset(a, b, c).transpose();
          }
      Mat3 C;
      if (options_.literal_affine_update) {
        Vec3 moment = Vec3::Zero();
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) moment += s.weight(a, b, c) * s.offset(a, b, c);
        C = (dx * dx / dt) * v * moment.transpose();
      } else {
        C = (4.0 / dx) * B;
      }
      const Material& mat = materials_[p_.material[p]];
      v_new[p] = v;
      if (mat.kind == MaterialKind::rigid) {
        C_new[p] = Mat3::Zero();
        F_new[p] = p_.F[p];
        bad[p] = !v.allFinite();
        return;
      }
      C_new[p] = C;
      F_new[p] = (Mat3::Identity() + dt * C) * p_.F[p];
      const double J = F_new[p].determinant();
      bad[p] = !(J > 0.0) || !std::isfinite(J) || !v.allFinite();
    });
    for (std::size_t p = 0; p < n; ++p) {
      if (bad[p]) {
        throw InversionError("mpm step " + std::to_string(steps_) + ": particle " + std::to_string(p_.index[p]) +
                             " has det(F) <= 0 or a non-finite state");
      }
    }
    p_.v.swap(v_new);
    p_.C.swap(C_new);
    p_.F.swap(F_new);

    // Tracers: sum w MG / sum w M, unbiased by empty nodes at the surface.
    const double inv_dx = 1.0 / dx;
    parallel_for(static_cast<std::ptrdiff_t>(tracers_.size()), [&](std::ptrdiff_t t) {
      const Stencil s = make_stencil(tracers_[t], grid_.origin, inv_dx);
      Vec3 mom = Vec3::Zero();
      double mass = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const Vec3i node = s.base + Vec3i(a, b, c);
            if (!in_window(node)) continue;
            const std::size_t i = window_.index(node);
            const double w = s.weight(a, b, c);
            mom += w * window_.mass[i] * window_.velocity[i];
            mass += w * window_.mass[i];
          }
      tracer_v_[t] = mass > 0.0 ? Vec3(mom / mass) : Vec3::Zero();
    });
  }

  void apply_boundaries() {
    constexpr int kTags = 5;
    int action[kTags];
    std::fill(action, action + kTags, -1);
    Vec3 rigid_v[kTags];
    for (RegionTag t : bounds_.fixed) {
      action[static_cast<int>(t)] = 0;
      rigid_v[static_cast<int>(t)] = Vec3::Zero();
    }
    const double t_phase = phase_time();
    for (const auto& r : bounds_.rigid) {
      action[static_cast<int>(r.tag)] = 1;
      rigid_v[static_cast<int>(r.tag)] = r.velocity(t_phase, grid_.dt);
    }
    for (std::size_t p = 0; p < p_.size(); ++p) {
      const int k = static_cast<int>(p_.tag[p]);
      if (action[k] >= 0) p_.v[p] = rigid_v[k];
    }
  }

  void advect() {
    const double dt = grid_.dt;
    parallel_for(static_cast<std::ptrdiff_t>(p_.size()), [&](std::ptrdiff_t p) { p_.x[p] += dt * p_.v[p]; });
    for (std::size_t t = 0; t < tracers_.size(); ++t) tracers_[t] += dt * tracer_v_[t];
  }

  void step() {
    p2g();
    grid_update();
    g2p();
    apply_boundaries();
    advect();
    ++steps_;
    ++phase_steps_;
  }

  /// Steps until `done(*this)` holds. Returns the number of steps taken;
  /// throws when the cap (default: Options::max_steps) is hit first.
  std::size_t run_until(const std::function<bool(const World&)>& done, std::size_t max_steps = 0) {
    const std::size_t cap = max_steps ? max_steps : options_.max_steps;
    std::size_t k = 0;
    while (!done(*this)) {
      if (k == cap) {
        throw Error("mpm run_until: termination predicate not met within " + std::to_string(cap) + " steps");
      }
      step();
      ++k;
    }
    return k;
  }

  // ------------------------------------------------------------- queries

  /// Membrane-surface particles at their current positions, original indices.
  ParticleSet extract_surface() const {
    ParticleSet out;
    for (std::size_t p = 0; p < p_.size(); ++p) {
      if (p_.tag[p] == RegionTag::membrane_surface) out.push_back(p_.x[p], p_.index[p], p_.tag[p]);
    }
    return out;
  }

  Vec3List displacements() const {
    Vec3List d(p_.size());
    for (std::size_t p = 0; p < p_.size(); ++p) d[p] = p_.x[p] - p_.x0[p];
    return d;
  }

  double total_particle_mass() const {
    double s = 0.0;
    for (double m : p_.m) s += m;
    return s;
  }
  Vec3 total_particle_momentum() const {
    Vec3 s = Vec3::Zero();
    for (std::size_t p = 0; p < p_.size(); ++p) s += p_.m[p] * p_.v[p];
    return s;
  }
  double total_grid_mass() const {
    double s = 0.0;
    for (double m : window_.mass) s += m;
    return s;
  }
  Vec3 total_grid_momentum() const {
    Vec3 s = Vec3::Zero();
    for (const Vec3& m : window_.momentum) s += m;
    return s;
  }

  double mass_floor() const {
    const double nodes = static_cast<double>(grid_.nodes);
    return 1e-12 * total_particle_mass() / (nodes * nodes * nodes);
  }

  /// Grid velocity at node (i, j, k); zero outside the active window.
  Vec3 node_velocity(const Vec3i& node) const {
    return in_window(node) ? window_.velocity[window_.index(node)] : Vec3::Zero();
  }
  Vec3 node_position(const Vec3i& node) const { return grid_.origin + grid_.dx() * node.cast<double>(); }

  const GridConfig& grid_config() const { return grid_; }
  const GridWindow& grid() const { return window_; }
  GridWindow& grid() { return window_; }
  const std::vector<Material>& materials() const { return materials_; }
  const Options& options() const { return options_; }
  const BoundarySpec& boundaries() const { return bounds_; }
  const ParticleState& particles() const { return p_; }
  ParticleState& particles() { return p_; }
  const Vec3List& tracers() const { return tracers_; }
  const Vec3List& tracer_rest() const { return tracers0_; }
  std::size_t steps() const { return steps_; }
  std::size_t phase_steps() const { return phase_steps_; }
  double time() const { return static_cast<double>(steps_) * grid_.dt; }
  double phase_time() const { return static_cast<double>(phase_steps_) * grid_.dt; }

  // ---------------------------------------------------------- checkpoint

  Container checkpoint() const {
    Container c;
    add_vec3(c, "x", p_.x);
    add_vec3(c, "v", p_.v);
    add_mat3(c, "F", p_.F);
    add_mat3(c, "C", p_.C);
    c.add<double>("m", {p_.size()}, p_.m);
    c.add<double>("V0", {p_.size()}, p_.V0);
    std::vector<std::uint8_t> tags(p_.size());
    std::vector<std::int32_t> mats(p_.size());
    for (std::size_t p = 0; p < p_.size(); ++p) {
      tags[p] = static_cast<std::uint8_t>(p_.tag[p]);
      mats[p] = static_cast<std::int32_t>(p_.material[p]);
    }
    c.add<std::uint8_t>("tag", {p_.size()}, tags);
    c.add<std::int32_t>("material_id", {p_.size()}, mats);
    c.add<std::int64_t>("index", {p_.size()}, p_.index);
    add_vec3(c, "x0", p_.x0);
    add_vec3(c, "tracers", tracers_);
    add_vec3(c, "tracers0", tracers0_);
    c.add_scalar<std::uint64_t>("steps", steps_);
    c.add_scalar<std::uint64_t>("phase_steps", phase_steps_);
    c.add_scalar<double>("dt", grid_.dt);
    return c;
  }

  /// Replaces the particle and tracer state with a checkpoint's.
  void restore(const Container& c) {
    ParticleState s;
    s.x = get_vec3(c, "x");
    s.v = get_vec3(c, "v");
    s.F = get_mat3(c, "F");
    s.C = get_mat3(c, "C");
    s.m = c.get<double>("m");
    s.V0 = c.get<double>("V0");
    s.index = c.get<std::int64_t>("index");
    s.x0 = get_vec3(c, "x0");
    const auto tags = c.get<std::uint8_t>("tag");
    const auto mats = c.get<std::int32_t>("material_id");
    const std::size_t n = s.x.size();
    if (s.v.size() != n || s.F.size() != n || s.C.size() != n || s.m.size() != n || s.V0.size() != n ||
        s.index.size() != n || s.x0.size() != n || tags.size() != n || mats.size() != n) {
      throw FormatError("mpm checkpoint: particle arrays disagree in length");
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (tags[p] > static_cast<std::uint8_t>(RegionTag::object)) throw FormatError("mpm checkpoint: bad tag");
      if (mats[p] < 0 || static_cast<std::size_t>(mats[p]) >= materials_.size()) {
        throw FormatError("mpm checkpoint: material id out of range");
      }
      s.tag.push_back(static_cast<RegionTag>(tags[p]));
      s.material.push_back(static_cast<std::uint32_t>(mats[p]));
    }
    p_ = std::move(s);
    tracers_ = get_vec3(c, "tracers");
    tracers0_ = get_vec3(c, "tracers0");
    tracer_v_.assign(tracers_.size(), Vec3::Zero());
    steps_ = c.scalar<std::uint64_t>("steps");
    phase_steps_ = c.scalar<std::uint64_t>("phase_steps");
  }

private:
  bool inside(const Vec3& x) const {
    const Vec3 fx = (x - grid_.origin) / grid_.dx();
    const double hi = grid_.nodes - 2.0;
    return (fx.array() >= 2.0).all() && (fx.array() <= hi).all();
  }

  bool in_window(const Vec3i& node) const {
    const Vec3i r = node - window_.lo;
    return (r.array() >= 0).all() && (r.array() < window_.shape.array()).all();
  }

  void check_domain(const std::vector<char>& bad, const Vec3List& x, const char* what,
                    const std::vector<std::int64_t>* ids) const {
    for (std::size_t p = 0; p < bad.size(); ++p) {
      if (!bad[p]) continue;
      std::ostringstream msg;
      msg << "mpm step " << steps_ << ": " << what << ' ' << (ids ? (*ids)[p] : static_cast<std::int64_t>(p))
          << " at (" << x[p].x() << ", " << x[p].y() << ", " << x[p].z()
          << ") mm is within 2 cells of the grid boundary";
      throw OutOfDomainError(msg.str());
    }
  }

  void scatter(std::size_t p, double dx) {
    const Stencil& s = stencils_[p];
    const Vec3 mv = p_.m[p] * p_.v[p];
    const Mat3& A = affine_[p];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const double w = s.weight(a, b, c);
          const std::size_t i = window_.index(s.base + Vec3i(a, b, c));
          window_.mass[i] += w * p_.m[p];
          window_.momentum[i] += w * (mv + A * (dx * s.offset(a, b, c)));
        }
  }

  GridConfig grid_;
  std::vector<Material> materials_;
  Options options_;
  BoundarySpec bounds_;
  ParticleState p_;
  Vec3List tracers_, tracers0_, tracer_v_;
  GridWindow window_;
  std::vector<Stencil> stencils_;
  std::vector<Mat3> affine_;
  std::size_t steps_ = 0;
  std::size_t phase_steps_ = 0;
};

} // namespace tacsim::mpm
