// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when any
// check fails.
//
//   tacsim_acceptance [--only NAME] [--freeze-golden]

#include "support/field_scenes.hpp"
#include "support/slab_scene.hpp"
#include "support/test_util.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/core/random.hpp"
#include "tacsim/geometry/slicing.hpp"
#include "tacsim/imaging/projection.hpp"
#include "tacsim/lightfield/field.hpp"
#include "tacsim/mpm/drive.hpp"
#include "tacsim/render/phong.hpp"
#include "tacsim/scene/collect.hpp"
#include "tacsim/scene/config.hpp"
#include "tacsim/scene/dataset.hpp"
#include "tacsim/scene/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace tacsim;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(TACSIM_TEST_DATA_DIR) / "golden" / "geltip_160x120.png";
bool g_freeze = false;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

double max_pair_drift(const std::vector<Vec3>& x, const std::vector<Vec3>& x0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      worst = std::max(worst, std::abs((x[i] - x[j]).norm() - (x0[i] - x0[j]).norm()));
  return worst;
}

// ------------------------------------------------------------------- MPM

Outcome mpm_conservation() {
  // grid mass against particle mass after every step of an indentation
  test::SlabSetup s;
  mpm::World w = test::slab_world(s, true);
  mpm::BoundarySpec spec;
  spec.fixed = {RegionTag::support};
  spec.rigid = {{RegionTag::object, mpm::LinearMove{Vec3(0, 0, -0.5), 20.0}.schedule()}};
  w.set_boundaries(spec);
  double mass_err = 0.0;
  for (int k = 0; k < 300; ++k) {
    w.step();
    mass_err = std::max(mass_err, std::abs(w.total_grid_mass() - w.total_particle_mass()) / w.total_particle_mass());
  }

  // stress-free transfer of a random APIC state
  Rng rng(21);
  mpm::GridConfig g;
  g.nodes = 16;
  g.length = 16.0;
  g.dt = 1e-4;
  g.origin = Vec3::Zero();
  mpm::World cloud(g, {mpm::Material{0.145, 0.45, 1e-6, mpm::MaterialKind::elastic}});
  ParticleSet p;
  for (int i = 0; i < 10000; ++i) {
    p.push_back(Vec3(rng.uniform(4, 12), rng.uniform(4, 12), rng.uniform(4, 12)), i, RegionTag::membrane_interior);
  }
  cloud.add_body(p, 0, 0.1);
  auto& st = cloud.particles();
  double scale = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    st.v[i] = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) st.C[i](r, c) = rng.uniform(-50, 50);
    scale += st.m[i] * st.v[i].norm();
  }
  cloud.p2g();
  const double mom_err = (cloud.total_grid_momentum() - cloud.total_particle_momentum()).norm() / scale;

  // 1000 steps of a prescribed rigid translation and of a free stress-free block
  mpm::World rigid(g, {mpm::Material{1e3, 0.3, 1e-3, mpm::MaterialKind::rigid}});
  ParticleSet block = geometry::sample_volume(geometry::make_box(Vec3(6, 6, 6), Vec3(9, 9, 9)), 0.5);
  block.retag([](const Vec3&, RegionTag) { return true; }, RegionTag::object);
  rigid.add_body(block, 0, 0.125);
  mpm::BoundarySpec rs;
  rs.rigid = {{RegionTag::object, mpm::constant_velocity(Vec3(0.3, -0.2, -1.0))}};
  rigid.set_boundaries(rs);
  mpm::World free(g, {mpm::Material{0.145, 0.45, 1e-6, mpm::MaterialKind::elastic}});
  free.add_body(geometry::sample_volume(geometry::make_box(Vec3(6, 6, 6), Vec3(9, 9, 9)), 0.5), 0, 0.125);
  for (auto& v : free.particles().v) v = Vec3(0.5, -0.3, 1.0);
  for (int k = 0; k < 1000; ++k) {
    rigid.step();
    free.step();
  }
  const double drift = std::max(max_pair_drift(rigid.particles().x, rigid.particles().x0),
                                max_pair_drift(free.particles().x, free.particles().x0));

  const bool ok = mass_err <= 1e-12 && mom_err <= 1e-9 && drift <= 1e-9;
  return {ok, fmt("mass rel err %.2e (<=1e-12, 300 steps), momentum rel err %.2e (<=1e-9, 1e4 particles), "
                  "pair drift %.2e mm (<=1e-9, 1000 steps, %zu particles)",
                  mass_err, mom_err, drift, block.size())};
}

Outcome stiffness_ordering() {
  const double moduli[] = {0.0725, 0.145, 0.29};
  double peak[3];
  for (int e = 0; e < 3; ++e) {
    test::SlabSetup s;
    s.youngs_modulus = moduli[e];
    mpm::Material gel{s.youngs_modulus, s.poisson_ratio, s.density, mpm::MaterialKind::elastic};
    mpm::Material ind{1e3, 0.3, 1e-6, mpm::MaterialKind::rigid};
    mpm::World w(test::slab_grid(s), {gel, ind});
    const double vol = s.spacing * s.spacing * s.spacing;
    w.add_body(test::slab_particles(s), 0, vol);
    w.add_body(test::sphere_indenter(s), 1, vol);
    // the same 0.5 mm commanded indentation through a compliant drive
    auto state = std::make_shared<mpm::SpringDriveState>();
    mpm::SpringDrive d;
    d.base = {Vec3(0, 0, -0.5), 20.0};
    d.stiffness = 0.2;
    d.damping = 2e-3;
    mpm::BoundarySpec b;
    b.fixed = {RegionTag::support};
    b.rigid = {{RegionTag::object, mpm::spring_drive(w, RegionTag::object, d, state)}};
    w.set_boundaries(b);
    peak[e] = 0.0;
    for (int k = 0; k < 1500; ++k) {
      w.step();
      const auto& p = w.particles();
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p.tag[i] == RegionTag::membrane_surface) peak[e] = std::max(peak[e], (p.x[i] - p.x0[i]).norm());
    }
  }
  const bool ok = peak[0] > peak[1] && peak[1] > peak[2];
  return {ok, fmt("peak surface displacement %.4f > %.4f > %.4f mm for E = 0.0725, 0.145, 0.29 MPa", peak[0], peak[1],
                  peak[2])};
}

// --------------------------------------------------------------- imaging

Outcome projection_round_trip() {
  Rng rng(17);
  imaging::Camera cam;
  cam.width = 128;
  cam.height = 96;
  cam.fov = 1.1;
  cam.position = Vec3(1.5, -2.0, -3.0);
  cam.rotation = imaging::look_at(cam.position, Vec3(0.5, 0.2, 10.0), Vec3(0, 1, 0));
  const imaging::Intrinsics k = cam.k();

  double dense = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(0, cam.width - 1), v = rng.uniform(0, cam.height - 1), z = rng.uniform(1, 50);
    const auto px = imaging::project_point(k, imaging::unproject_pixel(k, u, v, z));
    dense = std::max({dense, std::abs(px.u - u), std::abs(px.v - v), std::abs(px.z - z)});
    const Vec3 q(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(1, 50));
    const auto pq = imaging::project_point(k, q);
    dense = std::max(dense, (imaging::unproject_pixel(k, pq.u, pq.v, pq.z) - q).norm());
  }

  // cloud: 10^4 particles on distinct pixel centres through project -> unproject
  std::vector<int> pixels(static_cast<std::size_t>(cam.width) * cam.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = static_cast<int>(i);
  for (std::size_t i = pixels.size() - 1; i > 0; --i) std::swap(pixels[i], pixels[rng.below(i + 1)]);
  ParticleSet p;
  for (int i = 0; i < 10000; ++i) {
    const int u = pixels[i] % cam.width, v = pixels[i] / cam.width;
    p.push_back(cam.to_world(imaging::unproject_pixel(k, u, v, rng.uniform(2, 40))), i, RegionTag::membrane_surface);
  }
  const auto pc = imaging::unproject(imaging::project(p, cam), cam);
  double cloud = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int u = pixels[i] % cam.width, v = pixels[i] / cam.width;
    cloud = std::max(cloud, (cam.to_world(pc(u, v)) - p.positions[i]).norm());
  }
  const bool ok = dense < 1e-9 && cloud < 1e-6;
  return {ok, fmt("dense max err %.2e (<1e-9), cloud max err %.2e mm (<1e-6), 1e4 samples each", dense, cloud)};
}

Outcome occlusion_oracle() {
  Rng rng(99);
  Vec3List v;
  std::vector<geometry::Face> f;
  for (int i = 0; i < 500; ++i) {
    const Vec3 c(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(3, 15));
    const auto base = static_cast<std::uint32_t>(v.size());
    for (int k = 0; k < 3; ++k) v.push_back(c + Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
    f.push_back({base, base + 1, base + 2});
  }
  const geometry::TriangleMesh soup(v, f);
  const geometry::Bvh bvh(soup);
  imaging::Camera cam;
  cam.position = Vec3(0.3, -0.2, 0.0);
  ParticleSet p;
  for (int i = 0; i < 1000; ++i) {
    p.push_back(Vec3(rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(2, 20)), i, RegionTag::membrane_surface);
  }
  const double eps = 1e-3;
  const ParticleSet kept = imaging::remove_occluded(p, bvh, cam, eps);
  std::vector<std::int64_t> oracle;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3 ray = p.positions[i] - cam.position;
    const double dist = ray.norm();
    bool hidden = false;
    for (std::size_t t = 0; t < soup.face_count() && !hidden; ++t) {
      const auto tri = soup.triangle(t);
      const auto hit = geometry::intersect_triangle(cam.position, ray / dist, tri[0], tri[1], tri[2]);
      hidden = hit && *hit > geometry::kRayEpsilon && *hit < dist - eps;
    }
    if (!hidden) oracle.push_back(p.indices[i]);
  }
  const bool ok = kept.indices == oracle;
  return {ok, fmt("kept %zu of 1000 particles behind 500 faces; brute force keeps %zu; sets %s", kept.size(),
                  oracle.size(), ok ? "equal" : "differ")};
}

// ------------------------------------------------------------ light field

Outcome light_field() {
  const auto flat = test::flat_scene(80, 60);
  double planar = 0.0;
  for (const Vec3& src : {Vec3(25, 0, 20), Vec3(-25, 3, 20), Vec3(0, 25, 20), Vec3(7, -25, 20)}) {
    const auto lin =
        lightfield::linear_field(flat.cloud, flat.cam, lightfield::point_light(src), lightfield::surface_hash(flat.bvh->mesh()));
    const auto non = lightfield::nonlinear_field(*flat.bvh, flat.cloud, flat.normals, flat.cam, lightfield::point_light(src));
    for (std::size_t i = 0; i < non.size(); ++i) {
      if (non.pixel_status(i) != lightfield::PixelStatus::ok) return {false, fmt("planar pixel %zu not resolved", i)};
      planar = std::max(planar, std::atan2(non.dir(i).cross(lin.dir(i)).norm(), non.dir(i).dot(lin.dir(i))));
    }
  }

  const auto s = test::finger_scene(96, 72, 256);
  const Vec3 light(10, 0, 0);
  const auto field = lightfield::nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, lightfield::point_light(light));
  double off_wall = 0.0, tangent = 0.0;
  std::size_t checked = 0, wrong_way = 0;
  for (int v = 1; v + 1 < s.cam.height; ++v)
    for (int u = 1; u + 1 < s.cam.width; ++u) {
      bool wall = true;
      for (int dv = -1; dv <= 1; ++dv)
        for (int du = -1; du <= 1; ++du) wall = wall && s.cloud(u + du, v + dv).z() < test::kFingerLength;
      if (!wall) continue;
      const std::size_t i = s.cloud.at(u, v);
      if (field.pixel_status(i) != lightfield::PixelStatus::ok) return {false, fmt("wall pixel %d,%d not resolved", u, v)};
      const Vec3 t = s.cloud.points[i], n = test::cylinder_normal(t);
      const Vec3 d = light - t;
      const Vec3 expect = (d - d.dot(n) * n).normalized(); // tangent of the slice by the plane {n, d}
      const Vec3 got = field.dir(i);
      off_wall = std::max(off_wall, std::abs(got.dot(n)));
      tangent = std::max(tangent, std::min((got - expect).norm(), (got + expect).norm()));
      // facing the source the short way round runs along the chord
      if (t.x() > 5.0 && got.dot(expect) <= 0.0) ++wrong_way;
      ++checked;
    }
  const bool ok = planar < 1e-6 && off_wall < 1e-3 && tangent < 1e-3 && wrong_way == 0 && checked > 1000;
  return {ok, fmt("planar max angle %.2e rad (<1e-6); cylinder |dir.n| %.2e, distance to analytic tangent %.2e (<1e-3) "
                  "over %zu wall pixels, %zu pointing away on the lit side",
                  planar, off_wall, tangent, checked, wrong_way)};
}

// ----------------------------------------------------------------- render

Outcome phong() {
  render::RenderParams p;
  p.k_a = Vec3(0.9, 0.8, 0.7);
  p.k_d = Vec3(0.6, 0.5, 0.4);
  p.k_s = Vec3(0.3, 0.2, 0.1);
  p.alpha = 7.0;
  p.i_a = Vec3(0.1, 0.2, 0.3);

  const auto s = test::flat_scene(64, 48);
  const auto hash = lightfield::surface_hash(s.bvh->mesh());
  render::RenderParams amb = p;
  amb.k_d = amb.k_s = Vec3::Zero();
  const auto fields = lightfield::linear_fields(
      s.cloud, s.cam, {lightfield::point_light(Vec3(25, 0, 20)), lightfield::point_light(Vec3(0, 0, 5))}, hash);
  const auto ambient = render::shade(s.depth, s.normals, fields, amb, s.cam);
  bool exact = true;
  for (std::size_t i = 0; i < ambient.pixels(); ++i)
    for (int c = 0; c < 3; ++c) exact = exact && ambient(i, c) == amb.k_a[c] * amb.i_a[c];

  Rng rng(5);
  double unit = 0.0, dot = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const Vec3 l = random_unit(rng), n = random_unit(rng);
    const Vec3 r = render::reflect(l, n);
    unit = std::max(unit, std::abs(r.norm() - 1.0));
    dot = std::max(dot, std::abs(r.dot(n) - l.dot(n)));
  }

  const auto src = lightfield::point_light(Vec3(-6, 4, 12), Vec3(1.0, 0.6, 0.3), Vec3(0.8, 0.9, 1.0), Vec3(0.5, 0.4, 0.3));
  const auto img = render::shade(s.depth, s.normals, lightfield::linear_fields(s.cloud, s.cam, {src}, hash), p, s.cam);
  const auto k = s.cam.k();
  double pix = 0.0;
  for (int v = 0; v < s.cam.height; ++v)
    for (int u = 0; u < s.cam.width; ++u) {
      const Vec3 t = Vec3((u - k.cx) / k.fu, (v - k.cy) / k.fv, 1.0) * 20.0;
      const Vec3 n(0, 0, -1), l = (src.position - t).normalized(), view = (-t).normalized();
      const double ln = std::max(0.0, l.dot(n));
      const Vec3 r = 2.0 * l.dot(n) * n - l;
      const double spec = ln > 0.0 ? std::pow(std::max(0.0, r.dot(view)), p.alpha) : 0.0;
      for (int c = 0; c < 3; ++c) {
        const double ref =
            p.k_a[c] * p.i_a[c] + p.k_d[c] * ln * src.color[c] * src.i_d[c] + p.k_s[c] * spec * src.color[c] * src.i_s[c];
        pix = std::max(pix, std::abs(ref - img(s.depth.at(u, v), c)));
      }
    }
  const bool ok = exact && unit < 1e-12 && dot < 1e-12 && pix < 1e-6;
  return {ok, fmt("ambient-only %s; reflection |r|-1 %.1e, dot %.1e (<1e-12, 1e5 pairs); oracle max diff %.1e (<1e-6)",
                  exact ? "bit-exact" : "MISMATCH", unit, dot, pix)};
}

// ------------------------------------------------------------------ scene

scene::SceneConfig geltip_golden_config() {
  return scene::config_from_json(scene::Json::parse(R"({
    "name": "geltip-golden",
    "seed": 3,
    "sensor": {"kind": "geltip"},
    "camera": {"width": 160, "height": 120}
  })"));
}

/// Rest surface pushed in by a smooth dent centred on the dome, 1 mm deep.
std::pair<ParticleSet, Vec3List> dented(const scene::Scene& s) {
  const auto& c = s.config.sensor;
  const Vec3 centre(0, 0, c.length);
  const Vec3 contact = centre + Vec3(0.35, 0.0, 1.0).normalized() * c.radius;
  auto push = [&](const Vec3& x) {
    const double r2 = (x - contact).squaredNorm();
    return x - 1.0 * std::exp(-r2 / (2.0 * 2.0 * 2.0)) * (x - centre).normalized();
  };
  ParticleSet p = s.rest_surface;
  for (Vec3& x : p.positions)
    if (x.z() > c.length) x = push(x);
  Vec3List m = s.sensor.surface->vertices();
  for (Vec3& x : m)
    if (x.z() > c.length) x = push(x);
  return {p, m};
}

Outcome golden_image() {
  const scene::SceneConfig c = geltip_golden_config();
  std::vector<render::TactileImage> frames;
  const int threads[] = {0, 1, 3};
  const int hw = thread_count();
  for (int t : threads) {
    set_thread_count(t);
    const scene::Scene s = scene::prepare_scene(c);
    const auto [surface, mesh] = dented(s);
    frames.push_back(scene::render_frame(s.optics, surface, mesh).image);
  }
  set_thread_count(hw);
  bool same = true;
  for (const auto& f : frames) same = same && f == frames[0];
  if (g_freeze) {
    fs::create_directories(kGolden.parent_path());
    render::write_png(kGolden, frames[0]);
  }
  if (!fs::exists(kGolden)) return {false, "golden image " + kGolden.filename().string() + " missing"};
  const auto golden = render::read_png(kGolden);
  const double ssim = scene::metric_ssim(frames[0], golden);
  const bool ok = same && ssim == 1.0;
  return {ok, fmt("3 runs (threads 0/1/3) %s; SSIM vs frozen golden %.6f; %dx%d, %zu sources", same ? "bit-identical" : "DIFFER",
                  ssim, frames[0].width, frames[0].height, c.lights.size())};
}

scene::SceneConfig gelsight_collection_config() {
  return scene::config_from_json(scene::Json::parse(R"({
    "name": "gelsight-acceptance",
    "seed": 7,
    "sensor": {"kind": "gelsight"},
    "particle_spacing": 0.4,
    "camera": {"width": 160, "height": 120},
    "grid": {"dt": 2e-4},
    "trajectory": {"kind": "gelsight"}
  })"));
}

Outcome collection() {
  const scene::SceneConfig c = gelsight_collection_config();
  test::TempDir tmp("acceptance");
  const scene::Scene s = scene::prepare_scene(c);
  const std::size_t membrane = s.sensor.membrane.size();
  const auto t0 = std::chrono::steady_clock::now();
  scene::collect_dataset(s, tmp / "a");
  const double first = seconds_since(t0);
  const scene::Scene s2 = scene::prepare_scene(c);
  scene::collect_dataset(s2, tmp / "b");

  const auto table = scene::read_records(tmp / "a");
  std::size_t contact = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& kind = table.at(r, "kind");
    contact += kind == "normal" || kind == "shear";
  }
  const auto& t = c.trajectory;
  const std::size_t expect = t.grid.count() * t.grid.count() * t.depth.count();
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::recursive_directory_iterator(tmp / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = tmp / "b" / fs::relative(e.path(), tmp / "a");
    differ += !fs::exists(other) || test::read_bytes(e.path()) != test::read_bytes(other);
  }
  const bool ok = contact == 300 && contact == expect && differ == 0 && first < 600.0;
  return {ok, fmt("%zu contact frames (%zux%zu positions x %zu depths = %zu); %zu files, %zu differ; membrane %zu particles; "
                  "one run %.0f s (<600)",
                  contact, t.grid.count(), t.grid.count(), t.depth.count(), expect, files, differ, membrane, first)};
}

Outcome throughput() {
  // MPM: a 40K particle membrane with the indenter pressing
  scene::SceneConfig c = gelsight_collection_config();
  c.camera.width = 320;
  c.camera.height = 240;
  const scene::Scene s = scene::prepare_scene(c);
  const scene::Pose start = scene::approach_pose(
      s.sensor.indenter, scene::contact_points(c.trajectory, s.sensor.mount)[12], c.indenter.gap);
  mpm::World w = scene::detail::contact_world(s, start, {Vec3(0, 0, -2.0)});
  mpm::BoundarySpec b;
  b.fixed = {RegionTag::support};
  b.rigid = {{RegionTag::object, mpm::LinearMove{Vec3(0, 0, -1.5), c.simulation.indenter_speed}.schedule()}};
  w.set_boundaries(b);
  const std::size_t particles = w.particles().size();
  w.step();
  auto t0 = std::chrono::steady_clock::now();
  int steps = 0;
  while (seconds_since(t0) < 5.0 || steps < 20) {
    w.step();
    ++steps;
  }
  const double sps = steps / seconds_since(t0);

  // rendering at 320x240 of the pressed state
  const auto surface = w.extract_surface();
  const auto mesh = w.tracers();
  scene::render_frame(s.optics, surface, mesh);
  t0 = std::chrono::steady_clock::now();
  int frames = 0;
  while (seconds_since(t0) < 3.0 || frames < 5) {
    scene::render_frame(s.optics, surface, mesh);
    ++frames;
  }
  const double fps = frames / seconds_since(t0);
  const bool ok = sps >= 5.0 && fps >= 2.0 && particles >= 40000;
  return {ok, fmt("%.1f MPM steps/s at %zu particles (>=5); %.1f frames/s at 320x240 (>=2); %d threads", sps, particles, fps,
                  thread_count())};
}

struct Check {
  const char* name;
  double limit_s; // runtime budget
  std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = argv[++i];
    } else if (!std::strcmp(argv[i], "--freeze-golden")) {
      g_freeze = true;
    } else {
      std::fprintf(stderr, "usage: %s [--only NAME] [--freeze-golden]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Check> checks = {
      {"mpm_conservation", 30, mpm_conservation},
      {"stiffness_ordering", 120, stiffness_ordering},
      {"projection_round_trip", 5, projection_round_trip},
      {"occlusion_oracle", 10, occlusion_oracle},
      {"light_field", 30, light_field},
      {"phong", 10, phong},
      {"golden_image", 60, golden_image},
      {"collection", 1200, collection},
      {"throughput", 0, throughput},
  };
  int failed = 0, ran = 0;
  for (const Check& c : checks) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    const bool in_time = c.limit_s <= 0 || t < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string budget = c.limit_s > 0 ? fmt(" / %.0f s", c.limit_s) : std::string();
    std::printf("%s %s: %s [%.1f s%s%s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), t, budget.c_str(),
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no check named '%s'\n", only.c_str());
    return 2;
  }
  return failed ? 1 : 0;
}
