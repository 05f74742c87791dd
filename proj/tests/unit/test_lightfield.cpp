// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "support/field_scenes.hpp"
#include "support/test_util.hpp"
#include "tacsim/core/random.hpp"
#include "tacsim/lightfield/field.hpp"
#include "tacsim/lightfield/source.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>

using namespace tacsim;
using namespace tacsim::lightfield;

namespace {

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

LightSource line_light(const Vec3& a, const Vec3& b, int n) {
  LightSource s;
  s.kind = SourceKind::line;
  s.a = a;
  s.b = b;
  s.samples = n;
  return s;
}

} // namespace

// ----------------------------------------------------------------- discretize

TEST(DiscretizeSource, LineIncludesEndpoints) {
  const auto pts = discretize_source(line_light(Vec3::Zero(), Vec3(1, 0, 0), 3), 3);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].position, Vec3(0, 0, 0));
  EXPECT_EQ(pts[1].position, Vec3(0.5, 0, 0));
  EXPECT_EQ(pts[2].position, Vec3(1, 0, 0));
  for (const auto& p : pts) EXPECT_EQ(p.kind, SourceKind::point);
}

TEST(DiscretizeSource, PointUnchanged) {
  const LightSource s = point_light(Vec3(1, 2, 3), Vec3(0.2, 0.4, 0.6), Vec3(2, 2, 2), Vec3(1, 1, 1));
  const auto pts = discretize_source(s, 7);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].position, s.position);
  EXPECT_EQ(pts[0].i_d, s.i_d);
  EXPECT_EQ(pts[0].color, s.color);
}

TEST(DiscretizeSource, AreaQuadrantsUniform) {
  LightSource s;
  s.kind = SourceKind::area;
  s.corners = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  s.samples = 10000;
  const auto pts = discretize_source(s, 10000);
  ASSERT_EQ(pts.size(), 10000u);
  int q[4] = {0, 0, 0, 0};
  for (const auto& p : pts) {
    ASSERT_GE(p.position.x(), 0.0);
    ASSERT_LE(p.position.x(), 1.0);
    ASSERT_GE(p.position.y(), 0.0);
    ASSERT_LE(p.position.y(), 1.0);
    q[(p.position.x() >= 0.5) + 2 * (p.position.y() >= 0.5)]++;
  }
  const double sigma = std::sqrt(10000 * 0.25 * 0.75);
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(q[k] - 2500), 3 * sigma) << k;
}

TEST(DiscretizeSource, TriangleSamplesInside) {
  LightSource s;
  s.kind = SourceKind::area;
  s.corners = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)};
  s.samples = 4000;
  const auto pts = discretize_source(s, 4000);
  int lower = 0;
  for (const auto& p : pts) {
    ASSERT_GE(p.position.x(), -1e-12);
    ASSERT_GE(p.position.y(), -1e-12);
    ASSERT_LE(p.position.x() + p.position.y(), 2.0 + 1e-12);
    lower += p.position.x() + p.position.y() < std::sqrt(2.0);
  }
  // the inner similar triangle has half the area
  EXPECT_LT(std::abs(lower - 2000), 3 * std::sqrt(4000 * 0.25));
}

TEST(DiscretizeSource, IntensitySumsExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(200));
    LightSource s = line_light(Vec3::Zero(), Vec3(rng.uniform(), 1, 0), n);
    s.i_d = Vec3(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3));
    s.i_s = Vec3(rng.uniform(0, 3), 0.1, 1.0 / 3.0);
    const auto pts = discretize_source(s, n);
    ASSERT_EQ(pts.size(), static_cast<std::size_t>(n));
    for (int c = 0; c < 3; ++c) {
      double sd = 0.0, ss = 0.0;
      for (const auto& p : pts) {
        sd += p.i_d[c];
        ss += p.i_s[c];
      }
      ASSERT_EQ(sd, s.i_d[c]) << "n=" << n;
      ASSERT_EQ(ss, s.i_s[c]) << "n=" << n;
    }
  }
}

TEST(DiscretizeSource, Errors) {
  EXPECT_THROW(discretize_source(line_light(Vec3::Zero(), Vec3::UnitX(), 3), 0), ValidationError);
  LightSource bad = point_light(Vec3::Zero(), Vec3(1.5, 0, 0));
  EXPECT_THROW(discretize_source(bad, 1), ValidationError);
  LightSource area;
  area.kind = SourceKind::area;
  area.corners = {Vec3::Zero(), Vec3::UnitX()};
  EXPECT_THROW(discretize_source(area, 4), ValidationError);
}

// --------------------------------------------------------------- linear field

TEST(LinearField, Examples) {
  imaging::PointCloud pc;
  pc.width = 2;
  pc.height = 1;
  pc.points = {Vec3(0, 0, 10), Vec3(3, 4, 0)};
  pc.valid = {1, 1};
  const imaging::Camera cam = test::origin_camera(2, 1);
  const LightField f = linear_field(pc, cam, point_light(Vec3::Zero()), 0);
  EXPECT_TRUE(f.dir(0).isApprox(Vec3(0, 0, -1), 1e-7));
  EXPECT_TRUE(f.dir(1).isApprox(Vec3(-0.6, -0.8, 0), 1e-7));
  EXPECT_EQ(f.pixel_status(0), PixelStatus::ok);

  pc.points[1] = Vec3::Zero();
  const LightField g = linear_field(pc, cam, point_light(Vec3::Zero()), 0);
  EXPECT_EQ(g.pixel_status(1), PixelStatus::invalid);
  EXPECT_NEAR(g.dir(1).norm(), 1.0, 1e-7);
}

TEST(LinearField, MirrorSymmetricOverPlane) {
  const auto s = test::flat_scene(40, 40);
  const LightField f = linear_field(s.cloud, s.cam, point_light(Vec3(0, 0, 5)), 0);
  for (int v = 0; v < 40; ++v)
    for (int u = 1; u < 40; ++u) {
      // pixel u mirrors 40 - u about the centre column u = 20
      const Vec3 a = f.dir(s.cloud.at(u, v)), b = f.dir(s.cloud.at(40 - u, v));
      ASSERT_NEAR(a.x(), -b.x(), 1e-6);
      ASSERT_NEAR(a.y(), b.y(), 1e-6);
      ASSERT_NEAR(a.z(), b.z(), 1e-6);
    }
}

TEST(LinearField, UnitLengthAndDeterministic) {
  const auto s = test::finger_scene(48, 36, 64);
  const LightSource src = point_light(Vec3(9, 0, 0));
  const LightField a = linear_field(s.cloud, s.cam, src, 7);
  const LightField b = linear_field(s.cloud, s.cam, src, 7);
  EXPECT_EQ(a.dirs, b.dirs);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.dir(i).norm(), 1.0, 1e-6);
}

// ------------------------------------------------------------ nonlinear field

TEST(NonlinearField, PlanarReductionMatchesLinear) {
  const auto s = test::flat_scene(80, 60);
  const Vec3 sources[] = {Vec3(25, 0, 20), Vec3(-25, 3, 20), Vec3(0, 25, 20), Vec3(7, -25, 20)};
  for (const Vec3& p : sources) {
    const LightField lin = linear_field(s.cloud, s.cam, point_light(p), surface_hash(s.bvh->mesh()));
    const LightField non = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, point_light(p));
    EXPECT_EQ(non.kind, FieldKind::nonlinear);
    EXPECT_EQ(lin.surface_hash, non.surface_hash);
    double worst = 0.0;
    for (std::size_t i = 0; i < non.size(); ++i) {
      ASSERT_EQ(non.pixel_status(i), PixelStatus::ok) << i;
      worst = std::max(worst, angle_between(non.dir(i), lin.dir(i)));
    }
    EXPECT_LT(worst, 1e-6) << p.transpose();
  }
}

TEST(NonlinearField, CylinderTangentsFollowWall) {
  const auto s = test::finger_scene(96, 72, 256);
  const LightSource src = point_light(Vec3(10, 0, 0));
  const LightField f = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, src);
  double worst_normal = 0.0, worst_plane = 0.0;
  int checked = 0;
  for (int v = 1; v + 1 < s.cam.height; ++v)
    for (int u = 1; u + 1 < s.cam.width; ++u) {
      const std::size_t i = s.cloud.at(u, v);
      const Vec3 t = s.cloud.points[i];
      // wall only, with the whole Sobel stencil off the dome
      bool wall = true;
      for (int dv = -1; dv <= 1; ++dv)
        for (int du = -1; du <= 1; ++du) wall = wall && s.cloud(u + du, v + dv).z() < test::kFingerLength;
      if (!wall) continue;
      ASSERT_EQ(f.pixel_status(i), PixelStatus::ok) << u << "," << v;
      const Vec3 n = test::cylinder_normal(t);
      worst_normal = std::max(worst_normal, std::abs(f.dir(i).dot(n)));

      const Vec3 nn = s.normals.n[i];
      const Vec3 pn = nn.cross(src.position - t);
      const auto slices = geometry::plane_mesh_intersection(*s.bvh, geometry::Plane(t, pn));
      const PathDirection pd = path_direction(slices, t, nn, src.position);
      ASSERT_EQ(pd.status, PixelStatus::ok);
      worst_plane = std::max(worst_plane, std::abs(pd.dir.dot(pd.plane_normal)));
      ASSERT_NEAR(pd.dir.norm(), 1.0, 1e-12);
      ++checked;
    }
  EXPECT_GT(checked, 2000);
  EXPECT_LT(worst_normal, 1e-3);
  EXPECT_LT(worst_plane, 1e-9);
}

TEST(NonlinearField, CylinderDirectionsHeadTowardSource) {
  const auto s = test::finger_scene(48, 36, 128);
  const LightSource src = point_light(Vec3(10, 0, 0));
  const LightField f = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, src);
  int checked = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 t = s.cloud.points[i];
    if (t.z() >= test::kFingerLength || t.x() < 9.0) continue;
    // on the wall facing a base source the path runs straight down
    ASSERT_LT(f.dir(i).z(), 0.0) << i;
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(NonlinearField, ParallelNormalFallsBackToLinear) {
  const auto s = test::flat_scene(40, 40);
  // source straight above the centre pixel along its normal
  const std::size_t c = s.cloud.at(20, 20);
  const Vec3 t = s.cloud.points[c];
  ASSERT_NEAR(t.x(), 0.0, 1e-12);
  const LightSource src = point_light(t + 4.0 * s.normals.n[c]);
  const LightField non = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, src);
  const LightField lin = linear_field(s.cloud, s.cam, src, 0);
  EXPECT_EQ(non.pixel_status(c), PixelStatus::fallback);
  EXPECT_EQ(non.dir(c), lin.dir(c));
}

TEST(NonlinearField, PointOffMembraneIsInvalid) {
  auto s = test::flat_scene(20, 20);
  s.cloud.points[s.cloud.at(5, 5)].z() += 5.0;
  const LightField f = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, point_light(Vec3(25, 0, 20)));
  EXPECT_EQ(f.pixel_status(s.cloud.at(5, 5)), PixelStatus::invalid);
  EXPECT_NEAR(f.dir(s.cloud.at(5, 5)).norm(), 1.0, 1e-6);
  EXPECT_EQ(f.pixel_status(s.cloud.at(6, 5)), PixelStatus::ok);
}

TEST(NonlinearField, DeterministicAcrossThreadCounts) {
  const auto s = test::finger_scene(40, 30, 96);
  const LightSource src = point_light(Vec3(0, 10, 0));
  set_thread_count(1);
  const LightField a = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, src);
  set_thread_count(4);
  const LightField b = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, src);
  set_thread_count(1);
  EXPECT_EQ(0, std::memcmp(a.dirs.data(), b.dirs.data(), a.dirs.size() * sizeof(float)));
  EXPECT_EQ(a.status, b.status);
}

TEST(NonlinearField, RejectsExtendedSource) {
  const auto s = test::flat_scene(8, 8);
  EXPECT_THROW(nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam, line_light(Vec3::Zero(), Vec3::UnitX(), 2)),
               ValidationError);
}

// ---------------------------------------------------------------------- files

TEST(FieldIo, RoundTripAndHashCheck) {
  test::TempDir dir("field");
  const auto s = test::finger_scene(32, 24, 64);
  const LightField f = nonlinear_field(*s.bvh, s.cloud, s.normals, s.cam,
                                       point_light(Vec3(10, 0, 0), Vec3(1, 0.5, 0.25), Vec3(2, 2, 2), Vec3(0.5, 0.5, 0.5)));
  save_field(dir / "f.stac", f);
  const LightField g = load_field(dir / "f.stac", f.surface_hash);
  EXPECT_EQ(0, std::memcmp(f.dirs.data(), g.dirs.data(), f.dirs.size() * sizeof(float)));
  EXPECT_EQ(f.status, g.status);
  EXPECT_EQ(g.kind, FieldKind::nonlinear);
  EXPECT_EQ(g.source.position, f.source.position);
  EXPECT_EQ(g.source.color, f.source.color);
  EXPECT_EQ(g.source.i_d, f.source.i_d);
  EXPECT_EQ(g.surface_hash, surface_hash(s.bvh->mesh()));

  const auto other = test::finger_scene(32, 24, 65);
  const std::uint64_t other_hash = surface_hash(other.bvh->mesh());
  EXPECT_NE(other_hash, f.surface_hash);
  EXPECT_THROW(load_field(dir / "f.stac", other_hash), ValidationError);
  EXPECT_NO_THROW(load_field(dir / "f.stac", other_hash, true));

  std::string bytes = test::read_bytes(dir / "f.stac");
  bytes[0] = 'X';
  test::write_text(dir / "bad.stac", bytes);
  EXPECT_THROW(load_field(dir / "bad.stac"), FormatError);
}

TEST(FieldIo, MultipleFieldsInOneFile) {
  test::TempDir dir("fields");
  const auto s = test::flat_scene(16, 12);
  const auto fields = linear_fields(s.cloud, s.cam, {line_light(Vec3(-5, 0, 0), Vec3(5, 0, 0), 4)}, 99);
  ASSERT_EQ(fields.size(), 4u);
  save_fields(dir / "all.stac", fields);
  const auto back = load_fields(dir / "all.stac", 99);
  ASSERT_EQ(back.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(back[k].dirs, fields[k].dirs);
  EXPECT_THROW(load_field(dir / "all.stac"), FormatError);
}
