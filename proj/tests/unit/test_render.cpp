// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "support/field_scenes.hpp"
#include "support/test_util.hpp"
#include "tacsim/core/random.hpp"
#include "tacsim/render/compose.hpp"
#include "tacsim/render/markers.hpp"
#include "tacsim/render/phong.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tacsim;
using namespace tacsim::render;

namespace {

Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

RenderParams test_params() {
  RenderParams p;
  p.k_a = Vec3(0.9, 0.8, 0.7);
  p.k_d = Vec3(0.6, 0.5, 0.4);
  p.k_s = Vec3(0.3, 0.2, 0.1);
  p.alpha = 7.0;
  p.i_a = Vec3(0.1, 0.2, 0.3);
  return p;
}

std::vector<lightfield::LightField> flat_fields(const test::FieldScene& s, const std::vector<lightfield::LightSource>& src) {
  return lightfield::linear_fields(s.cloud, s.cam, src, lightfield::surface_hash(s.bvh->mesh()));
}

} // namespace

// ---------------------------------------------------------------------- phong

TEST(Phong, AmbientOnlyIsBitExact) {
  const auto s = test::flat_scene(32, 24);
  const auto fields = flat_fields(s, {lightfield::point_light(Vec3(25, 0, 20)), lightfield::point_light(Vec3(0, 0, 5))});
  RenderParams p = test_params();
  p.k_d = p.k_s = Vec3::Zero();
  const FloatImage img = shade(s.depth, s.normals, fields, p, s.cam);
  for (std::size_t i = 0; i < img.pixels(); ++i)
    for (int c = 0; c < 3; ++c) ASSERT_EQ(img(i, c), p.k_a[c] * p.i_a[c]);

  FloatImage amb(32, 24);
  Rng rng(3);
  for (auto& x : amb.rgb) x = rng.uniform();
  const FloatImage img2 = shade(s.depth, s.normals, fields, p, s.cam, &amb);
  for (std::size_t i = 0; i < img2.pixels(); ++i)
    for (int c = 0; c < 3; ++c) ASSERT_EQ(img2(i, c), p.k_a[c] * amb(i, c));
}

TEST(Phong, NormalIncidenceReflectsToNormal) {
  const Vec3 n = Vec3(1, 2, -2).normalized();
  EXPECT_TRUE(reflect(n, n).isApprox(n, 1e-15));
}

TEST(Phong, ReflectionInvariantsOnRandomPairs) {
  Rng rng(5);
  double worst_norm = 0.0, worst_dot = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const Vec3 l = random_unit(rng), n = random_unit(rng);
    const Vec3 r = reflect(l, n);
    worst_norm = std::max(worst_norm, std::abs(r.norm() - 1.0));
    worst_dot = std::max(worst_dot, std::abs(r.dot(n) - l.dot(n)));
  }
  EXPECT_LT(worst_norm, 1e-12);
  EXPECT_LT(worst_dot, 1e-12);
}

TEST(Phong, MatchesScalarOracleOnPlane) {
  const auto s = test::flat_scene(64, 48);
  const lightfield::LightSource src =
      lightfield::point_light(Vec3(-6, 4, 12), Vec3(1.0, 0.6, 0.3), Vec3(0.8, 0.9, 1.0), Vec3(0.5, 0.4, 0.3));
  const auto fields = flat_fields(s, {src});
  const RenderParams p = test_params();
  const FloatImage img = shade(s.depth, s.normals, fields, p, s.cam);
  const auto k = s.cam.k();
  double worst = 0.0;
  for (int v = 0; v < 48; ++v)
    for (int u = 0; u < 64; ++u) {
      // independent evaluation: ray/plane hit, analytic normal
      const Vec3 ray((u - k.cx) / k.fu, (v - k.cy) / k.fv, 1.0);
      const Vec3 t = ray * 20.0;
      const Vec3 n(0, 0, -1);
      const Vec3 l = (src.position - t).normalized();
      const Vec3 view = (-t).normalized();
      const double ln = std::max(0.0, l.dot(n));
      const Vec3 r = 2.0 * l.dot(n) * n - l;
      const double spec = ln > 0.0 ? std::pow(std::max(0.0, r.dot(view)), p.alpha) : 0.0;
      for (int c = 0; c < 3; ++c) {
        const double ref = p.k_a[c] * p.i_a[c] + p.k_d[c] * ln * src.color[c] * src.i_d[c] +
                           p.k_s[c] * spec * src.color[c] * src.i_s[c];
        worst = std::max(worst, std::abs(ref - img(s.depth.at(u, v), c)));
      }
    }
  EXPECT_LT(worst, 1e-6);
}

TEST(Phong, BackLitSurfaceGetsNoDirectLight) {
  const auto s = test::flat_scene(16, 12);
  // source behind the sheet (farther from the camera than z = 20)
  const auto fields = flat_fields(s, {lightfield::point_light(Vec3(0, 0, 40))});
  const RenderParams p = test_params();
  const FloatImage img = shade(s.depth, s.normals, fields, p, s.cam);
  for (std::size_t i = 0; i < img.pixels(); ++i) ASSERT_EQ(img(i, 0), p.k_a[0] * p.i_a[0]);
}

TEST(Phong, DiffuseIntensityIsMonotone) {
  const auto s = test::finger_scene(40, 30, 64);
  const auto hash = lightfield::surface_hash(s.bvh->mesh());
  lightfield::LightSource a = lightfield::point_light(Vec3(8, 0, 2), Vec3(1, 0.5, 0.2));
  lightfield::LightSource b = lightfield::point_light(Vec3(-8, 3, 2), Vec3(0.2, 0.5, 1));
  const RenderParams p = test_params();
  const FloatImage base = shade(s.depth, s.normals, lightfield::linear_fields(s.cloud, s.cam, {a, b}, hash), p, s.cam);
  a.i_d *= 1.5;
  const FloatImage more = shade(s.depth, s.normals, lightfield::linear_fields(s.cloud, s.cam, {a, b}, hash), p, s.cam);
  for (std::size_t i = 0; i < base.rgb.size(); ++i) ASSERT_GE(more.rgb[i], base.rgb[i]);
}

TEST(Phong, RasterMismatchAndBadParams) {
  const auto s = test::flat_scene(16, 12);
  const auto other = test::flat_scene(8, 6);
  const auto fields = flat_fields(other, {lightfield::point_light(Vec3(25, 0, 20))});
  EXPECT_THROW(shade(s.depth, s.normals, fields, test_params(), s.cam), ValidationError);
  EXPECT_THROW(shade(s.depth, other.normals, {}, test_params(), s.cam), ValidationError);
  RenderParams bad = test_params();
  bad.alpha = 0.0;
  EXPECT_THROW(shade(s.depth, s.normals, {}, bad, s.cam), ValidationError);
  bad = test_params();
  bad.k_d[1] = 1.5;
  EXPECT_THROW(shade(s.depth, s.normals, {}, bad, s.cam), ValidationError);
  imaging::DepthMap holey = s.depth;
  holey.z[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(shade(holey, s.normals, {}, test_params(), s.cam), ValidationError);
}

// ----------------------------------------------------------------- background

TEST(RenderBackground, NoSourcesGivesUniformGray) {
  const auto s = test::flat_scene(16, 12);
  RenderParams p;
  p.k_a = Vec3::Ones();
  p.i_a = Vec3::Constant(0.5);
  const TactileImage img = render_background(s.depth, s.normals, {}, p, s.cam);
  for (auto b : img.rgb) ASSERT_EQ(b, 128); // 127.5 rounds half to even
}

TEST(RenderBackground, DeterministicAcrossRunsAndThreads) {
  const auto s = test::finger_scene(48, 36, 64);
  const auto hash = lightfield::surface_hash(s.bvh->mesh());
  std::vector<lightfield::LightSource> src;
  const Vec3 colors[4] = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)};
  for (int m = 0; m < 4; ++m) {
    const double th = m * std::numbers::pi / 2;
    src.push_back(lightfield::point_light(Vec3(9 * std::cos(th), 9 * std::sin(th), 1), colors[m]));
  }
  const auto fields = lightfield::linear_fields(s.cloud, s.cam, src, hash);
  set_thread_count(1);
  const TactileImage a = render_background(s.depth, s.normals, fields, test_params(), s.cam, hash);
  set_thread_count(3);
  const TactileImage b = render_background(s.depth, s.normals, fields, test_params(), s.cam, hash);
  set_thread_count(1);
  EXPECT_EQ(a, b);
  EXPECT_THROW(render_background(s.depth, s.normals, fields, test_params(), s.cam, hash + 1), ValidationError);
}

TEST(Quantize, ClampAndRound) {
  EXPECT_EQ(quantize(-1.0), 0);
  EXPECT_EQ(quantize(2.0), 255);
  EXPECT_EQ(quantize(1.0), 255);
  EXPECT_EQ(quantize(0.5), 128);
  EXPECT_EQ(quantize(0.0), 0);
  EXPECT_EQ(quantize(std::nan("")), 0);
  EXPECT_EQ(quantize(0.5 / 255.0), 0);  // half to even
  EXPECT_EQ(quantize(1.5 / 255.0), 2);
}

TEST(TactileImagePng, RoundTrip) {
  test::TempDir dir("png");
  TactileImage img(7, 5);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = static_cast<std::uint8_t>(i * 37);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_png(dir / "a.png"), img);
}

// -------------------------------------------------------------------- compose

TEST(Compose, EmptyAndFullMask) {
  TactileImage bg(10, 8);
  for (std::size_t i = 0; i < bg.rgb.size(); ++i) bg.rgb[i] = static_cast<std::uint8_t>(i % 251);
  FloatImage fg(10, 8);
  Rng rng(9);
  for (auto& x : fg.rgb) x = rng.uniform(-0.2, 1.2);
  EXPECT_EQ(compose(bg, fg, std::vector<char>(80, 0)), bg);
  EXPECT_EQ(compose(bg, fg, std::vector<char>(80, 1)), quantize(fg));
}

TEST(Compose, HalfFrameBlendBand) {
  const int w = 20, h = 4;
  TactileImage bg(w, h, 0);
  FloatImage fg(w, h, 1.0);
  std::vector<char> mask(w * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 10; x < w; ++x) mask[y * w + x] = 1;
  const TactileImage out = compose(bg, fg, mask);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t got = out(y * w + x, 0);
      if (x >= 10) ASSERT_EQ(got, 255);
      else if (x < 7) ASSERT_EQ(got, 0);
      else ASSERT_EQ(got, quantize(1.0 - (10 - x) / 4.0)) << x;
    }
  }
}

TEST(Compose, EveryPixelFromOneBranchOrBand) {
  const int w = 30, h = 20;
  Rng rng(4);
  std::vector<char> mask(w * h, 0);
  for (int k = 0; k < 15; ++k) mask[rng.below(w * h)] = 1;
  const auto wt = blend_weights(mask, w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      if (mask[i]) {
        ASSERT_EQ(wt[i], 1.0);
        continue;
      }
      double dmin = 1e9;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx)
          if (mask[yy * w + xx]) dmin = std::min(dmin, std::hypot(xx - x, yy - y));
      if (dmin > 3.0) ASSERT_EQ(wt[i], 0.0);
      else ASSERT_NEAR(wt[i], 1.0 - dmin / 4.0, 1e-15);
    }
}

TEST(Compose, DimensionMismatch) {
  EXPECT_THROW(compose(TactileImage(4, 4), FloatImage(4, 3), std::vector<char>(16, 0)), ValidationError);
  EXPECT_THROW(compose(TactileImage(4, 4), FloatImage(4, 4), std::vector<char>(15, 0)), ValidationError);
}

TEST(ContactMask, Threshold) {
  imaging::DepthMap a(3, 1), b(3, 1);
  a.z = {10, 10, 10};
  b.z = {10.01, 10.03, 9.9};
  EXPECT_EQ(contact_mask(a, b), (std::vector<char>{0, 1, 1}));
}

// -------------------------------------------------------------------- markers

TEST(Markers, UndeformedArrowsAreZero) {
  const auto s = test::flat_scene(64, 48);
  ParticleSet surf;
  for (int k = 0; k < 50; ++k) surf.push_back(Vec3(-8 + 0.33 * k, 0.1 * k - 2, 20), k, RegionTag::membrane_surface);
  const MarkerSet m = make_marker_grid(surf, 2.0, s.cam);
  ASSERT_GT(m.size(), 3u);
  const MarkerSet t = track_markers(m, surf, s.cam);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(t.arrow(k), Vec2::Zero());
}

TEST(Markers, RigidShiftGivesSixteenPixels) {
  const imaging::Camera cam = test::origin_camera(640, 480); // f_u = 320
  ParticleSet surf, moved;
  for (int k = 0; k < 9; ++k) {
    const Vec3 p(-2 + 0.5 * k, 0.25 * k - 1, 10);
    surf.push_back(p, 100 + k, RegionTag::membrane_surface);
    moved.push_back(p + Vec3(0.5, 0, 0), 100 + k, RegionTag::membrane_surface);
  }
  const MarkerSet m = make_markers(surf, {100, 104, 108}, cam);
  const MarkerSet t = track_markers(m, moved, cam);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_NEAR(t.arrow(k).x(), 16.0, 1e-9);
    EXPECT_NEAR(t.arrow(k).y(), 0.0, 1e-9);
  }
  ParticleSet partial;
  partial.push_back(Vec3(0, 0, 10), 100, RegionTag::membrane_surface);
  EXPECT_THROW(track_markers(m, partial, cam), ValidationError);
  EXPECT_THROW(make_markers(surf, {7}, cam), ValidationError);
}

TEST(Markers, OverlayDotsAndClipping) {
  TactileImage img(9, 9, 200);
  MarkerSet m;
  m.indices = {1, 2};
  m.initial = m.displaced = {Vec3::Zero(), Vec3::Zero()};
  m.uv0 = {Vec2(4, 4), Vec2(40, 4)};
  m.uv1 = m.uv0;
  MarkerStyle style;
  style.draw_arrows = false;
  const TactileImage out = overlay_markers(img, m, style);
  int dark = 0;
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) {
      const bool in = std::abs(x - 4) <= 1 && std::abs(y - 4) <= 1;
      EXPECT_EQ(out(y * 9 + x, 0), in ? 0 : 200);
      dark += in;
    }
  EXPECT_EQ(dark, 9);
  EXPECT_EQ(overlay_markers(img, MarkerSet{}), img);
}

TEST(Markers, ArrowDrawnAlongDisplacement) {
  TactileImage img(20, 5, 0);
  MarkerSet m;
  m.indices = {1};
  m.initial = m.displaced = {Vec3::Zero()};
  m.uv0 = {Vec2(2, 2)};
  m.uv1 = {Vec2(12, 2)};
  const TactileImage out = overlay_markers(img, m);
  for (int x = 3; x <= 10; ++x) EXPECT_EQ(out(2 * 20 + x, 0), 255) << x;
  EXPECT_EQ(out(2 * 20 + 12, 0), 0); // dot on top of the tip
}

TEST(Markers, TableInContainer) {
  MarkerSet m;
  m.indices = {5, 9};
  m.uv0 = {Vec2(1, 2), Vec2(3, 4)};
  m.uv1 = {Vec2(1.5, 2), Vec2(3, 4.5)};
  Container c;
  add_markers(c, "markers.", m);
  const Container back = Container::from_bytes(c.to_bytes());
  EXPECT_EQ(back.get<std::int64_t>("markers.index"), m.indices);
  EXPECT_EQ(back.get<double>("markers.uv1"), (std::vector<double>{1.5, 2, 3, 4.5}));
}
