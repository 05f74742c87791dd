// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "support/test_util.hpp"
#include "tacsim/core/arrays.hpp"
#include "tacsim/core/container.hpp"
#include "tacsim/core/hash.hpp"
#include "tacsim/core/png_io.hpp"
#include "tacsim/core/random.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace tacsim;

TEST(Container, RoundTripPreservesEveryArray) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Container c;
    std::vector<double> a(rng.below(50) + 1);
    for (double& x : a) x = rng.uniform(-1e6, 1e6);
    std::vector<std::int32_t> b(rng.below(30) + 1);
    for (auto& x : b) x = static_cast<std::int32_t>(rng.next());
    std::vector<std::uint8_t> tags(7, 4);
    c.add<double>("a", {a.size()}, a);
    c.add<std::int32_t>("b", {1, b.size()}, b);
    c.add<std::uint8_t>("tag", {7}, tags);
    c.add_scalar<std::uint64_t>("hash", rng.next());
    const auto bytes = c.to_bytes();
    const Container d = Container::from_bytes(bytes);
    EXPECT_EQ(d.get<double>("a"), a);
    EXPECT_EQ(d.get<std::int32_t>("b"), b);
    EXPECT_EQ(d.shape("b"), (std::vector<std::uint64_t>{1, b.size()}));
    EXPECT_EQ(d.get<std::uint8_t>("tag"), tags);
    EXPECT_EQ(d.to_bytes(), bytes);
  }
}

TEST(Container, HeaderLayoutIsExact) {
  Container c;
  const std::vector<float> v{1.0f, 2.0f};
  c.add<float>("xy", {2}, v);
  const auto bytes = c.to_bytes();
  // "STAC1" + u32 count + (u16 len + "xy" + dtype + ndim + u64 dim) + 8 payload bytes
  ASSERT_EQ(bytes.size(), 5u + 4 + 2 + 2 + 1 + 1 + 8 + 8);
  EXPECT_EQ(std::memcmp(bytes.data(), "STAC1", 5), 0);
  EXPECT_EQ(static_cast<int>(bytes[5]), 1);
  EXPECT_EQ(static_cast<int>(bytes[13]), static_cast<int>(DType::f32));
  EXPECT_EQ(static_cast<int>(bytes[14]), 1);
}

TEST(Container, RejectsCorruptInput) {
  Container c;
  c.add_scalar<double>("x", 1.0);
  auto bytes = c.to_bytes();
  auto bad = bytes;
  bad[0] = std::byte{'X'};
  EXPECT_THROW(Container::from_bytes(bad), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(Container::from_bytes(truncated), FormatError);
  EXPECT_THROW(c.get<float>("x"), FormatError);
  EXPECT_THROW(c.get<double>("missing"), FormatError);
}

TEST(Container, Vec3Helpers) {
  Container c;
  Vec3List v{{1, 2, 3}, {-4, 5.5, 6}};
  add_vec3(c, "x", v);
  const auto w = get_vec3(Container::from_bytes(c.to_bytes()), "x");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[1], v[1]);
}

TEST(Hash, Fnv1aReferenceValues) {
  // Published FNV-1a 64 test vectors.
  const char a[] = "a";
  EXPECT_EQ(fnv1a64(std::as_bytes(std::span<const char>(a, 1))), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64({}), 0xcbf29ce484222325ULL);
  const char foobar[] = "foobar";
  EXPECT_EQ(fnv1a64(std::as_bytes(std::span<const char>(foobar, 6))), 0x85944171f73967e8ULL);
}

TEST(Png, Rgb8AndGray16RoundTrip) {
  test::TempDir dir("png");
  std::vector<std::uint8_t> rgb(5 * 3 * 3);
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<std::uint8_t>(i * 7);
  png::write_rgb8(dir / "a.png", 5, 3, rgb);
  const auto r = png::read(dir / "a.png");
  ASSERT_EQ(r.width, 5);
  ASSERT_EQ(r.channels, 3);
  for (std::size_t i = 0; i < rgb.size(); ++i) EXPECT_EQ(r.samples[i], rgb[i]);

  std::vector<std::uint16_t> g{0, 1, 255, 256, 65535, 12345};
  png::write_gray16(dir / "g.png", 3, 2, g);
  const auto q = png::read(dir / "g.png");
  ASSERT_EQ(q.bit_depth, 16);
  EXPECT_EQ(q.samples, g);
  test::write_text(dir / "bad.png", "not a png");
  EXPECT_THROW(png::read(dir / "bad.png"), FormatError);
}
