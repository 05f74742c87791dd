// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/png_io.hpp"
#include "tacsim/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tacsim::render {

/// Linear RGB, nominally in [0, 1], row-major, interleaved.
struct FloatImage {
  int width = 0, height = 0;
  std::vector<double> rgb;

  FloatImage() = default;
  FloatImage(int w, int h, double fill = 0.0)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  double& operator()(std::size_t pixel, int c) { return rgb[3 * pixel + c]; }
  double operator()(std::size_t pixel, int c) const { return rgb[3 * pixel + c]; }
};

/// 8-bit RGB tactile image.
struct TactileImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;

  TactileImage() = default;
  TactileImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  std::uint8_t& operator()(std::size_t pixel, int c) { return rgb[3 * pixel + c]; }
  std::uint8_t operator()(std::size_t pixel, int c) const { return rgb[3 * pixel + c]; }
  bool operator==(const TactileImage&) const = default;
};

/// Clamp to [0, 1], then round half to even onto 0..255.
inline std::uint8_t quantize(double x) {
  const double c = std::clamp(std::isnan(x) ? 0.0 : x, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::nearbyint(255.0 * c));
}

inline TactileImage quantize(const FloatImage& f) {
  TactileImage out(f.width, f.height);
  for (std::size_t i = 0; i < f.rgb.size(); ++i) out.rgb[i] = quantize(f.rgb[i]);
  return out;
}

inline FloatImage to_float(const TactileImage& t) {
  FloatImage f(t.width, t.height);
  for (std::size_t i = 0; i < t.rgb.size(); ++i) f.rgb[i] = t.rgb[i] / 255.0;
  return f;
}

inline void write_png(const std::filesystem::path& path, const TactileImage& img) {
  png::write_rgb8(path, img.width, img.height, img.rgb);
}

/// Reads an 8-bit PNG; gray images are expanded to RGB.
inline TactileImage read_png(const std::filesystem::path& path) {
  const png::Raster r = png::read(path);
  if (r.bit_depth != 8) throw FormatError("'" + path.string() + "': expected an 8-bit PNG");
  TactileImage img(r.width, r.height);
  for (std::size_t p = 0; p < img.pixels(); ++p) {
    for (int c = 0; c < 3; ++c) {
      img(p, c) = static_cast<std::uint8_t>(r.channels == 3 ? r.samples[3 * p + c] : r.samples[p]);
    }
  }
  return img;
}

} // namespace tacsim::render
