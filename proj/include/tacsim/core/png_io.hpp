// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace tacsim::png {

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0; // 1 (gray) or 3 (RGB)
  int bit_depth = 8;
  std::vector<std::uint16_t> samples; // row-major, interleaved channels
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void write_impl(const std::filesystem::path& path, int width, int height, int channels, int bit_depth,
                       std::span<const std::uint16_t> samples) {
  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: cannot allocate writer");
  }
  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_byte> row(row_bytes);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: write failed for '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * width * channels;
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * channels; ++i) {
      const std::uint16_t s = samples[base + i];
      if (bit_depth == 8) {
        row[i] = static_cast<png_byte>(s);
      } else {
        row[2 * i] = static_cast<png_byte>(s >> 8); // PNG stores 16-bit samples big-endian
        row[2 * i + 1] = static_cast<png_byte>(s & 0xff);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

} // namespace detail

inline void write_rgb8(const std::filesystem::path& path, int width, int height,
                       std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw ValidationError("png: RGB buffer size mismatch");
  }
  std::vector<std::uint16_t> s(rgb.begin(), rgb.end());
  detail::write_impl(path, width, height, 3, 8, s);
}

inline void write_gray16(const std::filesystem::path& path, int width, int height,
                         std::span<const std::uint16_t> gray) {
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("png: gray buffer size mismatch");
  }
  detail::write_impl(path, width, height, 1, 16, gray);
}

/// Reads 8- or 16-bit gray/RGB PNGs (palette and alpha are expanded/stripped).
inline Raster read(const std::filesystem::path& path) {
  detail::FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw FormatError("'" + path.string() + "' is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: cannot allocate reader");
  }
  Raster r;
  std::vector<png_byte> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("libpng: corrupt PNG '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  r.width = static_cast<int>(png_get_image_width(png, info));
  r.height = static_cast<int>(png_get_image_height(png, info));
  r.bit_depth = png_get_bit_depth(png, info);
  r.channels = png_get_channels(png, info);
  row.resize(png_get_rowbytes(png, info));
  r.samples.resize(static_cast<std::size_t>(r.width) * r.height * r.channels);
  for (int y = 0; y < r.height; ++y) {
    png_read_row(png, row.data(), nullptr);
    const std::size_t base = static_cast<std::size_t>(y) * r.width * r.channels;
    for (std::size_t i = 0; i < static_cast<std::size_t>(r.width) * r.channels; ++i) {
      r.samples[base + i] = r.bit_depth == 16 ? static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1])
                                              : static_cast<std::uint16_t>(row[i]);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return r;
}

} // namespace tacsim::png
