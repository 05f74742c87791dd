// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Depth rasters and their on-disk forms: a 16-bit PNG with a JSON sidecar
// declaring mm per unit, and a float32 array in a STAC1 container.

#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/png_io.hpp"
#include "tacsim/core/types.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

namespace tacsim::imaging {

enum class Provenance : std::uint8_t { sparse = 0, dense = 1 };

/// z-depth raster in the camera frame (mm). Holes hold NaN. `distance` is the
/// Euclidean camera distance and `source` the particle index of each pixel
/// when the map comes from projection (NaN / -1 elsewhere).
struct DepthMap {
  int width = 0, height = 0;
  std::vector<double> z;
  std::vector<double> distance;
  std::vector<std::int64_t> source;
  Provenance provenance = Provenance::sparse;

  DepthMap() = default;
  DepthMap(int w, int h)
      : width(w), height(h), z(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::quiet_NaN()),
        distance(z.size(), std::numeric_limits<double>::quiet_NaN()), source(z.size(), -1) {}

  std::size_t size() const { return z.size(); }
  std::size_t at(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  double operator()(int u, int v) const { return z[at(u, v)]; }
  bool hole(std::size_t i) const { return std::isnan(z[i]); }

  std::size_t filled() const {
    std::size_t n = 0;
    for (double d : z) n += !std::isnan(d);
    return n;
  }

  bool is_dense() const { return filled() == size(); }
};

// ------------------------------------------------------------------- PNG16

/// Writes depth as round(z / mm_per_unit) in a 16-bit gray PNG (0 = hole)
/// plus `<path>.json` carrying the scale.
inline void write_depth_png(const std::filesystem::path& path, const DepthMap& d, double mm_per_unit) {
  if (!(mm_per_unit > 0.0)) throw ValidationError("depth png: mm_per_unit must be > 0");
  std::vector<std::uint16_t> units(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.hole(i)) continue;
    const double q = std::nearbyint(d.z[i] / mm_per_unit);
    if (q < 1.0 || q > 65535.0) {
      throw ValidationError("depth png: depth " + std::to_string(d.z[i]) + " mm not representable at scale " +
                            std::to_string(mm_per_unit));
    }
    units[i] = static_cast<std::uint16_t>(q);
  }
  png::write_gray16(path, d.width, d.height, units);
  nlohmann::json side = {{"mm_per_unit", mm_per_unit}, {"width", d.width}, {"height", d.height}, {"hole_value", 0},
                         {"dense", d.provenance == Provenance::dense}};
  std::ofstream out(path.string() + ".json");
  if (!out) throw IoError("cannot write '" + path.string() + ".json'");
  out << side.dump(2) << '\n';
}

inline DepthMap read_depth_png(const std::filesystem::path& path) {
  std::ifstream in(path.string() + ".json");
  if (!in) throw IoError("missing depth sidecar '" + path.string() + ".json'");
  nlohmann::json side;
  try {
    in >> side;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("depth sidecar: " + std::string(e.what()));
  }
  if (!side.contains("mm_per_unit") || !side["mm_per_unit"].is_number()) {
    throw FormatError("depth sidecar: missing numeric mm_per_unit");
  }
  const double scale = side["mm_per_unit"].get<double>();
  const png::Raster r = png::read(path);
  if (r.channels != 1 || r.bit_depth != 16) throw FormatError("depth png: expected 16-bit single channel");
  DepthMap d(r.width, r.height);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (r.samples[i] != 0) d.z[i] = r.samples[i] * scale;
  }
  d.provenance = side.value("dense", false) ? Provenance::dense : Provenance::sparse;
  return d;
}

// ------------------------------------------------------------------- STAC1

inline void add_depth(Container& c, const std::string& name, const DepthMap& d) {
  std::vector<float> z(d.z.begin(), d.z.end());
  c.add<float>(name, {static_cast<std::uint64_t>(d.height), static_cast<std::uint64_t>(d.width)}, z);
  c.add_scalar<std::uint8_t>(name + ".dense", d.provenance == Provenance::dense);
}

inline DepthMap get_depth(const Container& c, const std::string& name) {
  const auto& shape = c.shape(name);
  if (shape.size() != 2) throw FormatError("STAC1: depth array '" + name + "' is not 2-D");
  DepthMap d(static_cast<int>(shape[1]), static_cast<int>(shape[0]));
  const auto z = c.get<float>(name);
  for (std::size_t i = 0; i < d.size(); ++i) d.z[i] = z[i];
  if (c.has(name + ".dense") && c.scalar<std::uint8_t>(name + ".dense")) d.provenance = Provenance::dense;
  return d;
}

} // namespace tacsim::imaging
