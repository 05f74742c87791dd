// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Total force from per-particle force fields, and the synthetic oracle used
// to produce force field files when no learned predictor is available.

#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tacsim::scene {

/// Componentwise sum of an N x 3 field (N).
inline Vec3 total_force(const Vec3List& field) {
  Vec3 s = Vec3::Zero();
  for (const Vec3& f : field) s += f;
  return s;
}

/// Reads array `name` (N x 3, f32 or f64) of a STAC1 container.
inline Vec3List read_field(const Container& c, const std::string& name) {
  const auto& shape = c.shape(name);
  if (shape.size() != 2 || shape[1] != 3) throw FormatError("force field '" + name + "': expected an N x 3 array");
  std::vector<double> v;
  const DType t = c.entry(name).dtype;
  if (t == DType::f64) {
    v = c.get<double>(name);
  } else if (t == DType::f32) {
    for (float x : c.get<float>(name)) v.push_back(x);
  } else {
    throw FormatError("force field '" + name + "': expected f32 or f64 values");
  }
  Vec3List out(shape[0]);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Vec3(v[3 * i], v[3 * i + 1], v[3 * i + 2]);
  return out;
}

inline Vec3 total_force(const std::filesystem::path& stac, const std::string& name = "force") {
  return total_force(read_field(Container::read(stac), name));
}

/// Synthetic target: independent linear springs f = -k u per particle
/// (k in N/mm). Labelled synthetic wherever it is written.
inline Vec3List spring_oracle(const Vec3List& displacement, double k) {
  if (!(k > 0.0)) throw ValidationError("force oracle: stiffness must be > 0");
  Vec3List f(displacement.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = -k * displacement[i];
  return f;
}

} // namespace tacsim::scene
