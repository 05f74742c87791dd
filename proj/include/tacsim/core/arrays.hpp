// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/container.hpp"
#include "tacsim/core/types.hpp"

#include <string>
#include <vector>

namespace tacsim {

/// Packs a list of 3-vectors as an N x 3 f64 array.
inline void add_vec3(Container& c, std::string name, const Vec3List& v) {
  std::vector<double> flat(v.size() * 3);
  for (std::size_t i = 0; i < v.size(); ++i) {
    flat[3 * i] = v[i].x();
    flat[3 * i + 1] = v[i].y();
    flat[3 * i + 2] = v[i].z();
  }
  c.add<double>(std::move(name), {v.size(), 3}, flat);
}

inline Vec3List get_vec3(const Container& c, std::string_view name) {
  const auto& shape = c.shape(name);
  if (shape.size() != 2 || shape[1] != 3) {
    throw FormatError("STAC1: array '" + std::string(name) + "' is not N x 3");
  }
  const auto flat = c.get<double>(name);
  Vec3List out(shape[0]);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Vec3(flat[3 * i], flat[3 * i + 1], flat[3 * i + 2]);
  }
  return out;
}

/// Packs 3x3 matrices as an N x 3 x 3 f64 array, row-major per matrix.
inline void add_mat3(Container& c, std::string name, const std::vector<Mat3>& m) {
  std::vector<double> flat(m.size() * 9);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) flat[9 * i + 3 * r + k] = m[i](r, k);
  }
  c.add<double>(std::move(name), {m.size(), 3, 3}, flat);
}

inline std::vector<Mat3> get_mat3(const Container& c, std::string_view name) {
  const auto& shape = c.shape(name);
  if (shape.size() != 3 || shape[1] != 3 || shape[2] != 3) {
    throw FormatError("STAC1: array '" + std::string(name) + "' is not N x 3 x 3");
  }
  const auto flat = c.get<double>(name);
  std::vector<Mat3> out(shape[0]);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) out[i](r, k) = flat[9 * i + 3 * r + k];
  }
  return out;
}

} // namespace tacsim
