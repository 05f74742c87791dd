// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/imaging/depth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tacsim::imaging {

/// Separable Gaussian blur of a dense depth map (clamped edges, radius
/// ceil(3 sigma)). Used ahead of normal estimation to suppress the half-pixel
/// rounding of scattered samples; sigma <= 0 returns the input.
inline DepthMap smooth_depth(const DepthMap& d, double sigma) {
  if (!(sigma > 0.0)) return d;
  if (!d.is_dense()) throw ValidationError("smooth_depth: depth map must be dense");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& x : k) x /= sum;

  const int w = d.width, h = d.height;
  std::vector<double> tmp(d.size());
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * d.z[d.at(std::clamp(u + i, 0, w - 1), v)];
      tmp[d.at(u, v)] = s;
    }
  DepthMap out = d;
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * tmp[d.at(u, std::clamp(v + i, 0, h - 1))];
      out.z[d.at(u, v)] = s;
    }
  return out;
}

} // namespace tacsim::imaging
