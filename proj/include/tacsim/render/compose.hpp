// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/imaging/depth.hpp"
#include "tacsim/render/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tacsim::render {

inline constexpr double kContactThreshold = 0.02; // mm
inline constexpr int kFeatherPixels = 3;

/// True where |deformed - undeformed| exceeds `threshold` (both dense).
inline std::vector<char> contact_mask(const imaging::DepthMap& undeformed, const imaging::DepthMap& deformed,
                                      double threshold = kContactThreshold) {
  if (undeformed.width != deformed.width || undeformed.height != deformed.height) {
    throw ValidationError("contact_mask: depth rasters differ in size");
  }
  std::vector<char> mask(deformed.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = std::abs(deformed.z[i] - undeformed.z[i]) > threshold;
  }
  return mask;
}

/// Foreground weight per pixel: 1 inside the mask, 1 - d / (feather + 1) for
/// pixels within `feather` px (Euclidean) of it, 0 elsewhere.
inline std::vector<double> blend_weights(const std::vector<char>& mask, int w, int h, int feather = kFeatherPixels) {
  std::vector<double> wt(mask.size(), 0.0);
  parallel_for(static_cast<std::ptrdiff_t>(h), [&](std::ptrdiff_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mask[i]) {
        wt[i] = 1.0;
        continue;
      }
      int best = std::numeric_limits<int>::max();
      for (int dy = -feather; dy <= feather; ++dy)
        for (int dx = -feather; dx <= feather; ++dx) {
          const int xx = x + dx, yy2 = y + dy;
          if (xx < 0 || yy2 < 0 || xx >= w || yy2 >= h) continue;
          if (mask[static_cast<std::size_t>(yy2) * w + xx]) best = std::min(best, dx * dx + dy * dy);
        }
      if (best <= feather * feather) wt[i] = 1.0 - std::sqrt(static_cast<double>(best)) / (feather + 1);
    }
  });
  return wt;
}

/// Background outside the mask, foreground inside, linear blend in the
/// feather band. Pixels with zero weight copy the background bytes.
inline TactileImage compose(const TactileImage& background, const FloatImage& foreground,
                            const std::vector<char>& mask, int feather = kFeatherPixels) {
  const int w = background.width, h = background.height;
  if (foreground.width != w || foreground.height != h || mask.size() != background.pixels()) {
    throw ValidationError("compose: background, foreground and mask must share dimensions");
  }
  if (feather < 0) throw ValidationError("compose: feather width must be >= 0");
  const std::vector<double> wt = blend_weights(mask, w, h, feather);
  TactileImage out = background;
  for (std::size_t p = 0; p < out.pixels(); ++p) {
    if (wt[p] == 0.0) continue;
    for (int c = 0; c < 3; ++c) {
      const double f = std::clamp(foreground(p, c), 0.0, 1.0);
      out(p, c) = wt[p] == 1.0 ? quantize(f) : quantize(wt[p] * f + (1.0 - wt[p]) * background(p, c) / 255.0);
    }
  }
  return out;
}

} // namespace tacsim::render
