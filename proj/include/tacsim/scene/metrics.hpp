// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Image comparison metrics on 8-bit images.
//
// SSIM uses the Wang et al. constants with a Gaussian window (sigma 1.5,
// 11 taps, truncation 3.5 sigma) applied separably with half-sample
// symmetric ("reflect") edges, population (co)variances, the per-channel map
// cropped by 5 px at every border, then averaged over channels. This is the
// convention of skimage.metrics.structural_similarity(gaussian_weights=True,
// sigma=1.5, use_sample_covariance=False, data_range=255, channel_axis=-1).

#include "tacsim/core/error.hpp"
#include "tacsim/render/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tacsim::scene {

struct Metrics {
  double ssim = 1.0;
  double mse = 0.0;
  double mae = 0.0;
  double psnr = std::numeric_limits<double>::infinity(); // +inf for identical images
};

inline constexpr double kSsimSigma = 1.5;
inline constexpr int kSsimRadius = 5;
inline constexpr double kSsimK1 = 0.01, kSsimK2 = 0.03;
inline constexpr double kDataRange = 255.0;

namespace detail {

inline void same_shape(const render::TactileImage& a, const render::TactileImage& b) {
  if (a.width != b.width || a.height != b.height || a.rgb.size() != b.rgb.size()) {
    throw ValidationError("metrics: image sizes differ (" + std::to_string(a.width) + "x" + std::to_string(a.height) +
                          " vs " + std::to_string(b.width) + "x" + std::to_string(b.height) + ")");
  }
  if (a.width <= 0 || a.height <= 0) throw ValidationError("metrics: empty image");
}

/// scipy.ndimage 'reflect' index: d c b a | a b c d | d c b a.
inline int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

inline std::vector<double> gaussian_kernel() {
  std::vector<double> k(2 * kSsimRadius + 1);
  double s = 0.0;
  for (int i = -kSsimRadius; i <= kSsimRadius; ++i) {
    s += k[i + kSsimRadius] = std::exp(-0.5 * i * i / (kSsimSigma * kSsimSigma));
  }
  for (double& x : k) x /= s;
  return k;
}

/// Separable Gaussian filter of a w x h plane, rows first.
inline std::vector<double> filter(const std::vector<double>& x, int w, int h, const std::vector<double>& k) {
  std::vector<double> tmp(x.size()), out(x.size());
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int i = -kSsimRadius; i <= kSsimRadius; ++i) s += k[i + kSsimRadius] * x[v * w + reflect(u + i, w)];
      tmp[v * w + u] = s;
    }
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      double s = 0.0;
      for (int i = -kSsimRadius; i <= kSsimRadius; ++i) s += k[i + kSsimRadius] * tmp[reflect(v + i, h) * w + u];
      out[v * w + u] = s;
    }
  return out;
}

} // namespace detail

inline double metric_mse(const render::TactileImage& a, const render::TactileImage& b) {
  detail::same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = static_cast<double>(a.rgb[i]) - b.rgb[i];
    s += d * d;
  }
  return s / static_cast<double>(a.rgb.size());
}

inline double metric_mae(const render::TactileImage& a, const render::TactileImage& b) {
  detail::same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) s += std::abs(static_cast<double>(a.rgb[i]) - b.rgb[i]);
  return s / static_cast<double>(a.rgb.size());
}

inline double metric_psnr(const render::TactileImage& a, const render::TactileImage& b) {
  const double mse = metric_mse(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kDataRange * kDataRange / mse);
}

/// Mean SSIM. Images need at least 11 px per side.
inline double metric_ssim(const render::TactileImage& a, const render::TactileImage& b) {
  detail::same_shape(a, b);
  const int w = a.width, h = a.height;
  if (w < 2 * kSsimRadius + 1 || h < 2 * kSsimRadius + 1) {
    throw ValidationError("metrics: SSIM needs images of at least 11x11 pixels");
  }
  const auto k = detail::gaussian_kernel();
  const double c1 = std::pow(kSsimK1 * kDataRange, 2), c2 = std::pow(kSsimK2 * kDataRange, 2);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  double total = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a.rgb[3 * i + ch];
      y[i] = b.rgb[3 * i + ch];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto ux = detail::filter(x, w, h, k), uy = detail::filter(y, w, h, k);
    const auto uxx = detail::filter(xx, w, h, k), uyy = detail::filter(yy, w, h, k), uxy = detail::filter(xy, w, h, k);
    double s = 0.0;
    std::size_t m = 0;
    for (int v = kSsimRadius; v < h - kSsimRadius; ++v)
      for (int u = kSsimRadius; u < w - kSsimRadius; ++u) {
        const std::size_t i = static_cast<std::size_t>(v) * w + u;
        const double vx = uxx[i] - ux[i] * ux[i], vy = uyy[i] - uy[i] * uy[i], cxy = uxy[i] - ux[i] * uy[i];
        s += ((2.0 * ux[i] * uy[i] + c1) * (2.0 * cxy + c2)) /
             ((ux[i] * ux[i] + uy[i] * uy[i] + c1) * (vx + vy + c2));
        ++m;
      }
    total += s / static_cast<double>(m);
  }
  return total / 3.0;
}

inline Metrics compare(const render::TactileImage& a, const render::TactileImage& b) {
  Metrics m;
  m.ssim = metric_ssim(a, b);
  m.mse = metric_mse(a, b);
  m.mae = metric_mae(a, b);
  m.psnr = metric_psnr(a, b);
  return m;
}

struct MetricSummary {
  std::size_t count = 0;
  Metrics mean, min, max; // psnr mean/min/max over finite values only
  std::size_t identical = 0;
};

inline MetricSummary summarize(const std::vector<Metrics>& all) {
  MetricSummary s;
  s.count = all.size();
  if (all.empty()) return s;
  const double inf = std::numeric_limits<double>::infinity();
  s.min = Metrics{inf, inf, inf, inf};
  s.max = Metrics{-inf, -inf, -inf, -inf};
  s.mean = Metrics{0.0, 0.0, 0.0, 0.0};
  std::size_t finite = 0;
  for (const Metrics& m : all) {
    s.mean.ssim += m.ssim;
    s.mean.mse += m.mse;
    s.mean.mae += m.mae;
    s.min.ssim = std::min(s.min.ssim, m.ssim);
    s.max.ssim = std::max(s.max.ssim, m.ssim);
    s.min.mse = std::min(s.min.mse, m.mse);
    s.max.mse = std::max(s.max.mse, m.mse);
    s.min.mae = std::min(s.min.mae, m.mae);
    s.max.mae = std::max(s.max.mae, m.mae);
    if (std::isfinite(m.psnr)) {
      s.mean.psnr += m.psnr;
      s.min.psnr = std::min(s.min.psnr, m.psnr);
      s.max.psnr = std::max(s.max.psnr, m.psnr);
      ++finite;
    } else {
      ++s.identical;
    }
  }
  const double n = static_cast<double>(all.size());
  s.mean.ssim /= n;
  s.mean.mse /= n;
  s.mean.mae /= n;
  if (finite) {
    s.mean.psnr /= static_cast<double>(finite);
  } else {
    s.mean.psnr = s.min.psnr = s.max.psnr = inf;
  }
  return s;
}

} // namespace tacsim::scene
