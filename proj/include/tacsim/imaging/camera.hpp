// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <cmath>
#include <numbers>

namespace tacsim::imaging {

struct Intrinsics {
  double fu = 0.0, fv = 0.0;
  double cx = 0.0, cy = 0.0;
};

/// Pinhole focal lengths from one field-of-view angle shared by both axes;
/// the principal point is the image centre (width/2, height/2).
inline Intrinsics intrinsics(double fov, int width, int height) {
  if (!(fov > 0.0 && fov < std::numbers::pi)) throw ValidationError("camera: fov must lie in (0, pi) radians");
  if (width < 1 || height < 1) throw ValidationError("camera: image size must be positive");
  const double t = 2.0 * std::tan(0.5 * fov);
  return {width / t, height / t, 0.5 * width, 0.5 * height};
}

/// Pinhole camera. `rotation` maps camera-frame vectors to world vectors;
/// the camera looks along its own +z, with +x along image columns (u) and
/// +y along image rows (v). Pixel (i, j) is centred on u = i, v = j.
struct Camera {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  double fov = std::numbers::pi / 2;
  int width = 320;
  int height = 240;

  Intrinsics k() const { return intrinsics(fov, width, height); }

  Vec3 to_camera(const Vec3& world) const { return rotation.transpose() * (world - position); }
  Vec3 to_world(const Vec3& cam) const { return position + rotation * cam; }
  Vec3 direction_to_world(const Vec3& cam) const { return rotation * cam; }
  Vec3 direction_to_camera(const Vec3& world) const { return rotation.transpose() * world; }

  void validate() const {
    (void)k();
    const Mat3 r = rotation.transpose() * rotation;
    if (!r.isApprox(Mat3::Identity(), 1e-9) || rotation.determinant() < 0.0) {
      throw ValidationError("camera: rotation must be a proper orthonormal matrix");
    }
  }
};

/// Rotation whose +z points from `eye` to `target`, with image rows (+y)
/// running along -`up` as far as possible.
inline Mat3 look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = z.cross(up);
  if (x.norm() < 1e-12) throw ValidationError("look_at: up vector parallel to the viewing direction");
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

} // namespace tacsim::imaging
