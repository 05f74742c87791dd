// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace tacsim::mpm {

enum class MaterialKind { elastic, rigid };

/// Units are mm, tonne, s: moduli in MPa (N/mm^2), density in tonne/mm^3.
struct Material {
  double youngs_modulus = 0.145;
  double poisson_ratio = 0.45;
  double density = 1e-9;
  MaterialKind kind = MaterialKind::elastic;

  double mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
  double lambda() const {
    return youngs_modulus * poisson_ratio / ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }

  /// P-wave speed sqrt((lambda + 2 mu) / rho), mm/s.
  double wave_speed() const { return std::sqrt((lambda() + 2.0 * mu()) / density); }

  void validate() const {
    if (!(youngs_modulus > 0.0)) throw ValidationError("material: Young's modulus must be > 0");
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) {
      throw ValidationError("material: Poisson ratio must lie in [0, 0.5)");
    }
    if (!(density > 0.0)) throw ValidationError("material: density must be > 0");
  }
};

/// Compressible Neo-Hookean first Piola-Kirchhoff stress.
inline Mat3 neo_hookean_pk1(const Mat3& F, double mu, double lambda) {
  const double J = F.determinant();
  const Mat3 F_inv_t = F.inverse().transpose();
  return mu * (F - F_inv_t) + lambda * std::log(J) * F_inv_t;
}

} // namespace tacsim::mpm
