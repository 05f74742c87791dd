// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Densification of sparse depth maps with C1 cubic interpolants.
//
// Samples on a full tensor lattice use a separable not-a-knot cubic spline
// (exact for bicubic polynomials, extrapolated with the end pieces for one
// knot spacing and held constant beyond).
// Scattered samples use the Clough-Tocher split-triangle cubic on a Delaunay
// triangulation, with vertex gradients from local quadratic least squares;
// pixels outside the convex hull take the value of the nearest sample.

#include "tacsim/core/error.hpp"
#include "tacsim/core/types.hpp"
#include "tacsim/imaging/depth.hpp"

#include <Eigen/Dense>
#include <boost/polygon/voronoi.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace tacsim::imaging {

namespace detail {

/// Not-a-knot cubic spline on fixed knots; the factorization is shared by
/// every data vector.
class NotAKnotSpline {
public:
  explicit NotAKnotSpline(std::vector<double> knots) : x_(std::move(knots)) {
    const int n = static_cast<int>(x_.size());
    if (n < 4) throw ValidationError("interpolate_depth: a spline needs at least 4 knots");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    const auto h = [&](int i) { return x_[i + 1] - x_[i]; };
    A(0, 0) = h(1);
    A(0, 1) = -(h(0) + h(1));
    A(0, 2) = h(0);
    for (int i = 1; i < n - 1; ++i) {
      A(i, i - 1) = h(i - 1);
      A(i, i) = 2.0 * (h(i - 1) + h(i));
      A(i, i + 1) = h(i);
    }
    A(n - 1, n - 3) = h(n - 2);
    A(n - 1, n - 2) = -(h(n - 3) + h(n - 2));
    A(n - 1, n - 1) = h(n - 3);
    lu_ = A.partialPivLu();
  }

  /// Evaluates the spline through (knots, y) at each query.
  std::vector<double> eval(const std::vector<double>& y, const std::vector<double>& query) const {
    const int n = static_cast<int>(x_.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
      rhs(i) = 6.0 * ((y[i + 1] - y[i]) / (x_[i + 1] - x_[i]) - (y[i] - y[i - 1]) / (x_[i] - x_[i - 1]));
    }
    const Eigen::VectorXd M = lu_.solve(rhs);
    std::vector<double> out(query.size());
    for (std::size_t q = 0; q < query.size(); ++q) {
      const double t = query[q];
      int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
      i = std::clamp(i, 0, n - 2);
      const double h = x_[i + 1] - x_[i];
      const double a = x_[i + 1] - t, b = t - x_[i];
      out[q] = M(i) * a * a * a / (6.0 * h) + M(i + 1) * b * b * b / (6.0 * h) + (y[i] / h - M(i) * h / 6.0) * a +
               (y[i + 1] / h - M(i + 1) * h / 6.0) * b;
    }
    return out;
  }

private:
  std::vector<double> x_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct Sample {
  int u, v;
  double z;
};

using Triangle = std::array<std::uint32_t, 3>;

/// Delaunay triangles (counter-clockwise) of integer points, read off the
/// dual Voronoi diagram. Vertices shared by more than three cells (co-circular
/// points) are fanned.
inline std::vector<Triangle> delaunay(const std::vector<Sample>& s) {
  using Point = boost::polygon::point_data<int>;
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (const Sample& p : s) pts.emplace_back(p.u, p.v);
  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(pts.begin(), pts.end(), &vd);
  auto cross = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return static_cast<double>(s[b].u - s[a].u) * (s[c].v - s[a].v) -
           static_cast<double>(s[b].v - s[a].v) * (s[c].u - s[a].u);
  };
  std::vector<Triangle> tris;
  std::vector<std::uint32_t> ring;
  for (const auto& vertex : vd.vertices()) {
    ring.clear();
    const auto* e = vertex.incident_edge();
    do {
      ring.push_back(static_cast<std::uint32_t>(e->cell()->source_index()));
      e = e->rot_next();
    } while (e != vertex.incident_edge());
    for (std::size_t k = 1; k + 1 < ring.size(); ++k) {
      Triangle t{ring[0], ring[k], ring[k + 1]};
      const double area = cross(t[0], t[1], t[2]);
      if (area == 0.0) continue;
      if (area < 0.0) std::swap(t[1], t[2]);
      tris.push_back(t);
    }
  }
  return tris;
}

/// Vertex gradients from a least-squares quadratic over the 1-ring (2-ring
/// when the 1-ring has fewer than five points).
inline std::vector<Vec2> estimate_gradients(const std::vector<Sample>& s, const std::vector<Triangle>& tris) {
  const std::size_t n = s.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const Triangle& t : tris)
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[k]].push_back(t[(k + 2) % 3]);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<Vec2> grad(n, Vec2::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> nb = adj[i];
    if (nb.size() < 5) {
      std::set<std::uint32_t> two(nb.begin(), nb.end());
      for (std::uint32_t j : adj[i]) two.insert(adj[j].begin(), adj[j].end());
      two.erase(static_cast<std::uint32_t>(i));
      nb.assign(two.begin(), two.end());
    }
    if (nb.empty()) continue;
    double scale = 0.0;
    for (std::uint32_t j : nb) scale += std::hypot(s[j].u - s[i].u, s[j].v - s[i].v);
    scale /= static_cast<double>(nb.size());
    const bool quadratic = nb.size() >= 5;
    const int cols = quadratic ? 5 : 2;
    Eigen::MatrixXd A(nb.size(), cols);
    Eigen::VectorXd b(nb.size());
    for (std::size_t r = 0; r < nb.size(); ++r) {
      const double dx = (s[nb[r]].u - s[i].u) / scale, dy = (s[nb[r]].v - s[i].v) / scale;
      A(r, 0) = dx;
      A(r, 1) = dy;
      if (quadratic) {
        A(r, 2) = 0.5 * dx * dx;
        A(r, 3) = dx * dy;
        A(r, 4) = 0.5 * dy * dy;
      }
      b(r) = s[nb[r]].z - s[i].z;
    }
    const Eigen::VectorXd c = A.completeOrthogonalDecomposition().solve(b);
    grad[i] = Vec2(c(0), c(1)) / scale;
  }
  return grad;
}

/// Clough-Tocher macro element over one triangle, in Bezier form.
class CloughTocher {
public:
  CloughTocher(const std::array<Vec2, 3>& p, const std::array<double, 3>& f, const std::array<Vec2, 3>& g) : p_(p) {
    const Vec2 o = (p[0] + p[1] + p[2]) / 3.0;
    for (int i = 0; i < 3; ++i) {
      f_[i] = f[i];
      q_[i] = f[i] + g[i].dot(o - p[i]) / 3.0;
    }
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      pij_[i] = f[i] + g[i].dot(p[j] - p[i]) / 3.0;
      pji_[i] = f[j] + g[j].dot(p[i] - p[j]) / 3.0;
      // Barycentric components, in (p_i, p_j, o), of the inward edge normal.
      const Vec2 e = p[j] - p[i];
      Vec2 nrm(-e.y(), e.x());
      if (nrm.dot(o - p[i]) < 0.0) nrm = -nrm;
      Eigen::Matrix3d m;
      m << p[i].x(), p[j].x(), o.x(), p[i].y(), p[j].y(), o.y(), 1.0, 1.0, 1.0;
      const Vec3 d = m.partialPivLu().solve(Vec3(nrm.x(), nrm.y(), 0.0));
      const double c200 = d[0] * f[i] + d[1] * pij_[i] + d[2] * q_[i];
      const double c020 = d[0] * pji_[i] + d[1] * f[j] + d[2] * q_[j];
      t_[i] = (0.5 * (c200 + c020) - d[0] * pij_[i] - d[1] * pji_[i]) / d[2];
    }
    for (int i = 0; i < 3; ++i) r_[i] = (q_[i] + t_[i] + t_[(i + 2) % 3]) / 3.0;
    s_ = (r_[0] + r_[1] + r_[2]) / 3.0;
  }

  /// Barycentric coordinates of x in the macro triangle.
  std::array<double, 3> barycentric(const Vec2& x) const {
    const Vec2 a = p_[1] - p_[0], b = p_[2] - p_[0], c = x - p_[0];
    const double det = a.x() * b.y() - a.y() * b.x();
    const double l1 = (c.x() * b.y() - c.y() * b.x()) / det;
    const double l2 = (a.x() * c.y() - a.y() * c.x()) / det;
    return {1.0 - l1 - l2, l1, l2};
  }

  double eval(const std::array<double, 3>& l) const {
    int k = 0;
    if (l[1] < l[k]) k = 1;
    if (l[2] < l[k]) k = 2;
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    const double a = l[i] - l[k], b = l[j] - l[k], c = 3.0 * l[k];
    // Sub-triangle (p_i, p_j, o); edge (i, j) is edge i of the macro element.
    return f_[i] * a * a * a + f_[j] * b * b * b + s_ * c * c * c + 3.0 * pij_[i] * a * a * b +
           3.0 * pji_[i] * a * b * b + 3.0 * q_[i] * a * a * c + 3.0 * q_[j] * b * b * c + 6.0 * t_[i] * a * b * c +
           3.0 * r_[i] * a * c * c + 3.0 * r_[j] * b * c * c;
  }

private:
  std::array<Vec2, 3> p_;
  std::array<double, 3> f_, q_, pij_, pji_, t_, r_;
  double s_ = 0.0;
};

/// Exact Euclidean nearest-sample fill (separable lower-envelope transform).
inline void nearest_fill(std::vector<double>& z, const std::vector<char>& have, int w, int h) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(z.size(), inf);
  std::vector<int> row_of(z.size(), -1);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (have[static_cast<std::size_t>(y) * w + x]) last = y;
      if (last >= 0) row_of[static_cast<std::size_t>(y) * w + x] = last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (have[i]) last = y;
      if (last >= 0 && (row_of[i] < 0 || last - y < y - row_of[i])) row_of[i] = last;
      if (row_of[i] >= 0) g[i] = static_cast<double>(y - row_of[i]) * (y - row_of[i]);
    }
  }
  std::vector<double> src(z);
  std::vector<int> hull(w);
  std::vector<double> bound(w + 1);
  for (int y = 0; y < h; ++y) {
    const double* f = &g[static_cast<std::size_t>(y) * w];
    int k = -1;
    for (int q = 0; q < w; ++q) {
      if (f[q] == inf) continue;
      while (k >= 0) {
        const int p = hull[k];
        const double s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p));
        if (s <= bound[k]) {
          --k;
        } else {
          ++k;
          hull[k] = q;
          bound[k] = s;
          break;
        }
      }
      if (k < 0) {
        k = 0;
        hull[0] = q;
        bound[0] = -inf;
      }
    }
    if (k < 0) continue;
    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (j < k && bound[j + 1] < x) ++j;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (have[i]) continue;
      const int sx = hull[j];
      const int sy = row_of[static_cast<std::size_t>(y) * w + sx];
      z[i] = src[static_cast<std::size_t>(sy) * w + sx];
    }
  }
}

} // namespace detail

/// Fills every hole of a sparse depth map. Seeded pixels keep their values.
inline DepthMap interpolate_depth(const DepthMap& sparse) {
  if (sparse.is_dense()) {
    DepthMap d = sparse;
    d.provenance = Provenance::dense;
    return d;
  }
  const int w = sparse.width, h = sparse.height;
  std::vector<detail::Sample> samples;
  std::vector<char> have(sparse.size(), 0);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const std::size_t i = sparse.at(u, v);
      if (!sparse.hole(i)) {
        samples.push_back({u, v, sparse.z[i]});
        have[i] = 1;
      }
    }
  if (samples.size() < 16) throw ValidationError("interpolate_depth: insufficient support (fewer than 16 samples)");

  DepthMap out = sparse;
  out.provenance = Provenance::dense;

  std::set<int> cols, rows;
  for (const auto& s : samples) {
    cols.insert(s.u);
    rows.insert(s.v);
  }
  const bool lattice = cols.size() * rows.size() == samples.size();
  if (lattice) {
    if (cols.size() < 4 || rows.size() < 4) {
      throw ValidationError("interpolate_depth: insufficient support (lattice smaller than 4 x 4)");
    }
    const std::vector<int> U(cols.begin(), cols.end()), V(rows.begin(), rows.end());
    const detail::NotAKnotSpline su(std::vector<double>(U.begin(), U.end()));
    const detail::NotAKnotSpline sv(std::vector<double>(V.begin(), V.end()));
    std::vector<double> all_u(w), all_v(h);
    // Extrapolate by at most one end spacing; farther pixels repeat that edge.
    const auto reach = [](const std::vector<int>& k, int x) {
      const int n = static_cast<int>(k.size());
      return std::clamp(static_cast<double>(x), 2.0 * k[0] - k[1], 2.0 * k[n - 1] - k[n - 2]);
    };
    for (int u = 0; u < w; ++u) all_u[u] = reach(U, u);
    for (int v = 0; v < h; ++v) all_v[v] = reach(V, v);
    std::vector<std::vector<double>> by_row(V.size());
    for (std::size_t r = 0; r < V.size(); ++r) {
      std::vector<double> y(U.size());
      for (std::size_t c = 0; c < U.size(); ++c) y[c] = sparse(U[c], V[r]);
      by_row[r] = su.eval(y, all_u);
    }
    for (int u = 0; u < w; ++u) {
      std::vector<double> y(V.size());
      for (std::size_t r = 0; r < V.size(); ++r) y[r] = by_row[r][u];
      const auto col = sv.eval(y, all_v);
      for (int v = 0; v < h; ++v) {
        const std::size_t i = out.at(u, v);
        if (!have[i]) out.z[i] = col[v];
      }
    }
    return out;
  }

  const auto tris = detail::delaunay(samples);
  if (tris.empty()) throw ValidationError("interpolate_depth: insufficient support (samples are collinear)");
  const auto grad = detail::estimate_gradients(samples, tris);
  std::vector<char> done = have;
  for (const auto& t : tris) {
    std::array<Vec2, 3> p;
    std::array<double, 3> f;
    std::array<Vec2, 3> g;
    int u0 = w, u1 = -1, v0 = h, v1 = -1;
    for (int k = 0; k < 3; ++k) {
      const auto& s = samples[t[k]];
      p[k] = Vec2(s.u, s.v);
      f[k] = s.z;
      g[k] = grad[t[k]];
      u0 = std::min(u0, s.u);
      u1 = std::max(u1, s.u);
      v0 = std::min(v0, s.v);
      v1 = std::max(v1, s.v);
    }
    const detail::CloughTocher ct(p, f, g);
    for (int v = v0; v <= v1; ++v)
      for (int u = u0; u <= u1; ++u) {
        const std::size_t i = out.at(u, v);
        if (done[i]) continue;
        const auto l = ct.barycentric(Vec2(u, v));
        if (l[0] < -1e-12 || l[1] < -1e-12 || l[2] < -1e-12) continue;
        out.z[i] = ct.eval({std::max(l[0], 0.0), std::max(l[1], 0.0), std::max(l[2], 0.0)});
        done[i] = 1;
      }
  }
  detail::nearest_fill(out.z, done, w, h);
  return out;
}

} // namespace tacsim::imaging
