#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>

#include "relpose/geometry.hpp"
#include "relpose/polynomial.hpp"

namespace relpose::detail {

// Right null vector of a rank-2 3x3 matrix (row-major), from the largest cross
// product of two rows. Empty when every cross product is negligible relative
// to the row norms, i.e. the rank is below 2.
inline std::optional<Vec3> null_vector3(const std::array<double, 9>& m, double rel_tol = 1e-10) {
  const Vec3 r0(m[0], m[1], m[2]);
  const Vec3 r1(m[3], m[4], m[5]);
  const Vec3 r2(m[6], m[7], m[8]);
  const std::array<Vec3, 3> c = {r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  const std::array<double, 3> scale = {r0.norm() * r1.norm(), r0.norm() * r2.norm(), r1.norm() * r2.norm()};
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (c[i].norm() > c[best].norm()) best = i;
  const double smax = std::max({scale[0], scale[1], scale[2]});
  if (!(c[best].norm() > rel_tol * smax)) return std::nullopt;
  return c[best];
}

// Essential-matrix validity at the scale stored by EssentialMatrix.
inline bool is_valid_essential(const Mat3& e, double tol) {
  const Mat3 eet = e * e.transpose();
  const Mat3 niner = 2.0 * eet * e - eet.trace() * e;
  return std::abs(e.determinant()) < tol && niner.cwiseAbs().maxCoeff() < tol;
}

// Orients t by cheirality: the sign with more pairs in front of both cameras
// wins, positive on ties.
inline Vec3 orient_translation(const RotationMatrix& r, const Vec3& t, std::span<const BearingPair> pairs,
                               int* positive = nullptr) {
  int plus = 0;
  int minus = 0;
  for (const BearingPair& p : pairs) {
    const Eigen::Vector2d dp = triangulate_depths({r, t}, p);
    const Eigen::Vector2d dm = triangulate_depths({r, -t}, p);
    if (dp[0] > 0.0 && dp[1] > 0.0) ++plus;
    if (dm[0] > 0.0 && dm[1] > 0.0) ++minus;
  }
  if (positive) *positive = std::max(plus, minus);
  return minus > plus ? Vec3(-t) : t;
}

}  // namespace relpose::detail
