#pragma once

// Forward-synthesis helpers for the unit tests. They deliberately avoid the
// library's own rotation and scene code: rotations come from Eigen's
// quaternion/angle-axis types and points are projected directly.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Geometry>

#include "relpose/geometry.hpp"

namespace relpose::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Vec3 normal3() { return Vec3(normal(), normal(), normal()); }
  Vec3 unit3() { return normal3().normalized(); }

 private:
  std::mt19937_64 gen_;
};

inline Mat3 eigen_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline Mat3 random_rotation_matrix(Rng& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

// Right-handed axis of a rotation matrix (angle in (0, pi)).
inline Vec3 right_hand_axis(const Mat3& r) {
  return Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)).normalized();
}

struct Synth {
  Mat3 r;
  Vec3 t;
  std::vector<BearingPair> pairs;
  std::vector<Vec3> points;
};

// n points in front of both cameras, X2 = R X1 + t.
inline Synth synthesize(const Mat3& r, const Vec3& t, int n, Rng& rng) {
  Synth s{r, t, {}, {}};
  for (int attempts = 0; static_cast<int>(s.pairs.size()) < n; ++attempts) {
    if (attempts > 100000) throw std::runtime_error("motion leaves no point in front of the second camera");
    const Vec3 x(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(3.0, 8.0));
    const Vec3 x2 = r * x + t;
    if (x2.z() < 0.5) continue;
    s.points.push_back(x);
    s.pairs.emplace_back(x.normalized(), x2.normalized());
  }
  return s;
}

// Random general motion with angle in [lo, hi] radians and unit translation.
inline Synth random_general(int n, Rng& rng, double lo = 0.1, double hi = 1.0) {
  const Mat3 r = eigen_rotation(rng.unit3(), rng.uniform(lo, hi));
  return synthesize(r, rng.unit3(), n, rng);
}

// Random zero-screw motion: unit translation orthogonal to the rotation axis.
inline Synth random_planar(int n, Rng& rng, double lo = 0.1, double hi = 1.0) {
  const Vec3 axis = rng.unit3();
  const Mat3 r = eigen_rotation(axis, rng.uniform(lo, hi));
  const Vec3 t = axis.cross(rng.unit3()).normalized();
  return synthesize(r, t, n, rng);
}

inline double min_rotation_distance(const std::vector<RigidMotion>& motions, const Mat3& truth) {
  double best = INFINITY;
  for (const RigidMotion& m : motions) best = std::min(best, (m.rotation.matrix() - truth).norm());
  return best;
}

}  // namespace relpose::test
