#include "relpose/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace relpose {

namespace {

constexpr double kOrthonormalTol = 1e-10;

UnitQuaternion canonical(double sigma, Vec3 u) {
  bool flip = sigma < 0.0;
  if (sigma == 0.0) {
    for (int i = 0; i < 3; ++i) {
      if (u[i] != 0.0) {
        flip = u[i] < 0.0;
        break;
      }
    }
  }
  if (flip) {
    sigma = -sigma;
    u = -u;
  }
  return {sigma, u};
}

}  // namespace

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return s;
}

UnitQuaternion UnitQuaternion::from_components(double sigma, const Vec3& u) {
  const double n = std::sqrt(sigma * sigma + u.squaredNorm());
  require(std::isfinite(n) && n > 0.0, "quaternion must be finite and nonzero");
  return canonical(sigma / n, u / n);
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  require(std::isfinite(n) && n > 0.0, "rotation axis must be nonzero");
  return canonical(std::cos(0.5 * angle), std::sin(0.5 * angle) * axis / n);
}

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  require(std::isfinite(ortho) && ortho <= kOrthonormalTol &&
              std::abs(det - 1.0) <= kOrthonormalTol,
          "matrix is not a rotation");
}

RotationMatrix RotationMatrix::project(const Mat3& m) {
  require(m.allFinite(), "matrix must be finite");
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return RotationMatrix(svd.matrixU() * d * svd.matrixV().transpose(), Unchecked{});
}

RotationMatrix RotationMatrix::transpose() const {
  return RotationMatrix(m_.transpose(), Unchecked{});
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& other) const {
  return RotationMatrix(m_ * other.m_, Unchecked{});
}

Mat4 RigidMotion::matrix() const {
  Mat4 h = Mat4::Identity();
  h.topLeftCorner<3, 3>() = rotation.matrix();
  h.topRightCorner<3, 1>() = translation;
  return h;
}

RigidMotion RigidMotion::inverse() const {
  const RotationMatrix rt = rotation.transpose();
  return {rt, -(rt.matrix() * translation)};
}

RigidMotion RigidMotion::operator*(const RigidMotion& other) const {
  return {rotation * other.rotation, rotation.matrix() * other.translation + translation};
}

EssentialMatrix::EssentialMatrix(const Mat3& m) {
  const double n = m.norm();
  require(std::isfinite(n) && n > std::numeric_limits<double>::min(),
          "essential matrix must be finite and nonzero");
  e_ = m * (std::sqrt(2.0) / n);
}

BearingPair::BearingPair(const Vec3& q1, const Vec3& q2) {
  const double n1 = q1.norm();
  const double n2 = q2.norm();
  require(std::isfinite(n1) && std::isfinite(n2) && n1 > 0.0 && n2 > 0.0,
          "bearing rays must be finite and nonzero");
  q1_ = q1 / n1;
  q2_ = q2 / n2;
}

RotationMatrix quat_to_rotation(const UnitQuaternion& q) {
  const double s = q.sigma;
  const Vec3& u = q.u;
  const Mat3 r = 2.0 * (u * u.transpose() - s * skew(u)) +
                 (s * s - u.squaredNorm()) * Mat3::Identity();
  return RotationMatrix(r);
}

UnitQuaternion rotation_to_quat(const RotationMatrix& r) {
  // Eigen's quaternion (w, v) generates R = (w^2 - |v|^2) I + 2 v v^T + 2 w [v]_x,
  // so the local convention is (sigma, u) = (w, -v).
  const Eigen::Quaterniond q(r.matrix());
  return UnitQuaternion::from_components(q.w(), -q.vec());
}

RotationMatrix cayley_to_rotation(const CayleyVector& v) {
  require(v.v.allFinite(), "Cayley vector must be finite");
  const Mat3 s = skew(v.v);
  const Mat3 r = (Mat3::Identity() - s) * (Mat3::Identity() + s).inverse();
  return RotationMatrix::project(r);
}

std::optional<CayleyVector> rotation_to_cayley(const RotationMatrix& r) {
  const UnitQuaternion q = rotation_to_quat(r);
  if (q.sigma <= 1e-12) return std::nullopt;
  return CayleyVector{q.u / q.sigma};
}

RotationMatrix axis_angle_rotation(const Vec3& axis, double angle) {
  return quat_to_rotation(UnitQuaternion::from_axis_angle(axis, angle));
}

double rotation_angle(const RotationMatrix& r) {
  // Same value as acos((tr R - 1) / 2), evaluated through atan2 so that it
  // stays accurate near 0 and pi.
  const Mat3& m = r.matrix();
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double s = std::min(0.5 * w.norm(), 1.0);
  return std::atan2(s, c);
}

Vec3 rotation_axis(const RotationMatrix& r) {
  if (rotation_angle(r) <= kAngleEpsilon) {
    fail(Errc::DegenerateAxis, "rotation axis is undefined for a near-identity rotation");
  }
  return rotation_to_quat(r).u.normalized();
}

double screw_translation(const RigidMotion& h) {
  return rotation_axis(h.rotation).dot(h.translation);
}

Se3Invariants se3_invariants(const RigidMotion& h) {
  return {rotation_angle(h.rotation), screw_translation(h)};
}

RigidMotion conjugate(const RigidMotion& h, const RigidMotion& x) {
  return x.inverse() * h * x;
}

EssentialMatrix essential_from_pose(const RotationMatrix& r, const Vec3& t) {
  const double n = t.norm();
  if (!std::isfinite(n) || n <= std::numeric_limits<double>::min()) {
    fail(Errc::ZeroTranslation, "essential matrix needs a nonzero translation");
  }
  return EssentialMatrix(skew(t / n) * r.matrix());
}

EssentialMatrix essential_from_motion(const RigidMotion& h) {
  return essential_from_pose(h.rotation, h.translation);
}

Eigen::Vector2d triangulate_depths(const RigidMotion& h, const BearingPair& p) {
  const Vec3 a = h.rotation.matrix() * p.q1();
  const Vec3& b = p.q2();
  const Vec3& t = h.translation;
  const double c = a.dot(b);
  const double den = 1.0 - c * c;
  if (den <= 1e-14) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double at = a.dot(t);
  const double bt = b.dot(t);
  return {(-at + c * bt) / den, (-c * at + bt) / den};
}

bool passes_cheirality(const RigidMotion& h, std::span<const BearingPair> pairs) {
  return std::all_of(pairs.begin(), pairs.end(), [&](const BearingPair& p) {
    const Eigen::Vector2d d = triangulate_depths(h, p);
    return d[0] > 0.0 && d[1] > 0.0;
  });
}

std::vector<RigidMotion> essential_candidates(const EssentialMatrix& e) {
  Eigen::JacobiSVD<Mat3> svd(e.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  if (u.determinant() < 0.0) u = -u;
  if (v.determinant() < 0.0) v = -v;
  Mat3 w;
  w << 0.0, -1.0, 0.0,
       1.0, 0.0, 0.0,
       0.0, 0.0, 1.0;
  const RotationMatrix r1 = RotationMatrix::project(u * w * v.transpose());
  const RotationMatrix r2 = RotationMatrix::project(u * w.transpose() * v.transpose());
  const Vec3 t = u.col(2).normalized();
  return {{r1, t}, {r1, -t}, {r2, t}, {r2, -t}};
}

std::vector<RigidMotion> decompose_essential(const EssentialMatrix& e,
                                             std::span<const BearingPair> pairs) {
  require(!pairs.empty(), "decompose_essential needs at least one pair");
  std::vector<RigidMotion> out;
  for (const RigidMotion& c : essential_candidates(e)) {
    if (passes_cheirality(c, pairs)) out.push_back(c);
  }
  if (out.empty()) {
    fail(Errc::AllCheiralityFailed, "no factorization places all points in front of both cameras");
  }
  return out;
}

double epipolar_residual(const Mat3& e, const BearingPair& p) {
  const Vec3 e_q1 = e * p.q1();
  const Vec3 et_q2 = e.transpose() * p.q2();
  const double r = p.q2().dot(e_q1);
  // Gradient norms restricted to the tangent planes of the unit rays.
  const double den = e_q1.squaredNorm() + et_q2.squaredNorm() - 2.0 * r * r;
  if (!(den > 0.0)) return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(r) / std::sqrt(den);
}

double epipolar_residual(const EssentialMatrix& e, const BearingPair& p) {
  return epipolar_residual(e.matrix(), p);
}

}  // namespace relpose
