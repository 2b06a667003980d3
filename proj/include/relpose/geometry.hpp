#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relpose/error.hpp"

namespace relpose {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Below this rotation angle (radians) the rotation axis is considered
// undefined.
inline constexpr double kAngleEpsilon = 1e-6;

Mat3 skew(const Vec3& a);

// Unit quaternion [sigma u^T] with the rotation convention
//   R = 2 (u u^T - sigma [u]_x) + (sigma^2 - |u|^2) I.
// Under this convention R rotates by -theta about the right-handed axis
// u/|u|, i.e. it is the frame (passive) rotation about u/|u|.
// Stored canonically: sigma >= 0, and when sigma == 0 the first nonzero
// component of u is positive.
struct UnitQuaternion {
  double sigma = 1.0;
  Vec3 u = Vec3::Zero();

  // Normalizes (sigma, u) and applies the canonical sign.
  static UnitQuaternion from_components(double sigma, const Vec3& u);
  // sigma = cos(angle/2), u = sin(angle/2) axis/|axis|.
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
};

struct CayleyVector {
  Vec3 v = Vec3::Zero();
};

class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}
  // Throws PreconditionViolation unless m^T m = I and det m = 1 within 1e-10.
  explicit RotationMatrix(const Mat3& m);

  static RotationMatrix identity() { return RotationMatrix(); }
  // Nearest rotation in Frobenius norm (SVD projection). Used for inputs that
  // are orthonormal only up to accumulated rounding.
  static RotationMatrix project(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  RotationMatrix transpose() const;
  RotationMatrix operator*(const RotationMatrix& other) const;
  Vec3 operator*(const Vec3& x) const { return m_ * x; }

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

// Rigid motion H = [R t; 0 1]. Maps coordinates in the first camera frame to
// the second: X2 = R X1 + t.
struct RigidMotion {
  RotationMatrix rotation;
  Vec3 translation = Vec3::Zero();

  static RigidMotion identity() { return {}; }
  Mat4 matrix() const;
  RigidMotion inverse() const;
  RigidMotion operator*(const RigidMotion& other) const;
};

struct Se3Invariants {
  double theta = 0.0;
  double delta = 0.0;
};

// Essential matrix E = [t]_x R, stored with Frobenius norm sqrt(2).
class EssentialMatrix {
 public:
  // Rescales m to norm sqrt(2). Throws PreconditionViolation if m is zero or
  // non-finite. The rank/singular-value conditions are not enforced; see
  // essential_constraint_residuals().
  explicit EssentialMatrix(const Mat3& m);

  const Mat3& matrix() const { return e_; }

 private:
  Mat3 e_;
};

// Calibrated ray correspondence; both rays are stored with unit length.
class BearingPair {
 public:
  // Throws PreconditionViolation if either ray is zero or non-finite.
  BearingPair(const Vec3& q1, const Vec3& q2);

  const Vec3& q1() const { return q1_; }
  const Vec3& q2() const { return q2_; }

 private:
  Vec3 q1_;
  Vec3 q2_;
};

RotationMatrix quat_to_rotation(const UnitQuaternion& q);
// Inverse of quat_to_rotation, canonical sign.
UnitQuaternion rotation_to_quat(const RotationMatrix& r);

RotationMatrix cayley_to_rotation(const CayleyVector& v);
// No Cayley vector exists for rotations by pi; returns nullopt for angles
// within 1e-12 of pi.
std::optional<CayleyVector> rotation_to_cayley(const RotationMatrix& r);

// quat_to_rotation(UnitQuaternion::from_axis_angle(axis, angle)).
RotationMatrix axis_angle_rotation(const Vec3& axis, double angle);

double rotation_angle(const RotationMatrix& r);

// Unit axis u/|u| of the canonical quaternion. Throws DegenerateAxis when the
// rotation angle is at most kAngleEpsilon.
Vec3 rotation_axis(const RotationMatrix& r);

double screw_translation(const RigidMotion& h);
Se3Invariants se3_invariants(const RigidMotion& h);

// X^-1 H X.
RigidMotion conjugate(const RigidMotion& h, const RigidMotion& x);

// Throws ZeroTranslation when |t| == 0.
EssentialMatrix essential_from_pose(const RotationMatrix& r, const Vec3& t);
EssentialMatrix essential_from_motion(const RigidMotion& h);

// Depths (d1, d2) with d2 q2 = d1 R q1 + t, by least squares.
Eigen::Vector2d triangulate_depths(const RigidMotion& h, const BearingPair& p);
bool passes_cheirality(const RigidMotion& h, std::span<const BearingPair> pairs);

// The four (R, +-t) factorizations of e with |t| = 1, in a fixed order:
// (R1, t), (R1, -t), (R2, t), (R2, -t), where R1 and R2 form the twisted pair.
std::vector<RigidMotion> essential_candidates(const EssentialMatrix& e);

// Candidates from essential_candidates() for which every pair triangulates in
// front of both cameras. Throws PreconditionViolation on an empty pair list
// and AllCheiralityFailed when no candidate survives.
std::vector<RigidMotion> decompose_essential(const EssentialMatrix& e,
                                             std::span<const BearingPair> pairs);

// Sampson distance of q2^T E q1 measured on the tangent planes of the two
// unit rays (normalized-ray units, roughly radians).
double epipolar_residual(const EssentialMatrix& e, const BearingPair& p);
double epipolar_residual(const Mat3& e, const BearingPair& p);

}  // namespace relpose
