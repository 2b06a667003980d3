#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "relpose/geometry.hpp"

namespace relpose {

using Vec9 = Eigen::Matrix<double, 9, 1>;

// Rotation parameters entering the polynomial formulations. The rotation is
// the homogeneous quaternion form
//   R~ = 2 (u u^T - sigma [u]_x) + (sigma^2 - |u|^2) I = (|u|^2 + sigma^2) R,
// which is polynomial in the parameters. A Cayley vector v maps to sigma = 1,
// u = v, so R~ = (|v|^2 + 1) R.
struct RotationParams {
  enum class Kind { Quaternion, Cayley };

  Kind kind = Kind::Quaternion;
  double sigma = 1.0;
  Vec3 u = Vec3::Zero();

  RotationParams() = default;
  RotationParams(const UnitQuaternion& q) : kind(Kind::Quaternion), sigma(q.sigma), u(q.u) {}
  RotationParams(const CayleyVector& v) : kind(Kind::Cayley), sigma(1.0), u(v.v) {}
  // Arbitrary (not necessarily unit) quaternion parameters.
  static RotationParams homogeneous(double sigma, const Vec3& u);

  // |u|^2 + sigma^2 for quaternions, |v|^2 + 1 for Cayley vectors.
  double scale() const { return u.squaredNorm() + sigma * sigma; }
  Mat3 scaled_rotation() const;
};

struct PointTriple {
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 2;
};

// Rows are (R~ q1_i x q2_i)^T, the coefficients of t in q2_i^T [t]_x R~ q1_i,
// optionally followed by u^T for the zero-screw constraint u^T t = 0.
struct Sir3Matrix {
  Eigen::Matrix<double, Eigen::Dynamic, 3> g;
};

// Built from d2 q2 = d1 R~ q1 + t for points i, j, k; unknowns are
// [d2_i d1_i d2_j d1_j d2_k d1_k].
struct Sir6Matrix {
  Eigen::Matrix<double, 6, 6> m;
};

// Point i is placed at the world origin so that t' = l q1_i and t'' = m q2_i;
// the epipolar constraint of point j then reads F_ij [l m]^T = 0. Without the
// zero-screw flag the rows are F_ij and F_ik; with it the rows are F_ij and
// [-u^T q1_i  u^T q2_i].
struct Sir2Matrix {
  Eigen::Matrix2d f;
  bool st0 = false;
};

// Orthonormal (Frobenius) basis of the 3x3 matrices satisfying the stacked
// linear constraints.
struct NullEBasis {
  std::vector<Mat3> basis;
};

// Row-major vectorization used for linear constraints on E.
Vec9 vectorize(const Mat3& e);
Mat3 unvectorize(const Vec9& v);

// kron(q2, q1): epipolar_row(p).dot(vectorize(E)) == q2^T E q1.
Vec9 epipolar_row(const BearingPair& p);
// Selects E11 + E22 + E33.
Vec9 trace_row();

// Requires >= 3 pairs, or >= 2 with st0.
Sir3Matrix build_sir3(const RotationParams& rot, std::span<const BearingPair> pairs, bool st0);
Sir6Matrix build_sir6(const RotationParams& rot, std::span<const BearingPair> pairs, PointTriple triple);
// st0 requires quaternion parameters; with st0 only indices i and j are used.
Sir2Matrix build_sir2(const RotationParams& rot, std::span<const BearingPair> pairs, PointTriple triple,
                      bool st0);

// The two entries of F_ij for the homogeneous rotation r_tilde.
Eigen::RowVector2d sir2_row(const Mat3& r_tilde, const BearingPair& anchor, const BearingPair& other);

// Requires |pairs| + |extra_rows| <= 8. Throws RankDeficient when the
// constraint rows are dependent (smallest pivot below 1e-9 of the largest).
NullEBasis nulle_basis(std::span<const BearingPair> pairs, std::span<const Vec9> extra_rows = {});

struct EssentialResiduals {
  double det = 0.0;
  // 2 E E^T E - tr(E E^T) E
  Mat3 cubic_niner = Mat3::Zero();
  // 1/2 (tau^2 - 1) tr(E E^T) + (tau + 1) tr(E^2) - tau tr^2(E), tau = tr R.
  std::optional<double> tau_residual;
  double trace = 0.0;
  // The seven zero-screw cubics in E and A = E - E^T with tau' = tau + 1: six
  // for the ordered index triples (i, j, k) followed by the symmetric one.
  std::optional<std::array<double, 7>> st0_cubics;
};

EssentialResiduals essential_constraint_residuals(const Mat3& e, std::optional<double> tau = std::nullopt);

}  // namespace relpose
