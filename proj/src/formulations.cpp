#include "relpose/formulations.hpp"

#include <cmath>

#include <Eigen/QR>

namespace relpose {

namespace {

constexpr double kRankTol = 1e-9;

bool distinct(const PointTriple& t) { return t.i != t.j && t.i != t.k && t.j != t.k; }

}  // namespace

RotationParams RotationParams::homogeneous(double sigma, const Vec3& u) {
  RotationParams p;
  p.sigma = sigma;
  p.u = u;
  return p;
}

Mat3 RotationParams::scaled_rotation() const {
  return 2.0 * (u * u.transpose() - sigma * skew(u)) + (sigma * sigma - u.squaredNorm()) * Mat3::Identity();
}

Vec9 vectorize(const Mat3& e) {
  Vec9 v;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v[3 * r + c] = e(r, c);
  return v;
}

Mat3 unvectorize(const Vec9& v) {
  Mat3 e;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) e(r, c) = v[3 * r + c];
  return e;
}

Vec9 epipolar_row(const BearingPair& p) {
  Vec9 row;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) row[3 * r + c] = p.q2()[r] * p.q1()[c];
  return row;
}

Vec9 trace_row() {
  Vec9 row = Vec9::Zero();
  row[0] = row[4] = row[8] = 1.0;
  return row;
}

Sir3Matrix build_sir3(const RotationParams& rot, std::span<const BearingPair> pairs, bool st0) {
  require(pairs.size() >= 3 || (st0 && pairs.size() >= 2), "SIR3 needs 3 pairs, or 2 with the zero-screw row");
  const Mat3 rt = rot.scaled_rotation();
  Sir3Matrix out;
  out.g.resize(static_cast<Eigen::Index>(pairs.size()) + (st0 ? 1 : 0), 3);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.g.row(static_cast<Eigen::Index>(i)) = (rt * pairs[i].q1()).cross(pairs[i].q2()).transpose();
  }
  if (st0) out.g.row(out.g.rows() - 1) = rot.u.transpose();
  return out;
}

Sir6Matrix build_sir6(const RotationParams& rot, std::span<const BearingPair> pairs, PointTriple tri) {
  require(distinct(tri), "SIR6 needs three distinct indices");
  require(tri.i < pairs.size() && tri.j < pairs.size() && tri.k < pairs.size(), "SIR6 index out of range");
  const Mat3 rt = rot.scaled_rotation();
  const BearingPair& pi = pairs[tri.i];
  const BearingPair& pj = pairs[tri.j];
  const BearingPair& pk = pairs[tri.k];
  Sir6Matrix out;
  out.m.setZero();
  for (int block = 0; block < 2; ++block) {
    const BearingPair& other = block == 0 ? pj : pk;
    const int row = 3 * block;
    const int col = 2 + 2 * block;
    out.m.block<3, 1>(row, 0) = -pi.q2();
    out.m.block<3, 1>(row, 1) = rt * pi.q1();
    out.m.block<3, 1>(row, col) = other.q2();
    out.m.block<3, 1>(row, col + 1) = -(rt * other.q1());
  }
  return out;
}

Eigen::RowVector2d sir2_row(const Mat3& r_tilde, const BearingPair& anchor, const BearingPair& other) {
  const Vec3 w = anchor.q1().cross(other.q1());
  const Vec3 z = other.q2().cross(anchor.q2());
  return {other.q2().dot(r_tilde * w), -z.dot(r_tilde * other.q1())};
}

Sir2Matrix build_sir2(const RotationParams& rot, std::span<const BearingPair> pairs, PointTriple tri,
                      bool st0) {
  require(tri.i != tri.j && (st0 || distinct(tri)), "SIR2 needs distinct indices");
  require(tri.i < pairs.size() && tri.j < pairs.size() && (st0 || tri.k < pairs.size()),
          "SIR2 index out of range");
  require(!st0 || rot.kind == RotationParams::Kind::Quaternion,
          "the zero-screw SIR2 row is defined for quaternion parameters");
  const Mat3 rt = rot.scaled_rotation();
  const BearingPair& anchor = pairs[tri.i];
  Sir2Matrix out;
  out.st0 = st0;
  out.f.row(0) = sir2_row(rt, anchor, pairs[tri.j]);
  if (st0) {
    out.f.row(1) << -rot.u.dot(anchor.q1()), rot.u.dot(anchor.q2());
  } else {
    out.f.row(1) = sir2_row(rt, anchor, pairs[tri.k]);
  }
  return out;
}

NullEBasis nulle_basis(std::span<const BearingPair> pairs, std::span<const Vec9> extra_rows) {
  const std::size_t n = pairs.size() + extra_rows.size();
  require(n >= 1 && n <= 8, "nullspace basis needs between 1 and 8 linear constraints");
  Eigen::Matrix<double, 9, Eigen::Dynamic> at(9, static_cast<Eigen::Index>(n));
  Eigen::Index col = 0;
  for (const BearingPair& p : pairs) at.col(col++) = epipolar_row(p);
  for (const Vec9& r : extra_rows) at.col(col++) = r.normalized();

  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 9, Eigen::Dynamic>> qr(at);
  const auto& r = qr.matrixQR();
  const double largest = std::abs(r(0, 0));
  const double smallest = std::abs(r(col - 1, col - 1));
  if (!(smallest > kRankTol * largest)) {
    fail(Errc::RankDeficient, "linear constraints on E are dependent");
  }
  const Eigen::Matrix<double, 9, 9> q = qr.householderQ();
  NullEBasis out;
  out.basis.reserve(9 - n);
  for (Eigen::Index c = col; c < 9; ++c) out.basis.push_back(unvectorize(q.col(c)));
  return out;
}

EssentialResiduals essential_constraint_residuals(const Mat3& e, std::optional<double> tau) {
  EssentialResiduals res;
  const Mat3 eet = e * e.transpose();
  const double tr_eet = eet.trace();
  res.det = e.determinant();
  res.cubic_niner = 2.0 * eet * e - tr_eet * e;
  res.trace = e.trace();
  if (!tau) return res;

  const double t = *tau;
  const double tr_e = res.trace;
  res.tau_residual = 0.5 * (t * t - 1.0) * tr_eet + (t + 1.0) * (e * e).trace() - t * tr_e * tr_e;

  const double tp = t + 1.0;
  const Mat3 a = e - e.transpose();
  std::array<double, 7> cubics{};
  constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int n = 0; n < 6; ++n) {
    const int i = perms[n][0];
    const int j = perms[n][1];
    const int k = perms[n][2];
    const double lin = a(k, i) * e(i, i) * e(j, k) + a(i, j) * e(k, k) * e(i, i) -
                       a(j, k) * (e(k, k) * e(i, k) - e(k, i) * e(j, j) + e(k, j) * e(j, i) + e(i, j) * e(j, k));
    cubics[n] = lin * tp + 2.0 * a(i, j) * a(j, k) * a(j, k);
  }
  const double lin = a(0, 1) * a(1, 2) * e(2, 0) + a(0, 1) * a(2, 0) * e(2, 1) + a(0, 1) * e(0, 1) * e(2, 2) +
                     a(1, 2) * a(2, 0) * e(1, 0) + a(1, 2) * e(0, 0) * e(1, 2) + a(2, 0) * e(1, 1) * e(2, 0);
  cubics[6] = lin * tp + 2.0 * a(0, 1) * a(1, 2) * a(2, 0);
  res.st0_cubics = cubics;
  return res;
}

}  // namespace relpose
