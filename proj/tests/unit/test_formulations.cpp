#include <cmath>

#include <gtest/gtest.h>

#include "relpose/formulations.hpp"
#include "support.hpp"

namespace relpose {
namespace {

using test::Rng;

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

std::vector<BearingPair> random_pairs(Rng& rng, int n) {
  std::vector<BearingPair> out;
  for (int i = 0; i < n; ++i) out.emplace_back(rng.normal3(), rng.normal3());
  return out;
}

RotationParams truth_params(const Mat3& r) { return rotation_to_quat(RotationMatrix(r)); }

TEST(RotationParams, ScaledRotationIsScaleTimesRotation) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const RotationParams q = RotationParams::homogeneous(rng.normal(), rng.normal3());
    const Mat3 rt = q.scaled_rotation();
    const Mat3 r = rt / q.scale();
    EXPECT_LT((r.transpose() * r - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);

    const CayleyVector v{rng.normal3()};
    const RotationParams c(v);
    EXPECT_LT((c.scaled_rotation() / c.scale() - cayley_to_rotation(v).matrix()).norm(), 1e-12);
  }
}

TEST(Sir3, RowsAreRotatedRayCrossSecondRay) {
  Rng rng(2);
  const auto pairs = random_pairs(rng, 3);
  const RotationParams q = RotationParams::homogeneous(0.3, Vec3(0.1, -0.7, 0.2));
  const Sir3Matrix g = build_sir3(q, pairs, false);
  ASSERT_EQ(g.g.rows(), 3);
  for (int i = 0; i < 3; ++i) {
    const Vec3 row = (q.scaled_rotation() * pairs[i].q1()).cross(pairs[i].q2());
    EXPECT_LT((g.g.row(i).transpose() - row).norm(), 1e-14);
  }
}

TEST(Sir3, DeterminantVanishesAtTruth) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const test::Synth s = test::random_general(3, rng);
    EXPECT_LT(std::abs(build_sir3(truth_params(s.r), s.pairs, false).g.determinant()), 1e-9);
    const auto v = rotation_to_cayley(RotationMatrix(s.r));
    ASSERT_TRUE(v.has_value());
    EXPECT_LT(std::abs(build_sir3(RotationParams(*v), s.pairs, false).g.determinant()), 1e-9);
  }
}

TEST(Sir3, ZeroScrewStackHasRankTwo) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const test::Synth s = test::random_planar(3, rng);
    const Sir3Matrix g = build_sir3(truth_params(s.r), s.pairs, true);
    ASSERT_EQ(g.g.rows(), 4);
    const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::MatrixXd>(g.g).singularValues();
    EXPECT_GT(sv[1], 1e-6 * sv[0]);
    EXPECT_LT(sv[2], 1e-10 * sv[0]);
  }
}

TEST(Sir3, NonSolutionIsGenericallyNonsingular) {
  Rng rng(5);
  const test::Synth s = test::random_general(3, rng);
  const RotationParams wrong = RotationParams::homogeneous(rng.normal(), rng.normal3());
  EXPECT_GT(std::abs(build_sir3(wrong, s.pairs, false).g.determinant()), 1e-6);
}

TEST(Sir3, TooFewPairsRejected) {
  Rng rng(6);
  const auto pairs = random_pairs(rng, 2);
  EXPECT_THROW(build_sir3(RotationParams{}, std::span(pairs).first(1), true), Error);
  EXPECT_THROW(build_sir3(RotationParams{}, pairs, false), Error);
}

TEST(Sir6, DeterminantVanishesAtTruth) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const test::Synth s = test::random_general(3, rng);
    const RotationParams q = truth_params(s.r);
    EXPECT_LT(std::abs(build_sir6(q, s.pairs, {0, 1, 2}).m.determinant()), 1e-9);
  }
}

TEST(Sir6, DeterminantMatchesSir3UpToSign) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto pairs = random_pairs(rng, 3);
    const RotationParams q = RotationParams::homogeneous(rng.normal(), rng.normal3());
    const double g = build_sir3(q, pairs, false).g.determinant();
    const double m = build_sir6(q, pairs, {0, 1, 2}).m.determinant();
    EXPECT_LT(rel_diff(std::abs(g), std::abs(m)), 1e-8);
  }
}

TEST(Sir6, RepeatedIndicesRejected) {
  Rng rng(9);
  const auto pairs = random_pairs(rng, 3);
  EXPECT_THROW(build_sir6(RotationParams{}, pairs, {0, 0, 2}), Error);
  EXPECT_THROW(build_sir6(RotationParams{}, pairs, {0, 1, 3}), Error);
}

TEST(Sir2, DeterminantVanishesAtTruth) {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    const test::Synth s = test::random_general(3, rng);
    const double det = build_sir2(truth_params(s.r), s.pairs, {0, 1, 2}, false).f.determinant();
    EXPECT_LT(std::abs(det), 1e-10);
  }
}

TEST(Sir2, ZeroScrewDeterminantVanishesAtPlanarTruth) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const test::Synth s = test::random_planar(2, rng);
    const Sir2Matrix f = build_sir2(truth_params(s.r), s.pairs, {0, 1, 2}, true);
    EXPECT_TRUE(f.st0);
    EXPECT_LT(std::abs(f.f.determinant()), 1e-10);
  }
}

TEST(Sir2, FactorsSir3DeterminantForQuaternions) {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto pairs = random_pairs(rng, 3);
    const RotationParams q = RotationParams::homogeneous(rng.normal(), rng.normal3());
    const double g = build_sir3(q, pairs, false).g.determinant();
    const double f = build_sir2(q, pairs, {0, 1, 2}, false).f.determinant();
    EXPECT_LT(rel_diff(std::abs(g), q.scale() * std::abs(f)), 1e-8);
  }
}

TEST(Sir2, FactorsSir3DeterminantForCayleyVectors) {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto pairs = random_pairs(rng, 3);
    const CayleyVector v{rng.normal3()};
    const RotationParams c(v);
    const double g = build_sir3(c, pairs, false).g.determinant();
    const double f = build_sir2(c, pairs, {0, 1, 2}, false).f.determinant();
    EXPECT_LT(rel_diff(std::abs(g), (v.v.squaredNorm() + 1.0) * std::abs(f)), 1e-8);
  }
}

TEST(Sir2, ZeroScrewNeedsQuaternionParameters) {
  Rng rng(14);
  const auto pairs = random_pairs(rng, 3);
  EXPECT_THROW(build_sir2(RotationParams(CayleyVector{Vec3(0.1, 0.2, 0.3)}), pairs, {0, 1, 2}, true), Error);
}

TEST(Vectorize, RowMajorAndEpipolarRow) {
  Mat3 e;
  e << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Vec9 v = vectorize(e);
  EXPECT_EQ(v[1], 2.0);
  EXPECT_EQ(v[3], 4.0);
  EXPECT_EQ(unvectorize(v), e);
  const BearingPair p(Vec3(0.2, -0.1, 1.0), Vec3(-0.3, 0.4, 1.0));
  EXPECT_NEAR(epipolar_row(p).dot(v), p.q2().dot(e * p.q1()), 1e-14);
}

TEST(TraceRow, SelectsDiagonal) {
  EXPECT_DOUBLE_EQ(trace_row().dot(vectorize(Mat3::Identity())), 3.0);
  EXPECT_DOUBLE_EQ(trace_row().dot(vectorize(skew(Vec3(1.0, -2.0, 3.0)))), 0.0);
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const test::Synth s = test::random_planar(0, rng);
    const Mat3 e = essential_from_pose(RotationMatrix(s.r), s.t).matrix();
    EXPECT_LT(std::abs(trace_row().dot(vectorize(e))), 1e-12);
  }
}

TEST(NulleBasis, FivePairsGiveFourOrthonormalMatrices) {
  Rng rng(16);
  const test::Synth s = test::random_general(5, rng);
  const NullEBasis b = nulle_basis(s.pairs);
  ASSERT_EQ(b.basis.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR((b.basis[i].array() * b.basis[j].array()).sum(), i == j ? 1.0 : 0.0, 1e-12);
    }
    for (const BearingPair& p : s.pairs) EXPECT_LT(std::abs(p.q2().dot(b.basis[i] * p.q1())), 1e-12);
  }
  // The true essential matrix lies in the span.
  const Vec9 e = vectorize(essential_from_pose(RotationMatrix(s.r), s.t).matrix());
  Vec9 proj = Vec9::Zero();
  for (const Mat3& m : b.basis) proj += vectorize(m).dot(e) * vectorize(m);
  EXPECT_LT((proj - e).norm(), 1e-10);
}

TEST(NulleBasis, FourPairsPlusTraceRow) {
  Rng rng(17);
  const test::Synth s = test::random_planar(4, rng);
  const Vec9 extra[] = {trace_row()};
  const NullEBasis b = nulle_basis(s.pairs, extra);
  ASSERT_EQ(b.basis.size(), 4u);
  for (const Mat3& m : b.basis) EXPECT_LT(std::abs(m.trace()), 1e-12);
}

TEST(NulleBasis, DuplicatePairIsRankDeficient) {
  Rng rng(18);
  test::Synth s = test::random_general(5, rng);
  s.pairs[4] = s.pairs[1];
  try {
    nulle_basis(s.pairs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RankDeficient);
  }
}

TEST(EssentialResiduals, ValidEssentialWithMatchingTrace) {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    const Mat3 r = test::random_rotation_matrix(rng);
    const Mat3 e = essential_from_pose(RotationMatrix(r), rng.normal3()).matrix();
    const EssentialResiduals res = essential_constraint_residuals(e, r.trace());
    EXPECT_LT(std::abs(res.det), 1e-9);
    EXPECT_LT(res.cubic_niner.cwiseAbs().maxCoeff(), 1e-9);
    ASSERT_TRUE(res.tau_residual.has_value());
    EXPECT_LT(std::abs(*res.tau_residual), 1e-9);
  }
}

TEST(EssentialResiduals, ZeroScrewCubics) {
  Rng rng(20);
  for (int i = 0; i < 200; ++i) {
    const test::Synth s = test::random_planar(0, rng, 0.01, 3.0);
    const Mat3 e = essential_from_pose(RotationMatrix(s.r), s.t).matrix();
    const EssentialResiduals res = essential_constraint_residuals(e, s.r.trace());
    EXPECT_LT(std::abs(res.trace), 1e-12);
    ASSERT_TRUE(res.st0_cubics.has_value());
    for (double c : *res.st0_cubics) EXPECT_LT(std::abs(c), 1e-8);
  }
}

TEST(EssentialResiduals, RandomMatrixViolatesConstraints) {
  Mat3 m;
  m << 0.3, -1.2, 0.5, 0.8, 0.1, -0.4, 0.2, 0.9, 1.1;
  const EssentialResiduals res = essential_constraint_residuals(m);
  EXPECT_GT(std::abs(res.det), 1e-3);
  EXPECT_GT(res.cubic_niner.cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_FALSE(res.tau_residual.has_value());
}

}  // namespace
}  // namespace relpose
