#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "relpose/solvers.hpp"
#include "support.hpp"

namespace relpose {
namespace {

using test::Rng;
constexpr double kDeg = std::numbers::pi / 180.0;

Errc code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::PreconditionViolation;
}

TEST(SolverKind, NamesRoundTrip) {
  for (SolverKind k : {SolverKind::FiveP, SolverKind::FourPSt0, SolverKind::ThreePRaSt0, SolverKind::TwoPTo}) {
    EXPECT_EQ(parse_solver_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(SolverKind::ThreePRaSt0), "3p-ra-st0");
  EXPECT_EQ(code_of([] { parse_solver_kind("6p"); }), Errc::ParseError);
  EXPECT_EQ(sample_size(SolverKind::FiveP), 5);
  EXPECT_EQ(sample_size(SolverKind::FourPSt0), 4);
  EXPECT_EQ(sample_size(SolverKind::ThreePRaSt0), 3);
  EXPECT_EQ(sample_size(SolverKind::TwoPTo), 2);
  EXPECT_EQ(max_solutions(SolverKind::ThreePRaSt0), 12);
}

TEST(Solve5p, RecoversGeneralMotion) {
  Rng rng(1);
  int recovered = 0;
  for (int i = 0; i < 200; ++i) {
    const test::Synth s = test::random_general(5, rng);
    const SolutionSet set = solve_5p(s.pairs);
    EXPECT_LE(set.motions.size(), 10u);
    EXPECT_EQ(set.polynomial_degree, 10);
    recovered += test::min_rotation_distance(set.motions, s.r) < 1e-6;
    for (std::size_t k = 0; k < set.motions.size(); ++k) {
      for (const BearingPair& p : s.pairs) EXPECT_LT(epipolar_residual(set.essentials[k], p), 1e-8);
    }
  }
  EXPECT_GE(recovered, 198);
}

TEST(Solve5p, WrongPairCountRejected) {
  Rng rng(2);
  const test::Synth s = test::random_general(6, rng);
  EXPECT_EQ(code_of([&] { solve_5p(s.pairs); }), Errc::PreconditionViolation);
}

TEST(Solve5p, PointsOnAPlaneThroughBothCentresStillYieldCandidates) {
  // All points on the plane containing the baseline: the essential matrix is
  // not determined, and the solver may return anything or fail cleanly.
  const Mat3 r = test::eigen_rotation(Vec3::UnitY(), 0.2);
  const Vec3 t = Vec3::UnitX();
  std::vector<BearingPair> pairs;
  for (double x : {-1.0, -0.5, 0.2, 0.7, 1.3}) {
    const Vec3 p(x, 0.0, 4.0 + x);
    pairs.emplace_back(p, r * p + t);
  }
  try {
    const SolutionSet set = solve_5p(pairs);
    EXPECT_LE(set.motions.size(), 10u);
  } catch (const Error&) {
    SUCCEED();
  }
}

TEST(Solve4pSt0, RecoversPlanarMotionWithZeroTrace) {
  Rng rng(3);
  int recovered = 0;
  for (int i = 0; i < 200; ++i) {
    const test::Synth s = test::random_planar(4, rng);
    const SolutionSet set = solve_4p_st0(s.pairs);
    EXPECT_LE(set.motions.size(), 10u);
    recovered += test::min_rotation_distance(set.motions, s.r) < 1e-6;
    for (const EssentialMatrix& e : set.essentials) EXPECT_LT(std::abs(e.matrix().trace()), 1e-10);
  }
  EXPECT_GE(recovered, 198);
}

TEST(Solve4pSt0, HalfTurnWithScrewAlsoHasZeroTrace) {
  // tr E vanishes for theta = pi whatever the screw translation, so the
  // zero-trace row alone cannot exclude such motions.
  const Mat3 r = test::eigen_rotation(Vec3(0.2, 1.0, -0.1), std::numbers::pi);
  const Vec3 axis = Vec3(0.2, 1.0, -0.1).normalized();
  const Vec3 t = (axis + Vec3(0.3, 0.0, 0.4)).normalized();
  EXPECT_NEAR(essential_from_pose(RotationMatrix(r), t).matrix().trace(), 0.0, 1e-12);
  EXPECT_GT(std::abs(axis.dot(t)), 0.5);
}

TEST(TemplateA, UnitUpperTriangularLeadingBlock) {
  Rng rng(4);
  const test::Synth s = test::random_planar(3, rng, 0.2, 1.5);
  const TemplateA a = build_3prast0_template_a(s.pairs, rotation_to_quat(RotationMatrix(s.r)).sigma);
  const Eigen::Matrix<double, 10, 10> u = a.a.topLeftCorner<10, 10>();
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(u(i, i), 1.0);
    for (int j = 0; j < i; ++j) EXPECT_EQ(u(i, j), 0.0);
  }
}

TEST(TemplateA, TrueQuaternionSatisfiesEveryRow) {
  Rng rng(5);
  const auto& order = TemplateA::monomial_order();
  for (int trial = 0; trial < 50; ++trial) {
    const test::Synth s = test::random_planar(3, rng, 0.2, 1.5);
    const UnitQuaternion q = rotation_to_quat(RotationMatrix(s.r));
    const TemplateA a = build_3prast0_template_a(s.pairs, q.sigma);
    Eigen::Matrix<double, 35, 1> mono;
    for (int c = 0; c < 35; ++c) {
      mono[c] = std::pow(q.u.x(), order[c].alpha) * std::pow(q.u.y(), order[c].beta) *
                std::pow(q.u.z(), order[c].gamma);
    }
    EXPECT_LT((a.a * mono).cwiseAbs().maxCoeff(), 1e-10);
    const TemplateB b = reduce_template(a);
    Eigen::Matrix<double, 25, 1> tail = mono.tail<25>();
    EXPECT_LT((b.b * tail).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(TemplateA, ZeroAngleIsDegenerate) {
  Rng rng(6);
  const test::Synth s = test::random_planar(3, rng);
  EXPECT_EQ(code_of([&] { build_3prast0_template_a(s.pairs, 1.0); }), Errc::DegenerateInput);
  EXPECT_EQ(code_of([&] { solve_3p_ra_st0(s.pairs, 0.0); }), Errc::DegenerateInput);
}

TEST(Solve3pRaSt0, RecoversPlanarMotionAndHonoursConstraints) {
  Rng rng(7);
  int recovered = 0;
  for (int i = 0; i < 200; ++i) {
    const test::Synth s = test::random_planar(3, rng, 0.05, 1.0);
    const double theta = rotation_angle(RotationMatrix(s.r));
    const SolutionSet set = solve_3p_ra_st0(s.pairs, theta);
    EXPECT_LE(set.motions.size(), 12u);
    EXPECT_EQ(set.polynomial_degree, 12);
    recovered += test::min_rotation_distance(set.motions, s.r) < 1e-6;
    for (const RigidMotion& m : set.motions) {
      EXPECT_NEAR(rotation_angle(m.rotation), theta, 1e-7);
      EXPECT_LT(std::abs(screw_translation(m)), 1e-7);
    }
  }
  EXPECT_GE(recovered, 198);
}

TEST(Solve3pRaSt0, WrongAngleExcludesTruth) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const test::Synth s = test::random_planar(3, rng, 0.3, 1.5);
    const double theta = rotation_angle(RotationMatrix(s.r)) + 10.0 * kDeg;
    try {
      const SolutionSet set = solve_3p_ra_st0(s.pairs, theta);
      EXPECT_GT(test::min_rotation_distance(set.motions, s.r), 1e-3);
    } catch (const Error&) {
      // No consistent motion at all is also acceptable.
    }
  }
}

TEST(Solve2pTo, RecoversPureTranslation) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const test::Synth s = test::synthesize(Mat3::Identity(), rng.unit3(), 2, rng);
    const SolutionSet set = solve_2p_to(s.pairs);
    ASSERT_EQ(set.motions.size(), 1u);
    EXPECT_LT((set.motions[0].rotation.matrix() - Mat3::Identity()).norm(), 1e-15);
    EXPECT_LT((set.motions[0].translation - s.t.normalized()).norm(), 1e-8);
  }
}

TEST(Solve2pTo, IdenticalPairsAreDegenerate) {
  Rng rng(10);
  test::Synth s = test::synthesize(Mat3::Identity(), Vec3(0.1, 0.2, 1.0), 2, rng);
  s.pairs[1] = s.pairs[0];
  EXPECT_EQ(code_of([&] { solve_2p_to(s.pairs); }), Errc::DegenerateInput);
}

TEST(Solve2pTo, RotatingMotionStillReturnsAModel) {
  Rng rng(11);
  const test::Synth s = test::random_general(2, rng, 0.3, 0.6);
  const SolutionSet set = solve_2p_to(s.pairs);
  ASSERT_EQ(set.motions.size(), 1u);
  EXPECT_NEAR(set.motions[0].translation.norm(), 1.0, 1e-12);
}

TEST(SolveMinimal, DispatchesOnKind) {
  Rng rng(12);
  const test::Synth s = test::random_planar(5, rng);
  const double theta = rotation_angle(RotationMatrix(s.r));
  EXPECT_LT(test::min_rotation_distance(solve_minimal(SolverKind::FiveP, s.pairs).motions, s.r), 1e-6);
  EXPECT_LT(test::min_rotation_distance(solve_minimal(SolverKind::FourPSt0, std::span(s.pairs).first(4)).motions, s.r),
            1e-6);
  EXPECT_LT(test::min_rotation_distance(
                solve_minimal(SolverKind::ThreePRaSt0, std::span(s.pairs).first(3), theta).motions, s.r),
            1e-6);
}

TEST(RecoverScale, ScalesTranslationToKnownScrew) {
  const Mat3 r = test::eigen_rotation(Vec3::UnitZ(), 0.4);
  const Vec3 axis = rotation_axis(RotationMatrix(r));
  // 0.5 along the axis plus an orthogonal part.
  const Vec3 t = 0.5 * axis + Vec3(0.3, -0.2, 0.0);
  const RigidMotion out = recover_scale({RotationMatrix(r), t}, 2.0);
  EXPECT_NEAR(screw_translation(out), 2.0, 1e-12);
  EXPECT_LT((out.translation - 4.0 * t).norm(), 1e-12);
  EXPECT_NEAR(out.translation.dot(axis), 2.0, 1e-12);
}

TEST(RecoverScale, RefusesZeroDeltaPlanarMotionAndIdentity) {
  const RotationMatrix r(test::eigen_rotation(Vec3::UnitZ(), 0.4));
  EXPECT_EQ(code_of([&] { recover_scale({r, Vec3(0.1, 0.2, 0.5)}, 0.0); }), Errc::ZeroScrewDelta);
  EXPECT_EQ(code_of([&] { recover_scale({r, Vec3(1.0, 0.0, 0.0)}, 1.0); }), Errc::ZeroScrewDirection);
  EXPECT_EQ(code_of([&] { recover_scale({RotationMatrix::identity(), Vec3(0, 0, 1)}, 1.0); }),
            Errc::DegenerateAxis);
}

}  // namespace
}  // namespace relpose
