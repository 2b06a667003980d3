#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "relpose/robust.hpp"
#include "relpose/synthetic.hpp"
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

TEST(RotationError, KnownValuesAndSymmetry) {
  const RotationMatrix i = RotationMatrix::identity();
  const RotationMatrix z10(test::eigen_rotation(Vec3::UnitZ(), 10.0 * kDeg));
  EXPECT_EQ(rotation_error(i, i), 0.0);
  EXPECT_NEAR(rotation_error(z10, i), 10.0, 1e-12);
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const RotationMatrix a(test::random_rotation_matrix(rng));
    const RotationMatrix b(test::random_rotation_matrix(rng));
    EXPECT_NEAR(rotation_error(a, b), rotation_error(b, a), 1e-12);
  }
}

TEST(TranslationDirectionError, KnownValues) {
  EXPECT_NEAR(translation_direction_error(Vec3(1, 2, 3), Vec3(1, 2, 3)), 0.0, 1e-6);
  EXPECT_NEAR(translation_direction_error(Vec3::UnitX(), Vec3::UnitY()), 90.0, 1e-12);
  EXPECT_NEAR(translation_direction_error(Vec3(2, 4, 6), Vec3(1, 2, 3)), 0.0, 1e-6);
  EXPECT_NEAR(translation_direction_error(-Vec3::UnitZ(), Vec3::UnitZ()), 180.0, 1e-12);
  EXPECT_THROW(translation_direction_error(Vec3::Zero(), Vec3::UnitZ()), Error);
}

TEST(NumericalAccuracy, KnownValues) {
  const RotationMatrix z1(test::eigen_rotation(Vec3::UnitZ(), 1.0 * kDeg));
  SolutionSet set;
  set.motions.push_back({z1, Vec3::UnitX()});
  EXPECT_NEAR(numerical_accuracy(set, RotationMatrix::identity()), 2.0 * std::sqrt(2.0) * std::sin(0.5 * kDeg),
              1e-14);
  EXPECT_NEAR(numerical_accuracy(set, RotationMatrix::identity()), 0.0247, 5e-5);
  set.motions.push_back({RotationMatrix::identity(), Vec3::UnitX()});
  EXPECT_LT(numerical_accuracy(set, RotationMatrix::identity()), 1e-12);
  EXPECT_EQ(code_of([] { numerical_accuracy(SolutionSet{}, RotationMatrix::identity()); }), Errc::EmptySolutionSet);
}

TEST(AdaptiveIterationBound, StandardFormula) {
  // log(0.01) / log(1 - 0.5^5) = 145.05...
  EXPECT_EQ(adaptive_iteration_bound(0.5, 5, 0.99, 10000), 146);
  EXPECT_EQ(adaptive_iteration_bound(1.0, 5, 0.99, 10000), 1);
  EXPECT_EQ(adaptive_iteration_bound(0.0, 5, 0.99, 777), 777);
  EXPECT_EQ(adaptive_iteration_bound(0.05, 5, 0.99, 500), 500);
}

TEST(InlierMask, ThresholdsResiduals) {
  Rng rng(2);
  test::Synth s = test::random_general(10, rng);
  s.pairs[3] = BearingPair(s.pairs[3].q1(), Vec3(0.5, -0.4, 1.0));
  const auto mask = inlier_mask({RotationMatrix(s.r), s.t}, s.pairs, 1e-6);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(mask[i], i != 3);
}

ScenePair scene(std::uint64_t seed, double noise, double outliers, double rotation_std = 5.0) {
  SyntheticConfig cfg;
  cfg.pixel_noise_std = noise;
  cfg.outlier_ratio = outliers;
  cfg.rotation_angle_std = rotation_std;
  cfg.min_rotation_angle = rotation_std > 0.0 ? 1.0 * kDeg : 0.0;
  cfg.seed = seed;
  return generate_scene(cfg);
}

TEST(Ransac, NoiselessSceneWithOutliers) {
  for (SolverKind kind : {SolverKind::FiveP, SolverKind::FourPSt0, SolverKind::ThreePRaSt0}) {
    const ScenePair s = scene(3, 0.0, 0.3);
    RansacConfig cfg;
    cfg.solver_kind = kind;
    cfg.threshold = 1e-6;
    cfg.seed = 9;
    const RansacResult r = ransac_estimate(s.pairs, cfg, s.measured_theta);
    EXPECT_EQ(r.inlier_count, 70) << to_string(kind);
    EXPECT_EQ(r.inlier_mask, s.inlier_mask_truth) << to_string(kind);
    EXPECT_LT(rotation_error(r.motion.rotation, s.truth.rotation), 1e-6);
    EXPECT_LT(translation_direction_error(r.motion.translation, s.truth.translation), 1e-5);
    EXPECT_FALSE(r.used_degenerate_fallback);
    EXPECT_LT(r.iterations_used, cfg.max_iterations);
  }
}

TEST(Ransac, DeterministicForFixedSeed) {
  const ScenePair s = scene(4, 0.5, 0.3);
  RansacConfig cfg;
  cfg.solver_kind = SolverKind::FourPSt0;
  cfg.seed = 77;
  const RansacResult a = ransac_estimate(s.pairs, cfg);
  const RansacResult b = ransac_estimate(s.pairs, cfg);
  EXPECT_EQ(a.motion.matrix(), b.motion.matrix());
  EXPECT_EQ(a.inlier_mask, b.inlier_mask);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
}

TEST(Ransac, AllOutliersYieldNoModel) {
  Rng rng(5);
  std::vector<BearingPair> pairs;
  for (int i = 0; i < 20; ++i) pairs.emplace_back(rng.unit3(), rng.unit3());
  for (SolverKind kind : {SolverKind::FiveP, SolverKind::FourPSt0}) {
    RansacConfig cfg;
    cfg.solver_kind = kind;
    cfg.threshold = 1e-9;
    cfg.max_iterations = 200;
    EXPECT_EQ(code_of([&] { ransac_estimate(pairs, cfg); }), Errc::NoModelFound) << to_string(kind);
  }
}

TEST(Ransac, InvalidConfigurations) {
  const ScenePair s = scene(6, 0.0, 0.0);
  RansacConfig cfg;
  cfg.solver_kind = SolverKind::ThreePRaSt0;
  EXPECT_EQ(code_of([&] { ransac_estimate(s.pairs, cfg); }), Errc::PreconditionViolation);
  cfg.solver_kind = SolverKind::FiveP;
  EXPECT_EQ(code_of([&] { ransac_estimate(std::span(s.pairs).first(4), cfg); }), Errc::NotEnoughPoints);
  cfg.threshold = 0.0;
  EXPECT_EQ(code_of([&] { ransac_estimate(s.pairs, cfg); }), Errc::PreconditionViolation);
}

TEST(Ransac, PureTranslationUsesFallbackMostly) {
  int fallback = 0;
  const int n = 20;
  for (int k = 0; k < n; ++k) {
    const ScenePair s = scene(100 + k, 0.5, 0.3, 0.0);
    RansacConfig cfg;
    cfg.solver_kind = SolverKind::FourPSt0;
    cfg.seed = k;
    const RansacResult r = ransac_estimate(s.pairs, cfg);
    fallback += r.used_degenerate_fallback;
    if (r.used_degenerate_fallback) {
      EXPECT_LT((r.motion.rotation.matrix() - Mat3::Identity()).norm(), 1e-15);
    }
  }
  EXPECT_GT(fallback, n / 2);
}

TEST(Ransac, FiveSolverNeverUsesFallback) {
  const ScenePair s = scene(7, 0.5, 0.3, 0.0);
  RansacConfig cfg;
  cfg.solver_kind = SolverKind::FiveP;
  EXPECT_FALSE(ransac_estimate(s.pairs, cfg).used_degenerate_fallback);
}

}  // namespace
}  // namespace relpose
