#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relpose/geometry.hpp"
#include "relpose/solvers.hpp"

namespace relpose {

struct RansacConfig {
  SolverKind solver_kind = SolverKind::FiveP;
  // Sampson distance on the ray tangent planes; 1e-3 is about 0.5 px at a
  // 500 px focal length.
  double threshold = 1e-3;
  int max_iterations = 1000;
  double confidence = 0.99;
  std::uint64_t seed = 0;
  // Shrinks the iteration budget as the inlier ratio grows. Disable to run
  // exactly max_iterations.
  bool adaptive_termination = true;
};

struct RansacResult {
  RigidMotion motion;
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
  int iterations_used = 0;
  // True when the two-point translation-only model was selected.
  bool used_degenerate_fallback = false;
};

// Hypothesize-and-verify over minimal samples. Every motion returned by the
// minimal solver is scored. For FourPSt0 and ThreePRaSt0 each iteration also
// draws a two-point sample for the translation-only solver; the final model is
// the stream with more inliers, and the translation-only model wins ties. St0
// hypotheses whose rotation angle is at most kMinRotationAngle are discarded,
// since that regime is covered by the translation-only stream. Within a
// stream the earliest iteration wins among equal inlier counts.
//
// theta is required for ThreePRaSt0 and ignored otherwise. Throws
// NotEnoughPoints, PreconditionViolation on an invalid config, and
// NoModelFound when no hypothesis has more inliers than its sample size.
RansacResult ransac_estimate(std::span<const BearingPair> pairs, const RansacConfig& cfg,
                             std::optional<double> theta = std::nullopt);

// Iteration bound log(1 - confidence) / log(1 - w^s), clamped to [1, cap].
int adaptive_iteration_bound(double inlier_ratio, int sample_size, double confidence, int cap);

// Pairs whose Sampson residual under essential_from_motion(h) is <= threshold.
std::vector<bool> inlier_mask(const RigidMotion& h, std::span<const BearingPair> pairs, double threshold);

// Angle of estimate^T truth, in degrees.
double rotation_error(const RotationMatrix& estimate, const RotationMatrix& truth);
// Angle between the two directions, in degrees. Both must be nonzero.
double translation_direction_error(const Vec3& estimate, const Vec3& truth);
// min_i |R_i - truth|_F over the solution set. Throws EmptySolutionSet.
double numerical_accuracy(const SolutionSet& solutions, const RotationMatrix& truth);

}  // namespace relpose
