#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "relpose/geometry.hpp"

namespace relpose {

enum class MotionKind { Forward, Sideway };

std::string_view to_string(MotionKind kind);
MotionKind parse_motion_kind(std::string_view name);

struct SyntheticConfig {
  MotionKind motion_kind = MotionKind::Forward;
  double pixel_noise_std = 0.0;     // px, [0, 1]
  double angle_noise_std = 0.0;     // deg, [0, 1]
  double screw_disturb_std = 0.0;   // fraction of the unit baseline, [0, 0.05]
  double rotation_angle_std = 5.0;  // deg
  int n_points = 100;
  double outlier_ratio = 0.0;  // [0, 1]
  double focal_px = 500.0;
  double fov_deg = 60.0;
  std::uint64_t seed = 0;
  // Standard deviation (rad) of the tilt of the rotation axis away from the
  // camera y axis.
  double axis_tilt_std = 0.1;
  // Redraw the rotation angle until it exceeds this value (rad); 0 disables.
  double min_rotation_angle = 0.0;
};

struct ScenePair {
  std::vector<BearingPair> pairs;
  RigidMotion truth;
  // Points in the first camera frame, before noise.
  std::vector<Vec3> points;
  // Rotation angle of truth plus angle noise (rad). May be negative for tiny
  // true angles.
  double measured_theta = 0.0;
  std::vector<bool> inlier_mask_truth;
};

// Validates the ranges in SyntheticConfig; throws PreconditionViolation.
void validate(const SyntheticConfig& cfg);

// Rotation about an axis near the camera y axis by |N(0, rotation_angle_std)|.
// The camera moves by a unit baseline along z (Forward) or x (Sideway),
// projected orthogonal to the rotation axis and then disturbed along the axis
// by N(0, screw_disturb_std). Points are uniform in the first camera's image
// with depths in [2, 10] and are kept only if the second camera sees them.
// Noise is Gaussian on the ray tangent plane with std pixel_noise_std /
// focal_px. Outliers replace q2 by a uniform random ray inside the field of
// view.
ScenePair generate_scene(const SyntheticConfig& cfg);

}  // namespace relpose
