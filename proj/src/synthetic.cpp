#include "relpose/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "relpose/error.hpp"

namespace relpose {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMinDepth = 2.0;
constexpr double kMaxDepth = 10.0;
constexpr int kMaxPointAttempts = 100000;

class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : gen_(seed) {}

  double normal(double std) {
    if (std == 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, std)(gen_);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

bool in_view(const Vec3& x, double half_width) {
  return x.z() > 0.0 && std::abs(x.x() / x.z()) <= half_width && std::abs(x.y() / x.z()) <= half_width;
}

Vec3 random_ray(SceneRng& rng, double half_width) {
  return Vec3(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width), 1.0).normalized();
}

Vec3 perturb(const Vec3& ray, double std, SceneRng& rng) {
  if (std == 0.0) return ray;
  const Vec3 any = std::abs(ray.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = ray.cross(any).normalized();
  const Vec3 e2 = ray.cross(e1);
  return (ray + rng.normal(std) * e1 + rng.normal(std) * e2).normalized();
}

}  // namespace

std::string_view to_string(MotionKind kind) { return kind == MotionKind::Forward ? "forward" : "sideway"; }

MotionKind parse_motion_kind(std::string_view name) {
  if (name == "forward") return MotionKind::Forward;
  if (name == "sideway") return MotionKind::Sideway;
  fail(Errc::ParseError, "unknown motion kind '" + std::string(name) + "'");
}

void validate(const SyntheticConfig& cfg) {
  require(cfg.pixel_noise_std >= 0.0 && cfg.pixel_noise_std <= 1.0, "pixel noise std must lie in [0, 1] px");
  require(cfg.angle_noise_std >= 0.0 && cfg.angle_noise_std <= 1.0, "angle noise std must lie in [0, 1] deg");
  require(cfg.screw_disturb_std >= 0.0 && cfg.screw_disturb_std <= 0.05, "screw disturbance must lie in [0, 0.05]");
  require(cfg.rotation_angle_std >= 0.0, "rotation angle std must be non-negative");
  require(cfg.n_points >= 1, "a scene needs at least one point");
  require(cfg.outlier_ratio >= 0.0 && cfg.outlier_ratio <= 1.0, "outlier ratio must lie in [0, 1]");
  require(cfg.focal_px > 0.0, "focal length must be positive");
  require(cfg.fov_deg > 0.0 && cfg.fov_deg < 180.0, "field of view must lie in (0, 180) deg");
  require(cfg.axis_tilt_std >= 0.0, "axis tilt std must be non-negative");
  require(cfg.min_rotation_angle >= 0.0 && cfg.min_rotation_angle < 0.5 * std::numbers::pi,
          "minimum rotation angle must lie in [0, pi/2)");
}

ScenePair generate_scene(const SyntheticConfig& cfg) {
  validate(cfg);
  SceneRng rng(cfg.seed);
  const double half_width = std::tan(0.5 * cfg.fov_deg * kDegToRad);

  const Vec3 axis = Vec3(rng.normal(cfg.axis_tilt_std), 1.0, rng.normal(cfg.axis_tilt_std)).normalized();
  double theta = std::abs(rng.normal(cfg.rotation_angle_std * kDegToRad));
  if (cfg.min_rotation_angle > 0.0) {
    require(cfg.rotation_angle_std > 0.0, "a minimum rotation angle needs a positive rotation angle std");
    while (theta <= cfg.min_rotation_angle) theta = std::abs(rng.normal(cfg.rotation_angle_std * kDegToRad));
  }
  const RotationMatrix r = axis_angle_rotation(axis, theta);

  // Camera-2 centre in the camera-1 frame.
  Vec3 baseline = cfg.motion_kind == MotionKind::Forward ? Vec3::UnitZ() : Vec3::UnitX();
  baseline = (baseline - axis * axis.dot(baseline)).normalized();
  baseline += rng.normal(cfg.screw_disturb_std) * axis;

  ScenePair scene;
  scene.truth = {r, -(r * baseline)};
  scene.measured_theta = theta + rng.normal(cfg.angle_noise_std * kDegToRad);

  const double ray_std = cfg.pixel_noise_std / cfg.focal_px;
  const auto n = static_cast<std::size_t>(cfg.n_points);
  scene.pairs.reserve(n);
  scene.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 x;
    int attempts = 0;
    do {
      require(++attempts <= kMaxPointAttempts, "no point is visible in both cameras");
      const double depth = rng.uniform(kMinDepth, kMaxDepth);
      x = Vec3(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width), 1.0) * depth;
    } while (!in_view(r * x + scene.truth.translation, half_width));
    scene.points.push_back(x);
    const Vec3 x2 = r * x + scene.truth.translation;
    scene.pairs.emplace_back(perturb(x.normalized(), ray_std, rng), perturb(x2.normalized(), ray_std, rng));
  }

  scene.inlier_mask_truth.assign(n, true);
  const auto n_out = static_cast<std::size_t>(std::llround(cfg.outlier_ratio * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  for (std::size_t k = 0; k < n_out; ++k) {
    const std::size_t i = order[k];
    scene.inlier_mask_truth[i] = false;
    scene.pairs[i] = BearingPair(scene.pairs[i].q1(), random_ray(rng, half_width));
  }
  return scene;
}

}  // namespace relpose
