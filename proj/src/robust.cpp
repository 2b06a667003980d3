#include "relpose/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "relpose/error.hpp"

namespace relpose {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Best {
  std::optional<RigidMotion> motion;
  int count = -1;
};

bool is_st0(SolverKind k) { return k == SolverKind::FourPSt0 || k == SolverKind::ThreePRaSt0; }

int count_inliers(const RigidMotion& h, std::span<const BearingPair> pairs, double threshold) {
  const EssentialMatrix e = essential_from_motion(h);
  int n = 0;
  for (const BearingPair& p : pairs) n += epipolar_residual(e, p) <= threshold;
  return n;
}

// k distinct indices by partial Fisher-Yates over a scratch permutation.
void draw_sample(std::mt19937_64& rng, std::vector<std::size_t>& perm, int k, std::vector<BearingPair>& out,
                 std::span<const BearingPair> pairs) {
  out.clear();
  const std::size_t n = perm.size();
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), n - 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[pick(rng)]);
    out.push_back(pairs[perm[static_cast<std::size_t>(i)]]);
  }
}

void score(const SolutionSet& set, std::span<const BearingPair> pairs, double threshold, bool reject_small_angle,
           Best& best) {
  for (const RigidMotion& h : set.motions) {
    if (reject_small_angle && rotation_angle(h.rotation) <= kMinRotationAngle) continue;
    const int n = count_inliers(h, pairs, threshold);
    if (n > best.count) {
      best.count = n;
      best.motion = h;
    }
  }
}

}  // namespace

int adaptive_iteration_bound(double inlier_ratio, int sample_size, double confidence, int cap) {
  if (!(inlier_ratio > 0.0)) return cap;
  const double ws = std::pow(std::min(inlier_ratio, 1.0), sample_size);
  if (ws >= 1.0) return 1;
  const double n = std::log(1.0 - confidence) / std::log(1.0 - ws);
  if (!std::isfinite(n) || n >= static_cast<double>(cap)) return cap;
  return std::max(1, static_cast<int>(std::ceil(n)));
}

std::vector<bool> inlier_mask(const RigidMotion& h, std::span<const BearingPair> pairs, double threshold) {
  const EssentialMatrix e = essential_from_motion(h);
  std::vector<bool> mask(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) mask[i] = epipolar_residual(e, pairs[i]) <= threshold;
  return mask;
}

RansacResult ransac_estimate(std::span<const BearingPair> pairs, const RansacConfig& cfg,
                             std::optional<double> theta) {
  require(cfg.threshold > 0.0, "RANSAC threshold must be positive");
  require(cfg.confidence > 0.0 && cfg.confidence < 1.0, "RANSAC confidence must lie in (0, 1)");
  require(cfg.max_iterations >= 1, "RANSAC needs at least one iteration");
  const SolverKind kind = cfg.solver_kind;
  require(kind != SolverKind::ThreePRaSt0 || theta.has_value(), "the rotation-angle solver needs theta");
  const int s = sample_size(kind);
  if (pairs.size() < static_cast<std::size_t>(s)) fail(Errc::NotEnoughPoints, "fewer pairs than the sample size");

  const bool fallback_stream = is_st0(kind);
  const bool main_enabled = kind != SolverKind::ThreePRaSt0 || *theta > kMinRotationAngle;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> perm(pairs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::vector<BearingPair> sample;
  sample.reserve(static_cast<std::size_t>(s));

  Best main;
  Best fallback;
  int bound = cfg.max_iterations;
  int it = 0;
  for (; it < bound; ++it) {
    draw_sample(rng, perm, s, sample, pairs);
    if (main_enabled) {
      try {
        score(solve_minimal(kind, sample, theta.value_or(0.0)), pairs, cfg.threshold, fallback_stream, main);
      } catch (const Error&) {
        // Degenerate samples simply yield no hypothesis.
      }
    }
    if (fallback_stream) {
      draw_sample(rng, perm, 2, sample, pairs);
      try {
        score(solve_2p_to(sample), pairs, cfg.threshold, false, fallback);
      } catch (const Error&) {
      }
    }
    if (cfg.adaptive_termination) {
      const int best = std::max(main.count, fallback.count);
      const double w = static_cast<double>(best) / static_cast<double>(pairs.size());
      bound = std::min(cfg.max_iterations, std::max(it + 1, adaptive_iteration_bound(w, s, cfg.confidence,
                                                                                     cfg.max_iterations)));
    }
  }

  const bool main_ok = main.motion && main.count > s;
  const bool fallback_ok = fallback.motion && fallback.count > 2;
  if (!main_ok && !fallback_ok) fail(Errc::NoModelFound, "no hypothesis exceeded the sample size in inliers");

  RansacResult out;
  out.used_degenerate_fallback = fallback_ok && (!main_ok || fallback.count >= main.count);
  out.motion = out.used_degenerate_fallback ? *fallback.motion : *main.motion;
  out.inlier_mask = inlier_mask(out.motion, pairs, cfg.threshold);
  out.inlier_count = static_cast<int>(std::count(out.inlier_mask.begin(), out.inlier_mask.end(), true));
  out.iterations_used = it;
  return out;
}

double rotation_error(const RotationMatrix& estimate, const RotationMatrix& truth) {
  return rotation_angle(estimate.transpose() * truth) * kRadToDeg;
}

double translation_direction_error(const Vec3& estimate, const Vec3& truth) {
  const double ne = estimate.norm();
  const double nt = truth.norm();
  require(ne > 0.0 && nt > 0.0, "translation directions must be nonzero");
  const double c = std::clamp(estimate.dot(truth) / (ne * nt), -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

double numerical_accuracy(const SolutionSet& solutions, const RotationMatrix& truth) {
  if (solutions.motions.empty()) fail(Errc::EmptySolutionSet, "no solutions to compare");
  double best = std::numeric_limits<double>::infinity();
  for (const RigidMotion& h : solutions.motions) {
    best = std::min(best, (h.rotation.matrix() - truth.matrix()).norm());
  }
  return best;
}

}  // namespace relpose
