#include "relpose/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "relpose/error.hpp"
#include "relpose/formulations.hpp"

namespace relpose {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Vec3 gaussian3() { return {normal(), normal(), normal()}; }
  Vec3 unit() { return gaussian3().normalized(); }
  RotationMatrix rotation(double lo = 0.1, double hi = std::numbers::pi - 0.1) {
    return axis_angle_rotation(unit(), uniform(lo, hi));
  }
  std::vector<BearingPair> random_pairs(int n) {
    std::vector<BearingPair> out;
    for (int i = 0; i < n; ++i) out.emplace_back(unit(), unit());
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

Vec3 vee(const Mat3& a) { return {a(2, 1), a(0, 2), a(1, 0)}; }

constexpr SolverKind kAllSolvers[] = {SolverKind::FiveP, SolverKind::FourPSt0, SolverKind::ThreePRaSt0,
                                      SolverKind::TwoPTo};

}  // namespace

PropertyResult check_conjugation_invariance(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst_theta = 0.0;
  double worst_delta = 0.0;
  for (int i = 0; i < n; ++i) {
    const RigidMotion h{rng.rotation(), rng.gaussian3()};
    const RigidMotion x{rng.rotation(0.0, std::numbers::pi), rng.gaussian3()};
    const Se3Invariants a = se3_invariants(h);
    const Se3Invariants b = se3_invariants(conjugate(h, x));
    worst_theta = std::max(worst_theta, std::abs(a.theta - b.theta));
    worst_delta = std::max(worst_delta, std::abs(a.delta - b.delta));
  }
  return {"conjugation invariance of (theta, delta)", worst_theta < 1e-10 && worst_delta < 1e-8,
          fmt("n=%d max|dtheta|=%.3g max|ddelta|=%.3g", n, worst_theta, worst_delta)};
}

PropertyResult check_sir3_sir6_determinants(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto pairs = rng.random_pairs(3);
    const RotationParams rot = RotationParams::homogeneous(rng.normal(), rng.gaussian3());
    const double g = build_sir3(rot, pairs, false).g.determinant();
    const double m = build_sir6(rot, pairs, {0, 1, 2}).m.determinant();
    worst = std::max(worst, rel_diff(std::abs(g), std::abs(m)));
  }
  return {"|det SIR3| = |det SIR6|", worst < 1e-8, fmt("n=%d max rel diff=%.3g", n, worst)};
}

PropertyResult check_sir2_factorization(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst_quat = 0.0;
  double worst_cayley = 0.0;
  double worst_st0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto pairs = rng.random_pairs(3);
    const RotationParams quat = RotationParams::homogeneous(rng.normal(), rng.gaussian3());
    const RotationParams cay = CayleyVector{rng.gaussian3()};
    for (const RotationParams* rot : {&quat, &cay}) {
      const double g = build_sir3(*rot, pairs, false).g.determinant();
      const double f = build_sir2(*rot, pairs, {0, 1, 2}, false).f.determinant();
      double& worst = rot == &quat ? worst_quat : worst_cayley;
      worst = std::max(worst, rel_diff(std::abs(g), rot->scale() * std::abs(f)));
    }
    const double g = build_sir3(quat, std::span(pairs).first(2), true).g.determinant();
    const double f = build_sir2(quat, pairs, {0, 1, 2}, true).f.determinant();
    worst_st0 = std::max(worst_st0, rel_diff(std::abs(g), quat.scale() * std::abs(f)));
  }
  const bool ok = worst_quat < 1e-8 && worst_cayley < 1e-8 && worst_st0 < 1e-8;
  return {"|det SIR3| = scale |det SIR2|", ok,
          fmt("n=%d quaternion=%.3g cayley=%.3g zero-screw=%.3g", n, worst_quat, worst_cayley, worst_st0)};
}

PropertyResult check_trace_constraint(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const RotationMatrix r = rng.rotation(0.0, std::numbers::pi);
    const Mat3 e = essential_from_pose(r, rng.gaussian3()).matrix();
    const auto res = essential_constraint_residuals(e, r.matrix().trace());
    worst = std::max(worst, std::abs(*res.tau_residual));
  }
  return {"rotation-trace constraint on E", worst < 1e-9, fmt("n=%d max residual=%.3g", n, worst)};
}

PropertyResult check_trace_screw_identity(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const RotationMatrix r = rng.rotation(0.01, std::numbers::pi - 0.01);
    const Vec3 t = rng.unit();
    const Mat3 e = skew(t) * r.matrix();
    const Vec3 w = vee(r.matrix() - r.matrix().transpose());  // 2 sin(theta) a
    const double lhs = e.trace();
    const double rhs = -w.dot(t);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return {"tr E = -2 sin(theta) a^T t", worst < 1e-9, fmt("n=%d max rel residual=%.3g", n, worst)};
}

PropertyResult check_st0_cubics(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 axis = rng.unit();
    const RotationMatrix r = axis_angle_rotation(axis, rng.uniform(0.01, std::numbers::pi - 0.01));
    const Vec3 t = rng.gaussian3().cross(axis).normalized();
    const Mat3 e = essential_from_pose(r, t).matrix();
    const auto res = essential_constraint_residuals(e, r.matrix().trace());
    for (double c : *res.st0_cubics) worst = std::max(worst, std::abs(c));
  }
  return {"zero-screw cubics on planar essentials", worst < 1e-8, fmt("n=%d max |cubic|=%.3g", n, worst)};
}

AccuracyBundle run_accuracy_bundle(int n, std::uint64_t seed) {
  AccuracyBundle b;
  for (SolverKind k : kAllSolvers) b.emplace(k, run_accuracy_experiment(n, k, seed));
  return b;
}

PropertyResult check_solution_bounds(const AccuracyBundle& b) {
  std::string detail;
  int violations = 0;
  for (const auto& [kind, rec] : b) {
    int kind_violations = 0;
    int off_degree = 0;
    const int expected_degree = kind == SolverKind::ThreePRaSt0 ? 12 : kind == SolverKind::TwoPTo ? 1 : 10;
    for (const AccuracyTrial& t : rec.trials) {
      if (t.real_root_count > max_solutions(kind)) ++kind_violations;
      if (!t.solver_error && t.polynomial_degree != expected_degree) ++off_degree;
    }
    if (kind == SolverKind::ThreePRaSt0) kind_violations += off_degree;
    violations += kind_violations;
    detail += fmt("%s: max roots %d (bound %d), degree != %d in %d/%zu; ", std::string(to_string(kind)).c_str(),
                  rec.max_real_roots(), max_solutions(kind), expected_degree, off_degree, rec.trials.size());
  }
  return {"solution-count bounds", violations == 0, detail};
}

PropertyResult check_noiseless_recovery(const AccuracyBundle& b) {
  std::string detail;
  bool ok = true;
  for (const auto& [kind, rec] : b) {
    const double frac = rec.fraction_below(1e-6);
    const double med = rec.median_accuracy();
    ok = ok && frac >= 0.99 && med < 1e-9;
    detail += fmt("%s: %.2f%% < 1e-6, median %.3g; ", std::string(to_string(kind)).c_str(), 100.0 * frac, med);
  }
  return {"noiseless recovery", ok, detail};
}

PropertyResult check_real_root_statistics(const AccuracyBundle& b) {
  const double m5 = b.at(SolverKind::FiveP).mean_real_roots();
  const double m4 = b.at(SolverKind::FourPSt0).mean_real_roots();
  const double m3 = b.at(SolverKind::ThreePRaSt0).mean_real_roots();
  return {"mean real roots 4P-ST0 >= 5P", m4 >= m5,
          fmt("5p=%.3f 4p-st0=%.3f 3p-ra-st0=%.3f", m5, m4, m3)};
}

PropertyResult check_epipolar_residuals(int n, std::uint64_t seed) {
  std::string detail;
  bool ok = true;
  for (SolverKind kind : kAllSolvers) {
    int motions = 0;
    int bad = 0;
    for (int i = 0; i < n; ++i) {
      const ScenePair s = generate_scene(noiseless_config(kind, derive_seed(seed, static_cast<std::uint64_t>(i))));
      try {
        for (const RigidMotion& h : solve_minimal(kind, s.pairs, s.measured_theta).motions) {
          ++motions;
          const EssentialMatrix e = essential_from_motion(h);
          double worst = 0.0;
          for (const BearingPair& p : s.pairs) worst = std::max(worst, epipolar_residual(e, p));
          bad += worst >= 1e-8;
        }
      } catch (const Error&) {
      }
    }
    ok = ok && bad <= motions / 100;
    detail += fmt("%s: %d/%d motions >= 1e-8; ", std::string(to_string(kind)).c_str(), bad, motions);
  }
  return {"epipolar residuals of returned motions", ok, detail};
}

PropertyResult check_constraint_honoring(int n, std::uint64_t seed) {
  int v3 = 0;
  int v4 = 0;
  int m3 = 0;
  int m4 = 0;
  double worst_angle = 0.0;
  double worst_screw = 0.0;
  double worst_trace = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const ScenePair p3 = generate_scene(noiseless_config(SolverKind::ThreePRaSt0, s));
    const double theta = rotation_angle(p3.truth.rotation);
    try {
      for (const RigidMotion& h : solve_3p_ra_st0(p3.pairs, theta).motions) {
        ++m3;
        const double da = std::abs(rotation_angle(h.rotation) - theta);
        const double ds = std::abs(screw_translation(h));
        worst_angle = std::max(worst_angle, da);
        worst_screw = std::max(worst_screw, ds);
        v3 += !(da < 1e-7 && ds < 1e-7);
      }
    } catch (const Error&) {
    }
    const ScenePair p4 = generate_scene(noiseless_config(SolverKind::FourPSt0, s));
    try {
      for (const EssentialMatrix& e : solve_4p_st0(p4.pairs).essentials) {
        ++m4;
        const double tr = std::abs(e.matrix().trace());
        worst_trace = std::max(worst_trace, tr);
        v4 += !(tr < 1e-10);
      }
    } catch (const Error&) {
    }
  }
  return {"constraint honoring", v3 == 0 && v4 == 0,
          fmt("3p-ra-st0: %d/%d violations (max |dtheta| %.3g, max |delta| %.3g); 4p-st0: %d/%d (max |tr E| %.3g)",
              v3, m3, worst_angle, worst_screw, v4, m4, worst_trace)};
}

PropertyResult check_ransac_ordering(int n_seeds, std::uint64_t seed) {
  RansacGrid grid;
  grid.motions = {MotionKind::Forward};
  grid.pixel_noise = {0.5};
  grid.screw_disturb = {0.0};
  grid.trials = n_seeds;
  grid.seed = seed;
  // Both solvers get the same number of hypotheses.
  grid.ransac.adaptive_termination = false;
  grid.ransac.max_iterations = 1000;
  const auto rows = run_ransac_experiment(grid, {SolverKind::FiveP, SolverKind::FourPSt0});
  const RansacRow& r5 = rows[0];
  const RansacRow& r4 = rows[1];
  return {"RANSAC translation error 4P-ST0 <= 5P", r4.mean_translation_error <= r5.mean_translation_error,
          fmt("seeds=%d 5p: %.4f deg (%d failures), 4p-st0: %.4f deg (%d failures); rotation 5p %.4f, 4p-st0 %.4f",
              n_seeds, r5.mean_translation_error, r5.failures, r4.mean_translation_error, r4.failures,
              r5.mean_rotation_error, r4.mean_rotation_error)};
}

PropertyResult check_degenerate_fallback(int n_seeds, std::uint64_t seed) {
  RansacGrid grid;
  grid.motions = {MotionKind::Forward};
  grid.pixel_noise = {0.5};
  grid.screw_disturb = {0.0};
  grid.rotation_angle_std = 0.0;
  grid.trials = n_seeds;
  grid.seed = seed;
  const auto rows = run_ransac_experiment(grid, {SolverKind::FourPSt0, SolverKind::ThreePRaSt0});
  const double rate4 = rows[0].fallback_rate * (rows[0].trials - rows[0].failures) / rows[0].trials;
  const double rate3 = rows[1].fallback_rate * (rows[1].trials - rows[1].failures) / rows[1].trials;
  return {"translation-only fallback on pure translation", rate4 >= 0.9,
          fmt("seeds=%d 4p-st0 path: %.1f%%, 3p-ra-st0 path: %.1f%%", n_seeds, 100.0 * rate4, 100.0 * rate3)};
}

PropertyResult check_timing(int n_trials, std::uint64_t seed) {
  std::string detail;
  bool ok = true;
  for (SolverKind kind : kAllSolvers) {
    const TimingRecord t = run_timing(kind, n_trials, seed);
    ok = ok && t.median_us < 1000.0;
    detail += fmt("%s: median %.1f us, mean %.1f us", std::string(to_string(kind)).c_str(), t.median_us, t.mean_us);
    detail += t.reference_us > 0.0 ? fmt(" (reference %.0f us); ", t.reference_us) : std::string("; ");
  }
  return {"median solve time < 1 ms", ok, detail};
}

PropertyResult check_scale_recovery(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const RotationMatrix r = rng.rotation(2.0 * kMinRotationAngle, std::numbers::pi - 0.01);
    Vec3 t = rng.unit();
    while (std::abs(rotation_axis(r).dot(t)) <= 1e-6) t = rng.unit();
    double delta = rng.uniform(-2.0, 2.0);
    if (std::abs(delta) < 1e-3) delta = 1.0;
    const RigidMotion out = recover_scale({r, t}, delta);
    worst = std::max(worst, std::abs(screw_translation(out) - delta));
  }
  return {"scale recovery reproduces delta", worst < 1e-9, fmt("n=%d max error=%.3g", n, worst)};
}

PropertyResult check_angle_noise_model(int n, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.n_points = 1;
  cfg.angle_noise_std = 1.0;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const ScenePair s = generate_scene(cfg);
    const double d = (s.measured_theta - rotation_angle(s.truth.rotation)) * 180.0 / std::numbers::pi;
    sum += d;
    sum2 += d * d;
  }
  const double mean = sum / n;
  const double std = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
  return {"angle noise std matches configuration", std::abs(std - 1.0) <= 0.05,
          fmt("n=%d configured 1 deg, measured %.4f deg", n, std)};
}

std::vector<PropertyResult> run_property_suites(int divisor, std::uint64_t seed) {
  require(divisor >= 1, "divisor must be positive");
  auto scaled = [&](int n, int min) { return std::max(min, n / divisor); };
  std::vector<PropertyResult> out;
  out.push_back(check_conjugation_invariance(scaled(10000, 100), seed));
  out.push_back(check_sir3_sir6_determinants(scaled(10000, 100), seed));
  out.push_back(check_sir2_factorization(scaled(10000, 100), seed));
  out.push_back(check_trace_constraint(scaled(10000, 100), seed));
  out.push_back(check_trace_screw_identity(scaled(10000, 100), seed));
  out.push_back(check_st0_cubics(scaled(10000, 100), seed));
  const AccuracyBundle bundle = run_accuracy_bundle(scaled(10000, 200), seed);
  out.push_back(check_solution_bounds(bundle));
  out.push_back(check_noiseless_recovery(bundle));
  out.push_back(check_real_root_statistics(bundle));
  out.push_back(check_epipolar_residuals(scaled(1000, 100), seed));
  out.push_back(check_constraint_honoring(scaled(1000, 100), seed));
  out.push_back(check_ransac_ordering(scaled(200, 20), seed));
  out.push_back(check_degenerate_fallback(scaled(200, 20), seed));
  out.push_back(check_timing(scaled(1000, 100), seed));
  out.push_back(check_scale_recovery(scaled(1000, 100), seed));
  out.push_back(check_angle_noise_model(scaled(100000, 10000), seed));
  return out;
}

}  // namespace relpose
