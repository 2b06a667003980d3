#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relpose/correspondence_io.hpp"
#include "relpose/error.hpp"
#include "relpose/experiments.hpp"
#include "relpose/properties.hpp"
#include "relpose/robust.hpp"
#include "relpose/solvers.hpp"

namespace {

using namespace relpose;

constexpr SolverKind kAll[] = {SolverKind::FiveP, SolverKind::FourPSt0, SolverKind::ThreePRaSt0,
                               SolverKind::TwoPTo};

std::vector<SolverKind> parse_solvers(const std::vector<std::string>& names) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) return {std::begin(kAll), std::end(kAll)};
  std::vector<SolverKind> out;
  for (const std::string& n : names) out.push_back(parse_solver_kind(n));
  return out;
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) fail(Errc::PreconditionViolation, "cannot open '" + path + "' for writing");
  write(os);
}

struct SolveArgs {
  std::string input;
  std::string solver = "5p";
  std::optional<double> theta_deg;
  std::optional<double> delta;
  double threshold = 1e-3;
  std::uint64_t seed = 0;
  int max_iterations = 1000;
};

int run_solve(const SolveArgs& a) {
  const std::vector<BearingPair> pairs = read_correspondences_file(a.input);
  RansacConfig cfg;
  cfg.solver_kind = parse_solver_kind(a.solver);
  cfg.threshold = a.threshold;
  cfg.seed = a.seed;
  cfg.max_iterations = a.max_iterations;
  std::optional<double> theta;
  if (a.theta_deg) theta = *a.theta_deg * std::numbers::pi / 180.0;

  const RansacResult res = ransac_estimate(pairs, cfg, theta);
  const RigidMotion m = a.delta ? recover_scale(res.motion, *a.delta) : res.motion;

  nlohmann::json out;
  std::vector<double> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.push_back(m.rotation.matrix()(i, j));
  out["R"] = r;
  out["t"] = {m.translation.x(), m.translation.y(), m.translation.z()};
  out["inliers"] = res.inlier_count;
  std::cout << out.dump() << '\n';
  return 0;
}

struct AccuracyArgs {
  std::vector<std::string> solvers;
  int trials = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_bench_accuracy(const AccuracyArgs& a) {
  std::vector<AccuracyRecord> recs;
  for (SolverKind k : parse_solvers(a.solvers)) recs.push_back(run_accuracy_experiment(a.trials, k, a.seed));
  emit(a.out, [&](std::ostream& os) { write_accuracy_csv(os, recs); });
  for (const AccuracyRecord& r : recs) {
    std::cerr << to_string(r.kind) << ": " << 100.0 * r.fraction_below(1e-6) << "% below 1e-6, median "
              << r.median_accuracy() << ", mean real roots " << r.mean_real_roots() << '\n';
  }
  return 0;
}

struct RansacArgs {
  std::vector<std::string> solvers = {"5p", "4p-st0", "3p-ra-st0"};
  std::vector<std::string> motions = {"forward", "sideway"};
  std::vector<double> pixel_noise;
  std::vector<double> screw_disturb;
  std::vector<double> angle_noise;
  int trials = 50;
  double threshold = 1e-3;
  int max_iterations = 1000;
  bool fixed_iterations = false;
  std::uint64_t seed = 1;
  std::string out;
};

int run_bench_ransac(const RansacArgs& a) {
  RansacGrid grid;
  grid.motions.clear();
  for (const std::string& m : a.motions) grid.motions.push_back(parse_motion_kind(m));
  if (!a.pixel_noise.empty()) grid.pixel_noise = a.pixel_noise;
  if (!a.screw_disturb.empty()) grid.screw_disturb = a.screw_disturb;
  if (!a.angle_noise.empty()) grid.angle_noise = a.angle_noise;
  grid.trials = a.trials;
  grid.seed = a.seed;
  grid.ransac.threshold = a.threshold;
  grid.ransac.max_iterations = a.max_iterations;
  grid.ransac.adaptive_termination = !a.fixed_iterations;
  const auto rows = run_ransac_experiment(grid, parse_solvers(a.solvers));
  emit(a.out, [&](std::ostream& os) { write_ransac_csv(os, rows); });
  return 0;
}

struct TimeArgs {
  std::vector<std::string> solvers;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_bench_time(const TimeArgs& a) {
  std::vector<TimingRecord> recs;
  for (SolverKind k : parse_solvers(a.solvers)) recs.push_back(run_timing(k, a.trials, a.seed));
  emit(a.out, [&](std::ostream& os) { write_timing_csv(os, recs); });
  return 0;
}

int run_selftest(int divisor, std::uint64_t seed) {
  int failed = 0;
  for (const PropertyResult& r : run_property_suites(divisor, seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    failed += !r.passed;
  }
  std::cout << (failed == 0 ? "all property suites passed" : std::to_string(failed) + " suite(s) failed") << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal relative-pose solvers with SE(3) invariant constraints"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Robustly estimate the motion from a correspondence file");
  cmd_solve->add_option("input", solve.input, "Correspondence file, one 'x1 y1 z1 x2 y2 z2' per line")
      ->required();
  cmd_solve->add_option("--solver", solve.solver, "5p, 4p-st0, 3p-ra-st0 or 2p-to")->capture_default_str();
  cmd_solve->add_option("--theta", solve.theta_deg, "Known rotation angle in degrees (3p-ra-st0)");
  cmd_solve->add_option("--delta", solve.delta, "Known screw translation; rescales t");
  cmd_solve->add_option("--threshold", solve.threshold, "Inlier threshold on the epipolar residual")
      ->capture_default_str();
  cmd_solve->add_option("--seed", solve.seed, "RANSAC seed")->capture_default_str();
  cmd_solve->add_option("--max-iterations", solve.max_iterations, "RANSAC iteration cap")->capture_default_str();

  AccuracyArgs acc;
  CLI::App* cmd_acc = app.add_subcommand("bench-accuracy", "Noiseless numerical accuracy and real-root counts");
  cmd_acc->add_option("--solver", acc.solvers, "Solvers to run (repeatable, or 'all')");
  cmd_acc->add_option("--trials", acc.trials, "Trials per solver")->capture_default_str()->check(CLI::PositiveNumber);
  cmd_acc->add_option("--seed", acc.seed, "Base seed")->capture_default_str();
  cmd_acc->add_option("--out", acc.out, "CSV output path (default stdout)");

  RansacArgs ran;
  CLI::App* cmd_ran = app.add_subcommand("bench-ransac", "RANSAC error sweep over noise and screw disturbance");
  cmd_ran->add_option("--solver", ran.solvers, "Solvers to run (repeatable, or 'all')")->capture_default_str();
  cmd_ran->add_option("--motion", ran.motions, "forward and/or sideway")->capture_default_str();
  cmd_ran->add_option("--pixel-noise", ran.pixel_noise, "Pixel noise levels (px)");
  cmd_ran->add_option("--screw-disturb", ran.screw_disturb, "Screw disturbance levels (fraction of baseline)");
  cmd_ran->add_option("--angle-noise", ran.angle_noise, "Rotation angle noise levels (deg)");
  cmd_ran->add_option("--trials", ran.trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
  cmd_ran->add_option("--threshold", ran.threshold, "Inlier threshold")->capture_default_str();
  cmd_ran->add_option("--max-iterations", ran.max_iterations, "RANSAC iteration cap")->capture_default_str();
  cmd_ran->add_flag("--fixed-iterations", ran.fixed_iterations, "Disable adaptive termination");
  cmd_ran->add_option("--seed", ran.seed, "Base seed")->capture_default_str();
  cmd_ran->add_option("--out", ran.out, "CSV output path (default stdout)");

  TimeArgs tim;
  CLI::App* cmd_tim = app.add_subcommand("bench-time", "Per-solve wall time");
  cmd_tim->add_option("--solver", tim.solvers, "Solvers to run (repeatable, or 'all')");
  cmd_tim->add_option("--trials", tim.trials, "Timed solves per solver (>= 100)")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  cmd_tim->add_option("--seed", tim.seed, "Base seed")->capture_default_str();
  cmd_tim->add_option("--out", tim.out, "CSV output path (default stdout)");

  int divisor = 10;
  std::uint64_t selftest_seed = 1;
  CLI::App* cmd_self = app.add_subcommand("selftest", "Run the property suites");
  cmd_self->add_option("--divisor", divisor, "Divide all trial counts by this factor")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_self->add_option("--seed", selftest_seed, "Base seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_acc) return run_bench_accuracy(acc);
    if (*cmd_ran) return run_bench_ransac(ran);
    if (*cmd_tim) return run_bench_time(tim);
    if (*cmd_self) return run_selftest(divisor, selftest_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
