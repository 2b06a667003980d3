#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "relpose/robust.hpp"
#include "relpose/solvers.hpp"
#include "relpose/synthetic.hpp"

namespace relpose {

// Independent seed for item `index` of a run started from `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Noiseless scene used by the accuracy, timing and property drivers: planar
// motion with the default rotation-angle spread, redrawn until the angle
// exceeds kMinRotationAngle, with exactly sample_size(kind) points. The
// translation-only solver gets a pure translation instead.
SyntheticConfig noiseless_config(SolverKind kind, std::uint64_t seed,
                                 MotionKind motion = MotionKind::Forward);

struct AccuracyTrial {
  int trial = 0;
  // log10 of min_i |R_i - R_true|; +inf when the solver returned nothing.
  double log10_accuracy = 0.0;
  int real_root_count = 0;
  int polynomial_degree = 0;
  // Singular-value ratio of the stacked epipolar rows of the sample.
  double condition = 0.0;
  bool solver_error = false;
};

struct AccuracyRecord {
  SolverKind kind = SolverKind::FiveP;
  std::vector<AccuracyTrial> trials;

  double fraction_below(double accuracy) const;
  double median_accuracy() const;
  double mean_real_roots() const;
  int max_real_roots() const;
  // Histogram indexed by real_root_count.
  std::vector<int> real_root_histogram() const;
};

AccuracyRecord run_accuracy_experiment(int n_trials, SolverKind kind, std::uint64_t seed = 1);

struct RansacGrid {
  std::vector<MotionKind> motions = {MotionKind::Forward, MotionKind::Sideway};
  std::vector<double> pixel_noise = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> screw_disturb = {0.0, 0.0166, 0.0333, 0.05};
  std::vector<double> angle_noise = {0.0};
  int trials = 50;
  int n_points = 100;
  double outlier_ratio = 0.3;
  double rotation_angle_std = 5.0;  // deg; 0 gives pure translation
  RansacConfig ransac;  // solver_kind and seed are overwritten per run
  std::uint64_t seed = 1;
};

struct RansacRow {
  SolverKind kind = SolverKind::FiveP;
  MotionKind motion = MotionKind::Forward;
  double pixel_noise = 0.0;
  double screw_disturb = 0.0;
  double angle_noise = 0.0;
  int trials = 0;
  int failures = 0;  // NoModelFound
  double mean_rotation_error = 0.0;     // deg, over successful trials
  double mean_translation_error = 0.0;  // deg, over successful trials
  double fallback_rate = 0.0;
};

// One row per (solver, motion, pixel noise, screw disturbance, angle noise).
// Trial k of a cell uses the same scene for every solver.
std::vector<RansacRow> run_ransac_experiment(const RansacGrid& grid, const std::vector<SolverKind>& solvers);

struct TimingRecord {
  SolverKind kind = SolverKind::FiveP;
  int trials = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  // Runtime reported for the reference implementation, 0 if none.
  double reference_us = 0.0;
};

// Requires n_trials >= 100. Inputs are generated before timing starts.
TimingRecord run_timing(SolverKind kind, int n_trials, std::uint64_t seed = 1);

void write_accuracy_csv(std::ostream& os, const AccuracyRecord& rec);
void write_accuracy_csv(std::ostream& os, const std::vector<AccuracyRecord>& recs);
void write_ransac_csv(std::ostream& os, const std::vector<RansacRow>& rows);
void write_timing_csv(std::ostream& os, const std::vector<TimingRecord>& recs);

// %.9g formatting used by every CSV writer.
std::string format_float(double v);

}  // namespace relpose
