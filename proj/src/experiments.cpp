#include "relpose/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <Eigen/SVD>

#include "relpose/error.hpp"
#include "relpose/formulations.hpp"

namespace relpose {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double epipolar_condition(std::span<const BearingPair> pairs) {
  Eigen::Matrix<double, Eigen::Dynamic, 9> a(static_cast<Eigen::Index>(pairs.size()), 9);
  for (std::size_t i = 0; i < pairs.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = epipolar_row(pairs[i]);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

double reference_runtime_us(SolverKind kind) {
  switch (kind) {
    case SolverKind::FiveP:
      return 25.0;
    case SolverKind::FourPSt0:
      return 26.0;
    case SolverKind::ThreePRaSt0:
      return 28.0;
    case SolverKind::TwoPTo:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

// SplitMix64 finalizer over a base seed and an index.
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SyntheticConfig noiseless_config(SolverKind kind, std::uint64_t seed, MotionKind motion) {
  SyntheticConfig cfg;
  cfg.motion_kind = motion;
  cfg.n_points = sample_size(kind);
  cfg.seed = seed;
  if (kind == SolverKind::TwoPTo) {
    cfg.rotation_angle_std = 0.0;
  } else {
    cfg.min_rotation_angle = kMinRotationAngle;
  }
  return cfg;
}

double AccuracyRecord::fraction_below(double accuracy) const {
  if (trials.empty()) return 0.0;
  const double lim = std::log10(accuracy);
  const auto n = std::count_if(trials.begin(), trials.end(), [&](const AccuracyTrial& t) { return t.log10_accuracy < lim; });
  return static_cast<double>(n) / static_cast<double>(trials.size());
}

double AccuracyRecord::median_accuracy() const {
  std::vector<double> v;
  v.reserve(trials.size());
  for (const AccuracyTrial& t : trials) v.push_back(t.log10_accuracy);
  return std::pow(10.0, median_of(std::move(v)));
}

double AccuracyRecord::mean_real_roots() const {
  if (trials.empty()) return 0.0;
  double s = 0.0;
  for (const AccuracyTrial& t : trials) s += t.real_root_count;
  return s / static_cast<double>(trials.size());
}

int AccuracyRecord::max_real_roots() const {
  int m = 0;
  for (const AccuracyTrial& t : trials) m = std::max(m, t.real_root_count);
  return m;
}

std::vector<int> AccuracyRecord::real_root_histogram() const {
  std::vector<int> h(static_cast<std::size_t>(max_real_roots()) + 1, 0);
  for (const AccuracyTrial& t : trials) ++h[static_cast<std::size_t>(t.real_root_count)];
  return h;
}

AccuracyRecord run_accuracy_experiment(int n_trials, SolverKind kind, std::uint64_t seed) {
  require(n_trials >= 1, "accuracy experiment needs at least one trial");
  AccuracyRecord rec;
  rec.kind = kind;
  rec.trials.reserve(static_cast<std::size_t>(n_trials));
  for (int i = 0; i < n_trials; ++i) {
    const ScenePair scene = generate_scene(noiseless_config(kind, derive_seed(seed, static_cast<std::uint64_t>(i))));
    AccuracyTrial t;
    t.trial = i;
    t.condition = epipolar_condition(scene.pairs);
    t.log10_accuracy = std::numeric_limits<double>::infinity();
    try {
      const SolutionSet set = solve_minimal(kind, scene.pairs, rotation_angle(scene.truth.rotation));
      t.real_root_count = set.real_root_count;
      t.polynomial_degree = set.polynomial_degree;
      if (!set.motions.empty()) {
        t.log10_accuracy = std::log10(std::max(numerical_accuracy(set, scene.truth.rotation), 1e-300));
      }
    } catch (const Error&) {
      t.solver_error = true;
    }
    rec.trials.push_back(t);
  }
  return rec;
}

std::vector<RansacRow> run_ransac_experiment(const RansacGrid& grid, const std::vector<SolverKind>& solvers) {
  require(grid.trials >= 1, "RANSAC experiment needs at least one trial per cell");
  std::vector<RansacRow> rows;
  std::uint64_t cell = 0;
  for (MotionKind motion : grid.motions)
    for (double noise : grid.pixel_noise)
      for (double screw : grid.screw_disturb)
        for (double angle_noise : grid.angle_noise) {
          const std::uint64_t cell_seed = derive_seed(grid.seed, cell++);
          std::vector<RansacRow> cell_rows;
          for (SolverKind kind : solvers) {
            RansacRow row;
            row.kind = kind;
            row.motion = motion;
            row.pixel_noise = noise;
            row.screw_disturb = screw;
            row.angle_noise = angle_noise;
            cell_rows.push_back(row);
          }
          for (int trial = 0; trial < grid.trials; ++trial) {
            SyntheticConfig cfg;
            cfg.motion_kind = motion;
            cfg.pixel_noise_std = noise;
            cfg.screw_disturb_std = screw;
            cfg.angle_noise_std = angle_noise;
            cfg.n_points = grid.n_points;
            cfg.outlier_ratio = grid.outlier_ratio;
            cfg.rotation_angle_std = grid.rotation_angle_std;
            cfg.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(trial));
            const ScenePair scene = generate_scene(cfg);
            for (RansacRow& row : cell_rows) {
              RansacConfig rc = grid.ransac;
              rc.solver_kind = row.kind;
              rc.seed = cfg.seed;
              ++row.trials;
              try {
                const RansacResult res = ransac_estimate(scene.pairs, rc, scene.measured_theta);
                row.mean_rotation_error += rotation_error(res.motion.rotation, scene.truth.rotation);
                row.mean_translation_error +=
                    translation_direction_error(res.motion.translation, scene.truth.translation);
                row.fallback_rate += res.used_degenerate_fallback ? 1.0 : 0.0;
              } catch (const Error&) {
                ++row.failures;
              }
            }
          }
          for (RansacRow& row : cell_rows) {
            const int ok = row.trials - row.failures;
            if (ok > 0) {
              row.mean_rotation_error /= ok;
              row.mean_translation_error /= ok;
              row.fallback_rate /= ok;
            } else {
              row.mean_rotation_error = row.mean_translation_error = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
          }
        }
  return rows;
}

TimingRecord run_timing(SolverKind kind, int n_trials, std::uint64_t seed) {
  require(n_trials >= 100, "timing needs at least 100 trials");
  std::vector<ScenePair> scenes;
  scenes.reserve(static_cast<std::size_t>(n_trials));
  for (int i = 0; i < n_trials; ++i) {
    scenes.push_back(generate_scene(noiseless_config(kind, derive_seed(seed, static_cast<std::uint64_t>(i)))));
  }
  std::vector<double> us;
  us.reserve(scenes.size());
  volatile std::size_t sink = 0;
  for (const ScenePair& s : scenes) {
    const double theta = s.measured_theta;
    const auto start = std::chrono::steady_clock::now();
    try {
      sink = sink + solve_minimal(kind, s.pairs, theta).motions.size();
    } catch (const Error&) {
    }
    const auto stop = std::chrono::steady_clock::now();
    us.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
  }
  TimingRecord rec;
  rec.kind = kind;
  rec.trials = n_trials;
  double total = 0.0;
  for (double v : us) total += v;
  rec.mean_us = total / static_cast<double>(us.size());
  rec.median_us = median_of(std::move(us));
  rec.reference_us = reference_runtime_us(kind);
  return rec;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_accuracy_csv(std::ostream& os, const AccuracyRecord& rec) {
  write_accuracy_csv(os, std::vector<AccuracyRecord>{rec});
}

void write_accuracy_csv(std::ostream& os, const std::vector<AccuracyRecord>& recs) {
  os << "solver,trial,log10_accuracy,real_root_count,polynomial_degree,condition,solver_error\n";
  for (const AccuracyRecord& rec : recs) {
    for (const AccuracyTrial& t : rec.trials) {
      os << to_string(rec.kind) << ',' << t.trial << ',' << format_float(t.log10_accuracy) << ','
         << t.real_root_count << ',' << t.polynomial_degree << ',' << format_float(t.condition) << ','
         << (t.solver_error ? 1 : 0) << '\n';
    }
  }
}

void write_ransac_csv(std::ostream& os, const std::vector<RansacRow>& rows) {
  os << "solver,motion,pixel_noise_px,screw_disturb,angle_noise_deg,trials,failures,"
        "mean_rotation_error_deg,mean_translation_error_deg,fallback_rate\n";
  for (const RansacRow& r : rows) {
    os << to_string(r.kind) << ',' << to_string(r.motion) << ',' << format_float(r.pixel_noise) << ','
       << format_float(r.screw_disturb) << ',' << format_float(r.angle_noise) << ',' << r.trials << ','
       << r.failures << ',' << format_float(r.mean_rotation_error) << ','
       << format_float(r.mean_translation_error) << ',' << format_float(r.fallback_rate) << '\n';
  }
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRecord>& recs) {
  os << "solver,trials,mean_us,median_us,reference_us\n";
  for (const TimingRecord& r : recs) {
    os << to_string(r.kind) << ',' << r.trials << ',' << format_float(r.mean_us) << ','
       << format_float(r.median_us) << ',' << format_float(r.reference_us) << '\n';
  }
}

}  // namespace relpose
