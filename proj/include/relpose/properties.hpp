#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relpose/experiments.hpp"

namespace relpose {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Identities of the formulations, each over n random instances.
PropertyResult check_conjugation_invariance(int n, std::uint64_t seed);  // (theta, delta) within 1e-10 / 1e-8
PropertyResult check_sir3_sir6_determinants(int n, std::uint64_t seed);  // |det G| = |det M|, rel 1e-8
PropertyResult check_sir2_factorization(int n, std::uint64_t seed);      // quaternion, Cayley, zero-screw rows
PropertyResult check_trace_constraint(int n, std::uint64_t seed);        // tau residual < 1e-9
PropertyResult check_trace_screw_identity(int n, std::uint64_t seed);    // tr E = -2 sin(theta) a^T t, rel 1e-9
PropertyResult check_st0_cubics(int n, std::uint64_t seed);              // all seven < 1e-8

// Accuracy records of all four solvers over the same seeds.
using AccuracyBundle = std::map<SolverKind, AccuracyRecord>;
AccuracyBundle run_accuracy_bundle(int n, std::uint64_t seed);

PropertyResult check_solution_bounds(const AccuracyBundle& b);
PropertyResult check_noiseless_recovery(const AccuracyBundle& b);
PropertyResult check_real_root_statistics(const AccuracyBundle& b);

PropertyResult check_epipolar_residuals(int n, std::uint64_t seed);      // every motion < 1e-8 on its sample
PropertyResult check_constraint_honoring(int n, std::uint64_t seed);
PropertyResult check_ransac_ordering(int n_seeds, std::uint64_t seed);
PropertyResult check_degenerate_fallback(int n_seeds, std::uint64_t seed);
PropertyResult check_timing(int n_trials, std::uint64_t seed);
PropertyResult check_scale_recovery(int n, std::uint64_t seed);
PropertyResult check_angle_noise_model(int n, std::uint64_t seed);       // std within 5%

// Everything above with trial counts divided by `divisor` (minimum sizes are
// kept), in a fixed order.
std::vector<PropertyResult> run_property_suites(int divisor, std::uint64_t seed);

}  // namespace relpose
