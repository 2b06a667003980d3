// Acceptance run: one PASS/FAIL line per criterion AC1-AC9 at full trial
// counts. Exit status is the number of failed criteria (0 when all pass).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "relpose/properties.hpp"

namespace {

using relpose::PropertyResult;

struct Criterion {
  std::string id;
  std::string title;
  std::vector<PropertyResult> parts;
  double seconds = 0.0;
};

template <class F>
Criterion run(const char* id, const char* title, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{id, title, body(), 0.0};
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

bool print(const Criterion& c) {
  bool ok = true;
  for (const PropertyResult& p : c.parts) ok = ok && p.passed;
  std::printf("%s %s: %s (%.1f s)\n", c.id.c_str(), ok ? "PASS" : "FAIL", c.title.c_str(), c.seconds);
  for (const PropertyResult& p : c.parts) {
    std::printf("    [%s] %s: %s\n", p.passed ? "ok" : "FAILED", p.name.c_str(), p.detail.c_str());
  }
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  using namespace relpose;
  constexpr std::uint64_t kSeed = 2024;
  int failed = 0;

  const auto bundle_start = std::chrono::steady_clock::now();
  const AccuracyBundle bundle = run_accuracy_bundle(10000, kSeed);
  const double bundle_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - bundle_start).count();
  std::printf("noiseless accuracy bundle: 10000 instances per solver in %.1f s\n", bundle_seconds);

  failed += !print(run("AC1", "solution-count bounds", [&] {
    return std::vector{check_solution_bounds(bundle)};
  }));
  failed += !print(run("AC2", "noiseless recovery", [&] {
    return std::vector{check_noiseless_recovery(bundle)};
  }));
  failed += !print(run("AC3", "theorem suites", [&] {
    return std::vector{check_conjugation_invariance(10000, kSeed),  check_sir3_sir6_determinants(10000, kSeed),
                       check_sir2_factorization(10000, kSeed),      check_trace_constraint(10000, kSeed),
                       check_trace_screw_identity(10000, kSeed),    check_st0_cubics(10000, kSeed)};
  }));
  failed += !print(run("AC4", "constraint honoring", [&] {
    return std::vector{check_constraint_honoring(1000, kSeed)};
  }));
  failed += !print(run("AC5", "RANSAC ordering, forward planar motion", [&] {
    return std::vector{check_ransac_ordering(200, kSeed)};
  }));
  failed += !print(run("AC6", "degeneracy fallback", [&] {
    return std::vector{check_degenerate_fallback(200, kSeed)};
  }));
  failed += !print(run("AC7", "timing", [&] { return std::vector{check_timing(10000, kSeed)}; }));
  failed += !print(run("AC8", "real-root statistics", [&] {
    return std::vector{check_real_root_statistics(bundle)};
  }));
  failed += !print(run("AC9", "scale recovery", [&] { return std::vector{check_scale_recovery(1000, kSeed)}; }));

  std::printf("%d of 9 acceptance criteria failed\n", failed);
  return failed;
}
