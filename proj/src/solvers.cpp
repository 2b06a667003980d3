#include "relpose/solvers.hpp"

#include <cmath>

#include "relpose/error.hpp"
#include "solver_util.hpp"

namespace relpose {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::FiveP:
      return "5p";
    case SolverKind::FourPSt0:
      return "4p-st0";
    case SolverKind::ThreePRaSt0:
      return "3p-ra-st0";
    case SolverKind::TwoPTo:
      return "2p-to";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  for (SolverKind k : {SolverKind::FiveP, SolverKind::FourPSt0, SolverKind::ThreePRaSt0, SolverKind::TwoPTo}) {
    if (name == to_string(k)) return k;
  }
  fail(Errc::ParseError, "unknown solver '" + std::string(name) + "'");
}

int sample_size(SolverKind kind) {
  switch (kind) {
    case SolverKind::FiveP:
      return 5;
    case SolverKind::FourPSt0:
      return 4;
    case SolverKind::ThreePRaSt0:
      return 3;
    case SolverKind::TwoPTo:
      return 2;
  }
  return 0;
}

int max_solutions(SolverKind kind) {
  switch (kind) {
    case SolverKind::FiveP:
    case SolverKind::FourPSt0:
      return 10;
    case SolverKind::ThreePRaSt0:
      return 12;
    case SolverKind::TwoPTo:
      return 1;
  }
  return 0;
}

SolutionSet solve_2p_to(std::span<const BearingPair> pairs) {
  require(pairs.size() == 2, "the translation-only solver needs exactly 2 pairs");
  // q2^T [t]_x q1 = t . (q1 x q2)
  const Vec3 a = pairs[0].q1().cross(pairs[0].q2());
  const Vec3 b = pairs[1].q1().cross(pairs[1].q2());
  const Vec3 t = a.cross(b);
  if (!(t.norm() > 1e-12)) fail(Errc::DegenerateInput, "translation is not determined by the two pairs");
  const RotationMatrix r = RotationMatrix::identity();
  const Vec3 oriented = detail::orient_translation(r, t.normalized(), pairs);
  SolutionSet out;
  out.real_root_count = 1;
  out.polynomial_degree = 1;
  out.motions.push_back({r, oriented});
  out.essentials.push_back(essential_from_pose(r, oriented));
  return out;
}

SolutionSet solve_minimal(SolverKind kind, std::span<const BearingPair> pairs, double theta) {
  switch (kind) {
    case SolverKind::FiveP:
      return solve_5p(pairs);
    case SolverKind::FourPSt0:
      return solve_4p_st0(pairs);
    case SolverKind::ThreePRaSt0:
      return solve_3p_ra_st0(pairs, theta);
    case SolverKind::TwoPTo:
      return solve_2p_to(pairs);
  }
  fail(Errc::PreconditionViolation, "unknown solver kind");
}

RigidMotion recover_scale(const RigidMotion& motion, double delta) {
  require(std::isfinite(delta), "screw translation must be finite");
  require(motion.translation.allFinite(), "translation must be finite");
  if (rotation_angle(motion.rotation) <= kMinRotationAngle) {
    fail(Errc::DegenerateAxis, "rotation too small to define a screw axis");
  }
  if (delta == 0.0) fail(Errc::ZeroScrewDelta, "zero screw translation leaves the scale undetermined");
  const Vec3 r = rotation_axis(motion.rotation);
  const double along = r.dot(motion.translation);
  if (!(std::abs(along) > 1e-8 * std::max(1.0, motion.translation.norm()))) {
    fail(Errc::ZeroScrewDirection, "translation is orthogonal to the screw axis");
  }
  return {motion.rotation, motion.translation * (delta / along)};
}

}  // namespace relpose
