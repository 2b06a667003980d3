#pragma once

#include <array>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "relpose/geometry.hpp"
#include "relpose/polynomial.hpp"

namespace relpose {

enum class SolverKind { FiveP, FourPSt0, ThreePRaSt0, TwoPTo };

std::string_view to_string(SolverKind kind);
// Accepts "5p", "4p-st0", "3p-ra-st0", "2p-to".
SolverKind parse_solver_kind(std::string_view name);
int sample_size(SolverKind kind);
// Upper bound on the number of returned motions.
int max_solutions(SolverKind kind);

// Rotation angles at or below this are rejected by the rotation-angle solver
// and by scale recovery (0.5 degrees).
inline constexpr double kMinRotationAngle = 0.5 * std::numbers::pi / 180.0;

struct SolutionSet {
  std::vector<RigidMotion> motions;  // unit translation
  std::vector<EssentialMatrix> essentials;
  int real_root_count = 0;
  // Degree of the hidden-variable polynomial; 1 for the translation-only solver.
  int polynomial_degree = 0;
};

// Five-point solver: E in the 4-dimensional nullspace of the epipolar rows,
// 10x20 template, degree-10 hidden-variable polynomial.
SolutionSet solve_5p(std::span<const BearingPair> pairs);

// Zero screw translation, four points: the fifth epipolar row is replaced by
// tr E = 0. Of each twisted pair the candidate with smaller |screw
// translation| is kept.
SolutionSet solve_4p_st0(std::span<const BearingPair> pairs);

// Fixed monomial order of the 23x35 template: the ten monomials alpha^2 m,
// followed by the 25 monomials of the reduced template.
struct MonomialExponent {
  int alpha;
  int beta;
  int gamma;
};

struct TemplateA {
  Eigen::Matrix<double, 23, 35> a;
  static const std::array<MonomialExponent, 35>& monomial_order();
};

struct TemplateB {
  Eigen::Matrix<double, 13, 25> b;
  // The last 25 entries of TemplateA::monomial_order().
  static std::span<const MonomialExponent, 25> monomial_order();
};

// Rows 0-9: m (|u|^2 + sigma^2 - 1) for m in alpha^2, alpha beta, beta^2,
// alpha gamma, beta gamma, gamma^2, alpha, beta, gamma, 1. Row 10: det F_123.
// Rows 11-22: m det F'_ij for (i, j) in (1,2), (1,3), (2,3) and m in alpha,
// beta, gamma, 1. Rows 10-22 are scaled to unit max-norm. Throws
// DegenerateInput unless sigma corresponds to an angle in (kMinRotationAngle, pi).
TemplateA build_3prast0_template_a(std::span<const BearingPair> pairs, double sigma);

// B = X - W U^-1 V by back-substitution on the unit upper-triangular U.
TemplateB reduce_template(const TemplateA& a);

// Row-reduces the left 13x13 block of b and forms the 3x3 matrix C(gamma)
// with C(gamma) [alpha beta 1]^T = 0 at every solution; det C has degree 12
// generically. Throws DegenerateInput when the block is singular.
PolyMatrix3 hidden_variable_matrix(TemplateB b);

// Three points, known rotation angle theta, zero screw translation.
SolutionSet solve_3p_ra_st0(std::span<const BearingPair> pairs, double theta);

// Translation-only motion from two points.
SolutionSet solve_2p_to(std::span<const BearingPair> pairs);

// Dispatch; theta is used only by ThreePRaSt0.
SolutionSet solve_minimal(SolverKind kind, std::span<const BearingPair> pairs, double theta = 0.0);

// Scales the translation by delta / (r^T t) so that the screw translation
// becomes delta.
RigidMotion recover_scale(const RigidMotion& motion, double delta);

}  // namespace relpose
