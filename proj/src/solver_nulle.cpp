#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "relpose/error.hpp"
#include "relpose/formulations.hpp"
#include "relpose/polynomial.hpp"
#include "relpose/solvers.hpp"
#include "solver_util.hpp"
#include "trivariate.hpp"

namespace relpose {

namespace {

using detail::Trivariate;
using Cubic = Trivariate<3>;

constexpr double kValidityTol = 1e-6;
constexpr double kPivotTol = 1e-12;

// Column order of the 10x20 template. The first ten are eliminated; the
// remaining ten are x (z^2, z, 1), y (z^2, z, 1), (z^3, z^2, z, 1).
constexpr detail::Exponent kColumns[20] = {
    {3, 0, 0}, {0, 3, 0}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}, {2, 0, 0}, {0, 2, 1},
    {0, 2, 0}, {1, 1, 1}, {1, 1, 0}, {1, 0, 2}, {1, 0, 1}, {1, 0, 0}, {0, 1, 2},
    {0, 1, 1}, {0, 1, 0}, {0, 0, 3}, {0, 0, 2}, {0, 0, 1}, {0, 0, 0}};

enum class Variant { FiveP, FourPSt0 };

using Template = Eigen::Matrix<double, 10, 20>;

Template build_template(const std::vector<Mat3>& basis) {
  // E(x, y, z) = B0 + x B1 + y B2 + z B3
  std::array<Trivariate<1>, 9> e;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      e[3 * r + c] = detail::linear3(basis[0](r, c), basis[1](r, c), basis[2](r, c), basis[3](r, c));
  auto E = [&](int r, int c) -> const Trivariate<1>& { return e[3 * r + c]; };

  std::array<Trivariate<2>, 9> eet;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) eet[3 * a + b] += E(a, k) * E(b, k);
  const Trivariate<2> tr = eet[0] + eet[4] + eet[8];

  std::array<Cubic, 10> eqs;
  eqs[0] = E(0, 0) * (E(1, 1) * E(2, 2) - E(1, 2) * E(2, 1)) -
           E(0, 1) * (E(1, 0) * E(2, 2) - E(1, 2) * E(2, 0)) +
           E(0, 2) * (E(1, 0) * E(2, 1) - E(1, 1) * E(2, 0));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Cubic acc;
      for (int k = 0; k < 3; ++k) acc += (eet[3 * a + k] * E(k, b)) * 2.0;
      eqs[1 + 3 * a + b] = acc - tr * E(a, b);
    }

  Template m;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 20; ++c) m(r, c) = eqs[r].at(kColumns[c].a, kColumns[c].b, kColumns[c].c);
  return m;
}

// Gauss-Jordan on the first ten columns with partial pivoting.
bool eliminate(Template& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return false;
  for (int col = 0; col < 10; ++col) {
    Eigen::Index piv = 0;
    const double best = m.col(col).tail(10 - col).cwiseAbs().maxCoeff(&piv);
    if (!(best > kPivotTol * scale)) return false;
    m.row(col).swap(m.row(col + static_cast<int>(piv)));
    m.row(col) /= m(col, col);
    for (int r = 0; r < 10; ++r)
      if (r != col) m.row(r) -= m(r, col) * m.row(col);
  }
  return true;
}

// Row a minus z times row b over the free columns, as a 3-vector of
// polynomials in z multiplying (x, y, 1).
void fill_hidden_row(const Template& m, int a, int b, PolyMatrix3& out, int row) {
  auto free = [&](int r, int c) { return m(r, 10 + c); };
  const std::vector<double> x = {free(a, 2), free(a, 1) - free(b, 2), free(a, 0) - free(b, 1), -free(b, 0)};
  const std::vector<double> y = {free(a, 5), free(a, 4) - free(b, 5), free(a, 3) - free(b, 4), -free(b, 3)};
  const std::vector<double> one = {free(a, 9), free(a, 8) - free(b, 9), free(a, 7) - free(b, 8),
                                   free(a, 6) - free(b, 7), -free(b, 6)};
  out(row, 0) = UnivariatePolynomial(x);
  out(row, 1) = UnivariatePolynomial(y);
  out(row, 2) = UnivariatePolynomial(one);
}

double abs_screw(const RigidMotion& h) {
  if (rotation_angle(h.rotation) <= kAngleEpsilon) return 0.0;
  return std::abs(screw_translation(h));
}

SolutionSet solve_nulle(std::span<const BearingPair> pairs, Variant variant) {
  const Vec9 tr_row = trace_row();
  const std::span<const Vec9> extra = variant == Variant::FourPSt0 ? std::span<const Vec9>(&tr_row, 1)
                                                                   : std::span<const Vec9>();
  const NullEBasis nb = nulle_basis(pairs, extra);

  const Template raw_template = build_template(nb.basis);
  Template m = raw_template;
  if (!eliminate(m)) fail(Errc::DegenerateInput, "elimination template is singular");

  PolyMatrix3 hidden;
  fill_hidden_row(m, 4, 5, hidden, 0);
  fill_hidden_row(m, 6, 7, hidden, 1);
  fill_hidden_row(m, 8, 9, hidden, 2);
  const UnivariatePolynomial p = polymat_det3(hidden);
  if (p.degree() < 1) fail(Errc::DegenerateInput, "hidden-variable polynomial is constant");

  const std::vector<double> roots = real_roots(p);
  if (roots.empty()) fail(Errc::NoRealSolutions, "no real roots");

  SolutionSet out;
  out.real_root_count = static_cast<int>(roots.size());
  out.polynomial_degree = p.degree();
  for (double z : roots) {
    const auto v = detail::null_vector3(hidden.evaluate(z));
    if (!v || std::abs((*v)[2]) <= 1e-12 * v->norm()) continue;
    const Vec3 xyz = detail::polish_root(raw_template, kColumns, Vec3((*v)[0] / (*v)[2], (*v)[1] / (*v)[2], z));
    const Mat3 raw = nb.basis[0] + xyz[0] * nb.basis[1] + xyz[1] * nb.basis[2] + xyz[2] * nb.basis[3];
    if (!raw.allFinite() || raw.norm() == 0.0) continue;
    const EssentialMatrix e(raw);
    if (!detail::is_valid_essential(e.matrix(), kValidityTol)) continue;

    const std::vector<RigidMotion> cands = essential_candidates(e);
    std::optional<RigidMotion> chosen;
    double chosen_screw = std::numeric_limits<double>::infinity();
    for (const RigidMotion& h : cands) {
      if (!passes_cheirality(h, pairs)) continue;
      if (variant == Variant::FiveP) {
        chosen = h;
        break;
      }
      const double s = abs_screw(h);
      if (s < chosen_screw) {
        chosen = h;
        chosen_screw = s;
      }
    }
    if (!chosen) continue;
    out.motions.push_back(*chosen);
    out.essentials.push_back(e);
  }
  return out;
}

}  // namespace

SolutionSet solve_5p(std::span<const BearingPair> pairs) {
  require(pairs.size() == 5, "the five-point solver needs exactly 5 pairs");
  return solve_nulle(pairs, Variant::FiveP);
}

SolutionSet solve_4p_st0(std::span<const BearingPair> pairs) {
  require(pairs.size() == 4, "the zero-screw four-point solver needs exactly 4 pairs");
  return solve_nulle(pairs, Variant::FourPSt0);
}

}  // namespace relpose
