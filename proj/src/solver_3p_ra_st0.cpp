#include <cmath>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "relpose/error.hpp"
#include "relpose/formulations.hpp"
#include "relpose/polynomial.hpp"
#include "relpose/solvers.hpp"
#include "solver_util.hpp"
#include "trivariate.hpp"

namespace relpose {

namespace {

using detail::Trivariate;
using Quartic = Trivariate<4>;

constexpr double kPivotTol = 1e-12;

constexpr std::array<MonomialExponent, 35> kMonomials = {{
    // alpha^2 times the ten multipliers of the unit-norm constraint
    {4, 0, 0}, {3, 1, 0}, {2, 2, 0}, {3, 0, 1}, {2, 1, 1}, {2, 0, 2}, {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {2, 0, 0},
    // pivots of the reduced template
    {0, 4, 0}, {0, 3, 1}, {0, 2, 2}, {1, 3, 0}, {1, 2, 1}, {1, 0, 3}, {0, 3, 0}, {1, 2, 0},
    {0, 2, 1}, {0, 2, 0}, {1, 1, 2}, {1, 1, 1}, {1, 1, 0},
    // free columns: alpha (gamma^2, gamma, 1), beta (gamma^3 .. 1), (gamma^4 .. 1)
    {1, 0, 2}, {1, 0, 1}, {1, 0, 0}, {0, 1, 3}, {0, 1, 2}, {0, 1, 1}, {0, 1, 0},
    {0, 0, 4}, {0, 0, 3}, {0, 0, 2}, {0, 0, 1}, {0, 0, 0},
}};

constexpr std::array<detail::Exponent, 35> exponents_of(const std::array<MonomialExponent, 35>& m) {
  std::array<detail::Exponent, 35> out{};
  for (std::size_t i = 0; i < 35; ++i) out[i] = {m[i].alpha, m[i].beta, m[i].gamma};
  return out;
}
constexpr std::array<detail::Exponent, 35> kMonomialExponents = exponents_of(kMonomials);

constexpr detail::Exponent kMultipliers[10] = {{2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1},
                                               {0, 0, 2}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
constexpr detail::Exponent kSt0Multipliers[4] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
constexpr std::pair<int, int> kPairs[3] = {{0, 1}, {0, 2}, {1, 2}};

constexpr int kReducedRows = 13;
constexpr int kFirstFree = 13;

using Quadratic = Trivariate<2>;
using Mat3Poly = std::array<Quadratic, 9>;

Trivariate<1> monomial1(int var) {
  Trivariate<1> p;
  p.at(var == 0, var == 1, var == 2) = 1.0;
  return p;
}

// R~ = 2 (u u^T - sigma [u]_x) + (sigma^2 - |u|^2) I with u = (alpha, beta, gamma).
Mat3Poly scaled_rotation_poly(double sigma) {
  const std::array<Trivariate<1>, 3> u = {monomial1(0), monomial1(1), monomial1(2)};
  Quadratic norm2;
  for (const auto& ui : u) norm2 += ui * ui;
  Mat3Poly r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[3 * a + b] = (u[a] * u[b]) * 2.0;
  // -2 sigma [u]_x
  r[1] += (u[2] * (2.0 * sigma)).widen<2>();
  r[2] += (u[1] * (-2.0 * sigma)).widen<2>();
  r[3] += (u[2] * (-2.0 * sigma)).widen<2>();
  r[5] += (u[0] * (2.0 * sigma)).widen<2>();
  r[6] += (u[1] * (2.0 * sigma)).widen<2>();
  r[7] += (u[0] * (-2.0 * sigma)).widen<2>();
  const Quadratic diag = Quadratic::constant(sigma * sigma) - norm2;
  for (int a = 0; a < 3; ++a) r[4 * a] += diag;
  return r;
}

Quadratic bilinear(const Vec3& x, const Mat3Poly& r, const Vec3& y) {
  Quadratic out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out += r[3 * a + b] * (x[a] * y[b]);
  return out;
}

std::array<Quadratic, 2> sir2_row_poly(const Mat3Poly& r, const BearingPair& anchor, const BearingPair& other) {
  const Vec3 w = anchor.q1().cross(other.q1());
  const Vec3 z = other.q2().cross(anchor.q2());
  return {bilinear(other.q2(), r, w), bilinear(z, r, other.q1()) * -1.0};
}

Trivariate<1> dot_u(const Vec3& x) { return detail::linear3(0.0, x[0], x[1], x[2]); }

Quartic multiply(const Trivariate<3>& p, detail::Exponent m) {
  Quartic out;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j)
      for (int k = 0; i + j + k <= 3; ++k) out.at(i + m.a, j + m.b, k + m.c) += p.at(i, j, k);
  return out;
}

void set_row(Eigen::Matrix<double, 23, 35>& a, int row, const Quartic& p, bool normalize) {
  for (int c = 0; c < 35; ++c) a(row, c) = p.at(kMonomials[c].alpha, kMonomials[c].beta, kMonomials[c].gamma);
  if (normalize) {
    const double m = a.row(row).cwiseAbs().maxCoeff();
    if (m > 0.0) a.row(row) /= m;
  }
}

double angle_from_sigma(double sigma) { return 2.0 * std::acos(std::clamp(sigma, -1.0, 1.0)); }

void check_angle(double theta) {
  require(std::isfinite(theta), "rotation angle must be finite");
  if (!(theta > kMinRotationAngle && theta < std::numbers::pi)) {
    fail(Errc::DegenerateInput, "rotation angle outside (0.5 deg, pi)");
  }
}

// Reduced row echelon form of the left 13x13 block.
bool rref(Eigen::Matrix<double, 13, 25>& b) {
  const double scale = b.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return false;
  for (int col = 0; col < kReducedRows; ++col) {
    Eigen::Index piv = 0;
    const double best = b.col(col).tail(kReducedRows - col).cwiseAbs().maxCoeff(&piv);
    if (!(best > kPivotTol * scale)) return false;
    b.row(col).swap(b.row(col + static_cast<int>(piv)));
    b.row(col) /= b(col, col);
    for (int r = 0; r < kReducedRows; ++r)
      if (r != col) b.row(r) -= b(r, col) * b.row(col);
  }
  return true;
}

// gamma * row a - row b over the free columns, as polynomials in gamma
// multiplying (alpha, beta, 1).
void fill_hidden_row(const Eigen::Matrix<double, 13, 25>& b, int ra, int rb, PolyMatrix3& out, int row) {
  auto fa = [&](int c) { return b(ra, kFirstFree + c); };
  auto fb = [&](int c) { return b(rb, kFirstFree + c); };
  out(row, 0) = UnivariatePolynomial({-fb(2), fa(2) - fb(1), fa(1) - fb(0), fa(0)});
  out(row, 1) = UnivariatePolynomial({-fb(6), fa(6) - fb(5), fa(5) - fb(4), fa(4) - fb(3), fa(3)});
  out(row, 2) = UnivariatePolynomial({-fb(11), fa(11) - fb(10), fa(10) - fb(9), fa(9) - fb(8), fa(8) - fb(7), fa(7)});
}

// Unit t orthogonal to u minimizing the three epipolar residuals: t spans the
// plane orthogonal to u, and the 3x2 reduced system is solved by SVD.
std::optional<Vec3> translation_from_rotation(const RotationMatrix& r, const Vec3& u,
                                              std::span<const BearingPair> pairs) {
  const Vec3 n = u.normalized();
  const Vec3 e1 = n.cross(std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).normalized();
  const Vec3 e2 = n.cross(e1);
  Eigen::Matrix<double, 3, 2> g;
  for (int i = 0; i < 3; ++i) {
    const Vec3 row = (r * pairs[i].q1()).cross(pairs[i].q2());
    g(i, 0) = row.dot(e1);
    g(i, 1) = row.dot(e2);
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(g, Eigen::ComputeFullV);
  const Eigen::Vector2d s = svd.singularValues();
  if (!(s[0] > 0.0)) return std::nullopt;
  const Eigen::Vector2d c = svd.matrixV().col(1);
  return (c[0] * e1 + c[1] * e2).normalized();
}

}  // namespace

const std::array<MonomialExponent, 35>& TemplateA::monomial_order() { return kMonomials; }

std::span<const MonomialExponent, 25> TemplateB::monomial_order() {
  return std::span<const MonomialExponent, 25>(kMonomials.data() + 10, 25);
}

TemplateA build_3prast0_template_a(std::span<const BearingPair> pairs, double sigma) {
  require(pairs.size() == 3, "the rotation-angle solver needs exactly 3 pairs");
  require(std::isfinite(sigma) && sigma >= -1.0 && sigma <= 1.0, "sigma must lie in [-1, 1]");
  check_angle(angle_from_sigma(sigma));

  TemplateA out;
  out.a.setZero();

  // |u|^2 + sigma^2 - 1 times the multipliers
  Trivariate<2> unit;
  unit.at(2, 0, 0) = unit.at(0, 2, 0) = unit.at(0, 0, 2) = 1.0;
  unit.at(0, 0, 0) = sigma * sigma - 1.0;
  for (int r = 0; r < 10; ++r) {
    Quartic p;
    const detail::Exponent m = kMultipliers[r];
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; i + j <= 2; ++j)
        for (int k = 0; i + j + k <= 2; ++k) p.at(i + m.a, j + m.b, k + m.c) += unit.at(i, j, k);
    set_row(out.a, r, p, false);
  }

  const Mat3Poly rt = scaled_rotation_poly(sigma);
  const auto f12 = sir2_row_poly(rt, pairs[0], pairs[1]);
  const auto f13 = sir2_row_poly(rt, pairs[0], pairs[2]);
  set_row(out.a, 10, f12[0] * f13[1] - f12[1] * f13[0], true);

  int row = 11;
  for (const auto& [i, j] : kPairs) {
    const auto fij = sir2_row_poly(rt, pairs[i], pairs[j]);
    const Trivariate<3> det = fij[0] * dot_u(pairs[i].q2()) + fij[1] * dot_u(pairs[i].q1());
    for (const detail::Exponent m : kSt0Multipliers) set_row(out.a, row++, multiply(det, m), true);
  }
  return out;
}

TemplateB reduce_template(const TemplateA& a) {
  const auto u = a.a.topLeftCorner<10, 10>();
  const auto v = a.a.topRightCorner<10, 25>();
  const auto w = a.a.bottomLeftCorner<13, 10>();
  const auto x = a.a.bottomRightCorner<13, 25>();
  const Eigen::Matrix<double, 10, 25> y = u.triangularView<Eigen::UnitUpper>().solve(v);
  TemplateB out;
  out.b = x - w * y;
  return out;
}

PolyMatrix3 hidden_variable_matrix(TemplateB tb) {
  if (!rref(tb.b)) fail(Errc::DegenerateInput, "reduced template is singular");
  PolyMatrix3 c;
  fill_hidden_row(tb.b, 12, 11, c, 0);
  fill_hidden_row(tb.b, 11, 10, c, 1);
  fill_hidden_row(tb.b, 9, 8, c, 2);
  return c;
}

SolutionSet solve_3p_ra_st0(std::span<const BearingPair> pairs, double theta) {
  require(pairs.size() == 3, "the rotation-angle solver needs exactly 3 pairs");
  check_angle(theta);
  const double sigma = std::cos(0.5 * theta);
  const double usize = std::sin(0.5 * theta);

  const TemplateA ta = build_3prast0_template_a(pairs, sigma);
  const PolyMatrix3 c = hidden_variable_matrix(reduce_template(ta));
  const UnivariatePolynomial p = polymat_det3(c);
  if (p.degree() < 1) fail(Errc::DegenerateInput, "hidden-variable polynomial is constant");

  const std::vector<double> roots = real_roots(p);
  if (roots.empty()) fail(Errc::NoRealSolutions, "no real roots");

  SolutionSet out;
  out.real_root_count = static_cast<int>(roots.size());
  out.polynomial_degree = p.degree();
  bool ambiguous = false;
  for (double gamma : roots) {
    const auto v = detail::null_vector3(c.evaluate(gamma));
    if (!v) {
      ambiguous = true;
      continue;
    }
    if (std::abs((*v)[2]) <= 1e-12 * v->norm()) continue;
    const Vec3 u = detail::polish_root(ta.a, kMonomialExponents.data(), Vec3((*v)[0] / (*v)[2], (*v)[1] / (*v)[2], gamma));
    if (!(u.norm() > 0.0) || !u.allFinite()) continue;
    const Vec3 unit_u = usize / u.norm() * u;
    const RotationMatrix r = quat_to_rotation(UnitQuaternion{sigma, unit_u});

    const auto t0 = translation_from_rotation(r, unit_u, pairs);
    if (!t0) {
      ambiguous = true;
      continue;
    }
    const Vec3 t = detail::orient_translation(r, *t0, pairs);
    const RigidMotion h{r, t};
    if (!passes_cheirality(h, pairs)) continue;
    out.motions.push_back(h);
    out.essentials.push_back(essential_from_pose(r, t));
  }
  if (out.motions.empty() && ambiguous) {
    fail(Errc::NullVectorAmbiguous, "rank of the hidden-variable matrix dropped below 2 at every root");
  }
  return out;
}

}  // namespace relpose
