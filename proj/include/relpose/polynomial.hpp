#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace relpose {

// Dense real polynomial, coefficients in ascending degree. Leading
// coefficients below 1e-14 of the largest magnitude are trimmed on
// construction, so degree() is the numerical degree.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<double> coeffs);
  UnivariatePolynomial(std::initializer_list<double> coeffs);

  // prod (x - r_i)
  static UnivariatePolynomial from_roots(std::span<const double> roots);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double coefficient(int i) const;
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  // p(x) and p'(x) in one Horner pass.
  std::pair<double, double> value_and_derivative(double x) const;
  // sum |c_i| |x|^i, the natural rounding scale of p(x).
  double magnitude_at(double x) const;

  UnivariatePolynomial derivative() const;
  // Divides by the largest coefficient magnitude (a positive factor, so signs
  // at every point are unchanged).
  UnivariatePolynomial normalized() const;

  friend UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator-(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator*(double s, const UnivariatePolynomial& a);
  UnivariatePolynomial operator-() const;

  // Remainder of a / b; b must be nonzero.
  static UnivariatePolynomial remainder(const UnivariatePolynomial& a, const UnivariatePolynomial& b);

 private:
  void trim();
  std::vector<double> coeffs_;
};

// 1 + max |c_i / c_n|: every real root lies strictly inside (-B, B).
double cauchy_bound(const UnivariatePolynomial& p);

// p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k). Each element is scaled by a
// positive constant for range; the chain stops at the first remainder that is
// numerically zero. Requires deg p >= 1.
std::vector<UnivariatePolynomial> sturm_sequence(const UnivariatePolynomial& p);

int sign_variations(std::span<const UnivariatePolynomial> chain, double x);

// Number of distinct real roots in (lo, hi].
int sturm_count(std::span<const UnivariatePolynomial> chain, double lo, double hi);

// All real roots in (lo, hi], ascending, each reported once (duplicates within
// 1e-10 merged). Requires deg p >= 1.
std::vector<double> isolate_and_refine(const UnivariatePolynomial& p, double lo, double hi);

// isolate_and_refine over the Cauchy bracket.
std::vector<double> real_roots(const UnivariatePolynomial& p);

class PolyMatrix3 {
 public:
  UnivariatePolynomial& operator()(int r, int c) { return entries_[3 * r + c]; }
  const UnivariatePolynomial& operator()(int r, int c) const { return entries_[3 * r + c]; }

  // Entry-wise evaluation into a row-major 3x3 array.
  std::array<double, 9> evaluate(double x) const;

 private:
  std::array<UnivariatePolynomial, 9> entries_{};
};

// Determinant by cofactor expansion.
UnivariatePolynomial polymat_det3(const PolyMatrix3& c);

}  // namespace relpose
