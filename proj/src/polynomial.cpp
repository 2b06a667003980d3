#include "relpose/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relpose/error.hpp"

namespace relpose {

namespace {

constexpr double kTrimRelative = 1e-14;
constexpr double kZeroRemainderRelative = 1e-13;
constexpr int kMaxRefineSteps = 200;
constexpr int kMaxIsolationDepth = 80;
constexpr double kDedupTol = 1e-10;

double max_abs(const std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

UnivariatePolynomial::UnivariatePolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

UnivariatePolynomial::UnivariatePolynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  trim();
}

void UnivariatePolynomial::trim() {
  const double m = max_abs(coeffs_);
  if (!(m > 0.0)) {
    coeffs_.clear();
    return;
  }
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= kTrimRelative * m) coeffs_.pop_back();
}

UnivariatePolynomial UnivariatePolynomial::from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return UnivariatePolynomial(std::move(c));
}

double UnivariatePolynomial::coefficient(int i) const {
  return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
}

double UnivariatePolynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

std::pair<double, double> UnivariatePolynomial::value_and_derivative(double x) const {
  double v = 0.0;
  double d = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    d = d * x + v;
    v = v * x + *it;
  }
  return {v, d};
}

double UnivariatePolynomial::magnitude_at(double x) const {
  const double ax = std::abs(x);
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * ax + std::abs(*it);
  return v;
}

UnivariatePolynomial UnivariatePolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return UnivariatePolynomial(std::move(d));
}

UnivariatePolynomial UnivariatePolynomial::normalized() const {
  const double m = max_abs(coeffs_);
  if (!(m > 0.0)) return {};
  std::vector<double> c(coeffs_);
  for (double& v : c) v /= m;
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator-(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator*(double s, const UnivariatePolynomial& a) {
  std::vector<double> c(a.coeffs_);
  for (double& v : c) v *= s;
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::operator-() const { return -1.0 * *this; }

UnivariatePolynomial UnivariatePolynomial::remainder(const UnivariatePolynomial& a,
                                                     const UnivariatePolynomial& b) {
  require(!b.is_zero(), "polynomial division by zero");
  std::vector<double> r(a.coeffs_);
  const int db = b.degree();
  const double lead = b.leading();
  for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
    const double q = r[k] / lead;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= q * b.coeffs_[j];
    r.pop_back();
  }
  return UnivariatePolynomial(std::move(r));
}

double cauchy_bound(const UnivariatePolynomial& p) {
  require(p.degree() >= 1, "Cauchy bound needs a non-constant polynomial");
  const auto& c = p.coefficients();
  const double lead = std::abs(c.back());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]) / lead);
  return 1.0 + m;
}

std::vector<UnivariatePolynomial> sturm_sequence(const UnivariatePolynomial& p) {
  require(p.degree() >= 1, "Sturm sequence needs a non-constant polynomial");
  std::vector<UnivariatePolynomial> chain;
  chain.reserve(p.degree() + 1);
  chain.push_back(p.normalized());
  chain.push_back(p.derivative().normalized());
  while (chain.back().degree() > 0) {
    const UnivariatePolynomial& a = chain[chain.size() - 2];
    const UnivariatePolynomial& b = chain.back();
    // Long division, tracking the scale of the terms that cancel so that a
    // remainder made of rounding noise is recognized as zero.
    std::vector<double> r(a.coefficients());
    const int db = b.degree();
    const double lead = b.leading();
    double qmax = 0.0;
    for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
      const double q = r[k] / lead;
      qmax = std::max(qmax, std::abs(q));
      for (int j = 0; j <= db; ++j) r[k - db + j] -= q * b.coefficients()[j];
      r.pop_back();
    }
    const double scale = 1.0 + qmax;  // a and b are normalized to max |c| = 1
    if (max_abs(r) <= kZeroRemainderRelative * scale) break;
    for (double& v : r) v = -v;
    UnivariatePolynomial next = UnivariatePolynomial(std::move(r)).normalized();
    if (next.is_zero()) break;
    chain.push_back(std::move(next));
  }
  return chain;
}

int sign_variations(std::span<const UnivariatePolynomial> chain, double x) {
  int count = 0;
  int last = 0;
  for (const UnivariatePolynomial& q : chain) {
    const double v = q(x);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int sturm_count(std::span<const UnivariatePolynomial> chain, double lo, double hi) {
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

namespace {

struct RootIsolator {
  const UnivariatePolynomial& p;
  std::span<const UnivariatePolynomial> chain;
  std::vector<double>& roots;

  // Single distinct root in (lo, hi].
  double refine(double lo, double hi) const {
    double flo = p(lo);
    const double fhi = p(hi);
    if (fhi == 0.0) return hi;
    if (flo != 0.0 && (flo < 0.0) != (fhi < 0.0)) return refine_bracketed(lo, hi, flo);
    // Even multiplicity: bisect on Sturm counts instead of signs.
    for (int i = 0; i < kMaxRefineSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(chain, lo, mid) > 0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  // Safeguarded Newton on a sign-changing bracket.
  double refine_bracketed(double lo, double hi, double flo) const {
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < kMaxRefineSteps; ++i) {
      const auto [f, df] = p.value_and_derivative(x);
      if (f == 0.0) return x;
      if ((f < 0.0) == (flo < 0.0)) {
        lo = x;
        flo = f;
      } else {
        hi = x;
      }
      const double ulp = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
      if (hi - lo <= ulp) return x;
      double next = df != 0.0 ? x - f / df : lo - 1.0;
      if (next > lo && next < hi) {
        if (std::abs(next - x) <= ulp) return next;
      } else {
        next = 0.5 * (lo + hi);
      }
      if (next == x) return x;
      x = next;
    }
    return x;
  }

  void isolate(double lo, double hi, int vlo, int vhi, int depth) {
    const int n = vlo - vhi;
    if (n <= 0) return;
    if (n == 1 || depth >= kMaxIsolationDepth || hi - lo <= 1e-14 * std::max(1.0, std::abs(lo))) {
      roots.push_back(refine(lo, hi));
      return;
    }
    double mid = 0.5 * (lo + hi);
    if (p(mid) == 0.0) mid = lo + 0.5001 * (hi - lo);
    const int vmid = sign_variations(chain, mid);
    isolate(lo, mid, vlo, vmid, depth + 1);
    isolate(mid, hi, vmid, vhi, depth + 1);
  }
};

}  // namespace

std::vector<double> isolate_and_refine(const UnivariatePolynomial& p, double lo, double hi) {
  require(p.degree() >= 1, "root isolation needs a non-constant polynomial");
  require(lo < hi, "root interval must be non-empty");
  std::vector<double> roots;
  if (p.degree() == 1) {
    const double r = -p.coefficient(0) / p.coefficient(1);
    if (r > lo && r <= hi) roots.push_back(r);
    return roots;
  }
  const std::vector<UnivariatePolynomial> chain = sturm_sequence(p);
  RootIsolator iso{p, chain, roots};
  iso.isolate(lo, hi, sign_variations(chain, lo), sign_variations(chain, hi), 0);
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= kDedupTol * std::max(1.0, std::abs(r))) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<double> real_roots(const UnivariatePolynomial& p) {
  const double b = cauchy_bound(p);
  return isolate_and_refine(p, -b, b);
}

std::array<double, 9> PolyMatrix3::evaluate(double x) const {
  std::array<double, 9> out{};
  for (int i = 0; i < 9; ++i) out[i] = entries_[i](x);
  return out;
}

UnivariatePolynomial polymat_det3(const PolyMatrix3& c) {
  return c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) -
         c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0)) +
         c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0));
}

}  // namespace relpose
