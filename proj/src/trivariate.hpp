#pragma once

// Dense polynomials in three variables with bounded total degree, used to
// expand the polynomial systems of the minimal solvers numerically.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace relpose::detail {

template <int D>
struct Trivariate {
  static constexpr int kSide = D + 1;
  std::array<double, kSide * kSide * kSide> c{};

  static constexpr int index(int i, int j, int k) { return (i * kSide + j) * kSide + k; }
  double& at(int i, int j, int k) { return c[index(i, j, k)]; }
  double at(int i, int j, int k) const {
    return i <= D && j <= D && k <= D ? c[index(i, j, k)] : 0.0;
  }

  static Trivariate constant(double v) {
    Trivariate p;
    p.at(0, 0, 0) = v;
    return p;
  }

  template <int E>
  Trivariate<(D > E ? D : E)> operator+(const Trivariate<E>& o) const {
    Trivariate<(D > E ? D : E)> r;
    add_into(r, 1.0);
    o.add_into(r, 1.0);
    return r;
  }

  template <int E>
  Trivariate<(D > E ? D : E)> operator-(const Trivariate<E>& o) const {
    Trivariate<(D > E ? D : E)> r;
    add_into(r, 1.0);
    o.add_into(r, -1.0);
    return r;
  }

  Trivariate& operator+=(const Trivariate& o) {
    for (std::size_t n = 0; n < c.size(); ++n) c[n] += o.c[n];
    return *this;
  }

  Trivariate operator*(double s) const {
    Trivariate r = *this;
    for (double& v : r.c) v *= s;
    return r;
  }

  template <int E>
  void add_into(Trivariate<E>& r, double s) const {
    static_assert(E >= D);
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j)
        for (int k = 0; i + j + k <= D; ++k) r.at(i, j, k) += s * at(i, j, k);
  }

  template <int E>
  Trivariate<D + E> operator*(const Trivariate<E>& o) const {
    Trivariate<D + E> r;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j)
        for (int k = 0; i + j + k <= D; ++k) {
          const double a = at(i, j, k);
          if (a == 0.0) continue;
          for (int p = 0; p <= E; ++p)
            for (int q = 0; p + q <= E; ++q)
              for (int s = 0; p + q + s <= E; ++s) r.at(i + p, j + q, k + s) += a * o.at(p, q, s);
        }
    return r;
  }

  // Lifts to a higher degree bound.
  template <int E>
  Trivariate<E> widen() const {
    Trivariate<E> r;
    add_into(r, 1.0);
    return r;
  }
};

using Linear3 = Trivariate<1>;

inline Linear3 linear3(double c0, double cx, double cy, double cz) {
  Linear3 p;
  p.at(0, 0, 0) = c0;
  p.at(1, 0, 0) = cx;
  p.at(0, 1, 0) = cy;
  p.at(0, 0, 1) = cz;
  return p;
}

struct Exponent {
  int a;
  int b;
  int c;
};

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Gauss-Newton refinement of a root of the polynomial system a * m(x) = 0,
// where m lists the monomials of `cols`. Steps are kept only while the
// residual norm decreases.
template <typename Matrix, typename Monomial>
Eigen::Vector3d polish_root(const Matrix& a, const Monomial* cols, Eigen::Vector3d x, int iterations = 3) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd m(n);
  Eigen::MatrixXd dm(n, 3);
  auto eval = [&](const Eigen::Vector3d& p, bool with_jacobian) {
    for (int k = 0; k < n; ++k) {
      const int e[3] = {cols[k].a, cols[k].b, cols[k].c};
      const double v[3] = {ipow(p[0], e[0]), ipow(p[1], e[1]), ipow(p[2], e[2])};
      m[k] = v[0] * v[1] * v[2];
      if (!with_jacobian) continue;
      dm(k, 0) = e[0] ? e[0] * ipow(p[0], e[0] - 1) * v[1] * v[2] : 0.0;
      dm(k, 1) = e[1] ? e[1] * v[0] * ipow(p[1], e[1] - 1) * v[2] : 0.0;
      dm(k, 2) = e[2] ? e[2] * v[0] * v[1] * ipow(p[2], e[2] - 1) : 0.0;
    }
  };
  eval(x, true);
  Eigen::VectorXd f = a * m;
  double norm = f.norm();
  for (int it = 0; it < iterations && norm > 0.0; ++it) {
    const Eigen::MatrixXd j = a * dm;
    const Eigen::Vector3d step = j.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    const Eigen::Vector3d next = x + step;
    eval(next, true);
    const Eigen::VectorXd fn = a * m;
    const double nn = fn.norm();
    if (!(nn < norm)) break;
    x = next;
    f = fn;
    norm = nn;
  }
  return x;
}

}  // namespace relpose::detail
