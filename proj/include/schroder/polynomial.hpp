#ifndef SCHRODER_POLYNOMIAL_HPP
#define SCHRODER_POLYNOMIAL_HPP

// Dense polynomials and truncated power series stored as Eigen column vectors
// of coefficients in ascending order: p(t) = sum_k p[k] t^k.

#include <Eigen/Dense>
#include <algorithm>

#include "schroder/error.hpp"

namespace schroder {

template <typename Scalar>
using Poly = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Polyd = Poly<double>;

template <typename Derived>
typename Derived::Scalar polyval(const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar x) {
  typename Derived::Scalar acc(0);
  for (Eigen::Index k = p.size() - 1; k >= 0; --k) acc = acc * x + p(k);
  return acc;
}

template <typename Derived>
Poly<typename Derived::Scalar> polyder(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.size() <= 1) return Poly<Scalar>::Zero(1);
  Poly<Scalar> d(p.size() - 1);
  for (Eigen::Index k = 1; k < p.size(); ++k) d(k - 1) = Scalar(k) * p(k);
  return d;
}

/// Full product (convolution) of two coefficient vectors.
template <typename DA, typename DB>
Poly<typename DA::Scalar> polymul(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  Poly<Scalar> c = Poly<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) c(i + j) += a(i) * b(j);
  return c;
}

/// Coefficients of t -> p(x0 + t) (Taylor shift by repeated synthetic division).
template <typename Derived>
Poly<typename Derived::Scalar> taylor_shift(const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar x0) {
  Poly<typename Derived::Scalar> c = p;
  const Eigen::Index n = c.size();
  for (Eigen::Index i = 0; i < n - 1; ++i)
    for (Eigen::Index k = n - 2; k >= i; --k) c(k) += x0 * c(k + 1);
  return c;
}

/// Resizes a coefficient vector to exactly `order + 1` terms (truncating or zero-padding).
template <typename Derived>
Poly<typename Derived::Scalar> truncate(const Eigen::MatrixBase<Derived>& p, Eigen::Index order) {
  using Scalar = typename Derived::Scalar;
  Poly<Scalar> out = Poly<Scalar>::Zero(order + 1);
  const Eigen::Index n = std::min<Eigen::Index>(order + 1, p.size());
  out.head(n) = p.head(n);
  return out;
}

template <typename DA, typename DB>
Poly<typename DA::Scalar> series_mul(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                     Eigen::Index order) {
  using Scalar = typename DA::Scalar;
  Poly<Scalar> c = Poly<Scalar>::Zero(order + 1);
  for (Eigen::Index i = 0; i < a.size() && i <= order; ++i)
    for (Eigen::Index j = 0; j < b.size() && i + j <= order; ++j) c(i + j) += a(i) * b(j);
  return c;
}

/// Truncated quotient a/b of power series; b(0) must be nonzero.
template <typename DA, typename DB>
Poly<typename DA::Scalar> series_div(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                     Eigen::Index order) {
  using Scalar = typename DA::Scalar;
  if (b.size() == 0 || b(0) == Scalar(0)) raise(ErrorKind::Singularity, "series_div: zero constant term in divisor");
  const Poly<Scalar> num = truncate(a, order);
  const Poly<Scalar> den = truncate(b, order);
  Poly<Scalar> q = Poly<Scalar>::Zero(order + 1);
  for (Eigen::Index n = 0; n <= order; ++n) {
    Scalar acc = num(n);
    for (Eigen::Index k = 1; k <= n; ++k) acc -= den(k) * q(n - k);
    q(n) = acc / den(0);
  }
  return q;
}

}  // namespace schroder

#endif  // SCHRODER_POLYNOMIAL_HPP
