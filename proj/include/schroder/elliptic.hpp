#ifndef SCHRODER_ELLIPTIC_HPP
#define SCHRODER_ELLIPTIC_HPP

// Real-argument elliptic kernel: Carlson's R_F, the complete integral K(m),
// Jacobi sn/cn/dn by the AGM (descending Landen) scheme, and the Weierstrass
// function for real invariants with positive discriminant. Everything is
// templated on the scalar type; the library itself instantiates double.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "schroder/error.hpp"

namespace schroder {

namespace detail {

template <typename Scalar>
constexpr Scalar pi() {
  return static_cast<Scalar>(3.141592653589793238462643383279502884L);
}

template <typename Scalar>
std::string format_pair(const char* a, Scalar x, const char* b, Scalar y) {
  std::ostringstream os;
  os.precision(17);
  os << a << '=' << x << ", " << b << '=' << y;
  return os.str();
}

}  // namespace detail

/// Carlson's symmetric integral R_F(x,y,z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)).
/// Duplication algorithm followed by the fifth-order series, relative error
/// near machine precision.
template <typename Scalar>
Scalar carlson_rf(Scalar x, Scalar y, Scalar z) {
  using std::abs;
  using std::max;
  using std::pow;
  using std::sqrt;
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z)))
    raise(ErrorKind::Domain, "carlson_rf: arguments must be finite");
  if (x < 0 || y < 0 || z < 0) raise(ErrorKind::Domain, "carlson_rf: negative argument");
  if (int(x == 0) + int(y == 0) + int(z == 0) >= 2)
    raise(ErrorKind::Domain, "carlson_rf: at most one argument may be zero");

  const Scalar tol = pow(3 * std::numeric_limits<Scalar>::epsilon() * Scalar(0.01), Scalar(1) / 6);
  const Scalar a0 = (x + y + z) / 3;
  Scalar an = a0;
  Scalar q = max(max(abs(a0 - x), abs(a0 - y)), abs(a0 - z)) / tol;
  Scalar xn = x, yn = y, zn = z, mul = 1;
  while (q >= mul * abs(an)) {
    const Scalar sx = sqrt(xn), sy = sqrt(yn), sz = sqrt(zn);
    const Scalar lam = sx * sy + sy * sz + sz * sx;
    an = (an + lam) / 4;
    xn = (xn + lam) / 4;
    yn = (yn + lam) / 4;
    zn = (zn + lam) / 4;
    mul *= 4;
  }
  const Scalar dx = (a0 - x) / (mul * an);
  const Scalar dy = (a0 - y) / (mul * an);
  const Scalar dz = -(dx + dy);
  const Scalar e2 = dx * dy - dz * dz;
  const Scalar e3 = dx * dy * dz;
  return (e3 * (Scalar(6930) * e3 + e2 * (Scalar(15015) * e2 - Scalar(16380)) + Scalar(17160)) +
          e2 * ((Scalar(10010) - Scalar(5775) * e2) * e2 - Scalar(24024)) + Scalar(240240)) /
         (Scalar(240240) * sqrt(an));
}

/// Complete elliptic integral of the first kind, K(m) = pi / (2 AGM(1, sqrt(1-m))).
template <typename Scalar>
Scalar complete_k(Scalar m) {
  using std::abs;
  using std::sqrt;
  if (!(m >= 0 && m < 1)) raise(ErrorKind::Domain, "complete_k: parameter m must lie in [0,1)");
  Scalar a = 1, b = sqrt(1 - m);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  while (abs(a - b) > eps * a) {
    const Scalar an = (a + b) / 2;
    b = sqrt(a * b);
    a = an;
  }
  return detail::pi<Scalar>() / (a + b);
}

/// Incomplete integral of the first kind written in terms of s = sin(phi):
/// F(asin s | m) = s R_F(1 - s^2, 1 - m s^2, 1), for s in [-1, 1].
template <typename Scalar>
Scalar elliptic_f_sin(Scalar s, Scalar m) {
  if (!(m >= 0 && m < 1)) raise(ErrorKind::Domain, "elliptic_f_sin: parameter m must lie in [0,1)");
  if (!(s >= -1 && s <= 1)) raise(ErrorKind::Domain, "elliptic_f_sin: |s| must not exceed 1");
  if (s == 0) return Scalar(0);
  const Scalar s2 = s * s;
  return s * carlson_rf<Scalar>(1 - s2, 1 - m * s2, Scalar(1));
}

template <typename Scalar>
struct JacobiValues {
  Scalar sn;
  Scalar cn;
  Scalar dn;
};

/// sn, cn and dn from one AGM pass. The argument is first reduced modulo the
/// real period 4K(m).
template <typename Scalar>
JacobiValues<Scalar> jacobi_elliptic(Scalar u, Scalar m) {
  using std::abs;
  using std::asin;
  using std::cos;
  using std::ldexp;
  using std::sin;
  using std::sqrt;
  if (!(m >= 0 && m < 1)) raise(ErrorKind::Domain, "jacobi_elliptic: parameter m must lie in [0,1)");
  if (!std::isfinite(u)) raise(ErrorKind::Domain, "jacobi_elliptic: argument must be finite");

  constexpr int kMaxLevels = 40;
  std::array<Scalar, kMaxLevels> a{}, c{};
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  a[0] = 1;
  c[0] = sqrt(m);
  Scalar b = sqrt(1 - m);
  int n = 0;
  while (abs(c[n]) > eps * a[n] && n + 1 < kMaxLevels) {
    a[n + 1] = (a[n] + b) / 2;
    c[n + 1] = (a[n] - b) / 2;
    b = sqrt(a[n] * b);
    ++n;
  }

  const Scalar quarter = detail::pi<Scalar>() / (2 * a[n]);  // K(m)
  const Scalar period = 4 * quarter;
  const Scalar ur = u - period * std::round(u / period);

  Scalar phi = ldexp(a[n] * ur, n);
  for (int j = n; j > 0; --j) phi = (phi + asin(c[j] * sin(phi) / a[j])) / 2;

  const Scalar s = sin(phi);
  return {s, cos(phi), sqrt(1 - m * s * s)};
}

template <typename Scalar>
Scalar jacobi_sn(Scalar u, Scalar m) {
  return jacobi_elliptic(u, m).sn;
}

/// g2^3 - 27 g3^2. Positive exactly when 4s^3 - g2 s - g3 has three distinct real roots.
template <typename Scalar>
constexpr Scalar discriminant(Scalar g2, Scalar g3) {
  return g2 * g2 * g2 - 27 * g3 * g3;
}

/// Real roots of 4s^3 - g2 s - g3, sorted descending.
template <typename Scalar>
std::array<Scalar, 3> cubic_roots(Scalar g2, Scalar g3) {
  using std::acos;
  using std::cos;
  using std::sqrt;
  if (!(discriminant(g2, g3) > 0))
    raise(ErrorKind::Domain, "cubic_roots: discriminant g2^3 - 27 g3^2 <= 0 (" +
                                 detail::format_pair("g2", g2, "g3", g3) + ")");
  // Depressed form t^3 + p t + q with p = -g2/4, q = -g3/4; trigonometric solution.
  const Scalar p = -g2 / 4, q = -g3 / 4;
  const Scalar amp = 2 * sqrt(-p / 3);
  const Scalar arg = std::clamp(Scalar(3) * q / (2 * p) * sqrt(Scalar(-3) / p), Scalar(-1), Scalar(1));
  const Scalar theta = acos(arg) / 3;
  std::array<Scalar, 3> e;
  for (int k = 0; k < 3; ++k) {
    Scalar s = amp * cos(theta - 2 * detail::pi<Scalar>() * k / 3);
    const Scalar f = 4 * s * s * s - g2 * s - g3;
    const Scalar fp = 12 * s * s - g2;
    if (fp != 0) s -= f / fp;
    e[k] = s;
  }
  std::sort(e.begin(), e.end(), [](Scalar l, Scalar r) { return l > r; });
  return e;
}

/// Real invariants (g2, g3) with positive discriminant, together with the
/// derived roots, half-period and Jacobi parameter. Immutable.
template <typename Scalar>
class BasicEllipticContext {
 public:
  BasicEllipticContext(Scalar g2, Scalar g3) : g2_(g2), g3_(g3), disc_(discriminant(g2, g3)) {
    using std::sqrt;
    if (!(disc_ > 0))
      raise(ErrorKind::InvalidParameter, "disc <= 0: discriminant g2^3 - 27 g3^2 must be positive (" +
                                             detail::format_pair("g2", g2, "g3", g3) + ")");
    const auto e = cubic_roots(g2, g3);
    e1_ = e[0];
    e2_ = e[1];
    e3_ = e[2];
    m_ = (e2_ - e3_) / (e1_ - e3_);
    scale_ = sqrt(e1_ - e3_);
    omega1_ = carlson_rf<Scalar>(0, e1_ - e2_, e1_ - e3_);
  }

  Scalar g2() const { return g2_; }
  Scalar g3() const { return g3_; }
  Scalar disc() const { return disc_; }
  Scalar e1() const { return e1_; }
  Scalar e2() const { return e2_; }
  Scalar e3() const { return e3_; }
  /// Real half-period; the real period of the Weierstrass function is 2*omega1.
  Scalar omega1() const { return omega1_; }
  /// Jacobi parameter (e2 - e3)/(e1 - e3).
  Scalar m() const { return m_; }
  /// sqrt(e1 - e3), the argument scale of the Jacobi reduction.
  Scalar scale() const { return scale_; }

  /// 4s^3 - g2 s - g3 in factored form, accurate near the roots.
  Scalar cubic(Scalar s) const { return 4 * (s - e1_) * (s - e2_) * (s - e3_); }

 private:
  Scalar g2_, g3_, disc_;
  Scalar e1_{}, e2_{}, e3_{};
  Scalar m_{}, scale_{}, omega1_{};
};

using EllipticContext = BasicEllipticContext<double>;

namespace detail {

/// Reduces x into (0, omega1] using periodicity and evenness about omega1.
/// `upper` reports whether x sat in the second half of the period.
template <typename Scalar>
Scalar reduce_real_period(Scalar x, const BasicEllipticContext<Scalar>& ctx, bool& upper) {
  using std::fmod;
  if (!std::isfinite(x)) raise(ErrorKind::Domain, "weierstrass: argument must be finite");
  const Scalar w = ctx.omega1();
  Scalar r = fmod(x, 2 * w);
  if (r < 0) r += 2 * w;
  upper = r > w;
  if (upper) r = 2 * w - r;
  if (r < Scalar(1e-9) * w) {
    std::ostringstream os;
    os.precision(17);
    os << "weierstrass: x=" << x << " lies within 1e-9*omega1 of a lattice point";
    raise(ErrorKind::Pole, os.str());
  }
  return r;
}

}  // namespace detail

/// Weierstrass p on the real line, p(x) = e3 + (e1 - e3) / sn^2(x sqrt(e1 - e3) | m).
template <typename Scalar>
Scalar weierstrass_p(Scalar x, const BasicEllipticContext<Scalar>& ctx) {
  bool upper;
  const Scalar r = detail::reduce_real_period(x, ctx, upper);
  const Scalar sn = jacobi_sn(r * ctx.scale(), ctx.m());
  return ctx.e3() + (ctx.e1() - ctx.e3()) / (sn * sn);
}

/// p'(x) = -2 (e1 - e3)^{3/2} cn dn / sn^3: negative on (0, omega1), positive on (omega1, 2 omega1).
template <typename Scalar>
Scalar weierstrass_p_prime(Scalar x, const BasicEllipticContext<Scalar>& ctx) {
  bool upper;
  const Scalar r = detail::reduce_real_period(x, ctx, upper);
  const auto j = jacobi_elliptic(r * ctx.scale(), ctx.m());
  const Scalar s = ctx.scale();
  const Scalar mag = 2 * s * s * s * j.cn * j.dn / (j.sn * j.sn * j.sn);
  return upper ? mag : -mag;
}

/// p''(x) = 6 p^2 - g2/2.
template <typename Scalar>
Scalar weierstrass_p_second(Scalar x, const BasicEllipticContext<Scalar>& ctx) {
  const Scalar p = weierstrass_p(x, ctx);
  return 6 * p * p - ctx.g2() / 2;
}

/// Inverse on the first half-period: int_u^inf ds / sqrt(4s^3 - g2 s - g3)
/// = R_F(u - e1, u - e2, u - e3), with values in (0, omega1].
template <typename Scalar>
Scalar weierstrass_p_inv(Scalar u, const BasicEllipticContext<Scalar>& ctx) {
  if (std::isnan(u)) raise(ErrorKind::Domain, "weierstrass_p_inv: NaN argument");
  if (u == std::numeric_limits<Scalar>::infinity()) return Scalar(0);
  if (u < ctx.e1()) {
    std::ostringstream os;
    os.precision(17);
    os << "weierstrass_p_inv: u=" << u << " is below e1=" << ctx.e1();
    raise(ErrorKind::Domain, os.str());
  }
  return carlson_rf<Scalar>(u - ctx.e1(), u - ctx.e2(), u - ctx.e3());
}

}  // namespace schroder

#endif  // SCHRODER_ELLIPTIC_HPP
