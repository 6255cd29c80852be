#include "schroder/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace schroder {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

Segment gk15(const ScalarFn& g, double a, double b) {
  // A non-finite node value means the substituted argument rounded onto an
  // integrable endpoint singularity; bisection shrinks its weight to nothing.
  auto f = [&g](double x) {
    const double v = g(x);
    return std::isfinite(v) ? v : 0.0;
  };
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double s = f(c - dx) + f(c + dx);
    kron += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadratureResult integrate_gk(const ScalarFn& f, double a, double b, const QuadratureOptions& opt) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<Segment> segs{gk15(f, a, b)};
  out.evaluations = 15;
  auto worse = [](const Segment& l, const Segment& r) { return l.error < r.error; };
  while (true) {
    double value = 0.0, error = 0.0;
    for (const auto& s : segs) {
      value += s.value;
      error += s.error;
    }
    out.value = value;
    out.error = error;
    if (error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(segs.size()) >= opt.max_intervals) break;
    std::pop_heap(segs.begin(), segs.end(), worse);
    const Segment w = segs.back();
    segs.pop_back();
    const double m = 0.5 * (w.a + w.b);
    if (m <= w.a || m >= w.b) {  // cannot bisect further
      segs.push_back(w);
      std::push_heap(segs.begin(), segs.end(), worse);
      break;
    }
    segs.push_back(gk15(f, w.a, m));
    std::push_heap(segs.begin(), segs.end(), worse);
    segs.push_back(gk15(f, m, w.b));
    std::push_heap(segs.begin(), segs.end(), worse);
    out.evaluations += 30;
  }
  return out;
}

namespace {

void accumulate(QuadratureResult& total, const QuadratureResult& part) {
  total.value += part.value;
  total.error += part.error;
  total.evaluations += part.evaluations;
  total.converged = total.converged && part.converged;
}

// Finite [a, b] with possible inverse-square-root behaviour at both ends.
QuadratureResult finite_piece(const ScalarFn& f, double a, double b, const QuadratureOptions& opt) {
  QuadratureResult total;
  total.converged = true;
  const double c = 0.5 * (a + b);
  // x = a + t^2 rounds in x; the Jacobian uses the offset actually realized
  // so the substituted integrand stays smooth, and offsets below one ulp are
  // raised to one ulp instead of landing on the endpoint itself.
  accumulate(total, integrate_gk(
                        [&](double t) {
                          double x = a + t * t;
                          if (x == a) x = std::nextafter(a, b);
                          return 2.0 * std::sqrt(x - a) * f(x);
                        },
                        0.0, std::sqrt(c - a), opt));
  accumulate(total, integrate_gk(
                        [&](double t) {
                          double x = b - t * t;
                          if (x == b) x = std::nextafter(b, a);
                          return 2.0 * std::sqrt(b - x) * f(x);
                        },
                        0.0, std::sqrt(b - c), opt));
  return total;
}

}  // namespace

QuadratureResult integrate_singular(const ScalarFn& f, const Interval& domain, std::span<const double> cuts,
                                    const QuadratureOptions& opt) {
  std::vector<double> knots{domain.lo};
  for (double c : cuts)
    if (c > domain.lo && c < domain.hi) knots.push_back(c);
  if (!std::isfinite(domain.lo) && !std::isfinite(domain.hi) && knots.size() == 1) knots.push_back(0.0);
  knots.push_back(domain.hi);
  std::sort(knots.begin() + 1, knots.end() - 1);

  QuadratureResult total;
  total.converged = true;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    if (std::isfinite(a) && std::isfinite(b)) {
      accumulate(total, finite_piece(f, a, b, opt));
    } else if (std::isfinite(a)) {
      const double c = a + std::max(1.0, std::abs(a));
      accumulate(total, finite_piece(f, a, c, opt));
      accumulate(total, integrate_gk(
                            [&](double s) {
                              const double y = c - 1.0 + 1.0 / (s * s);
                              return 2.0 * f(y) / (s * s * s);
                            },
                            0.0, 1.0, opt));
    } else {
      const double c = b - std::max(1.0, std::abs(b));
      accumulate(total, finite_piece(f, c, b, opt));
      accumulate(total, integrate_gk(
                            [&](double s) {
                              const double y = c + 1.0 - 1.0 / (s * s);
                              return 2.0 * f(y) / (s * s * s);
                            },
                            0.0, 1.0, opt));
    }
  }
  return total;
}

double gauss5(const ScalarFn& f, double a, double b) {
  static constexpr std::array<double, 3> x = {0.0, 0.538469310105683091036314420700208,
                                              0.906179845938663992797626878299393};
  static constexpr std::array<double, 3> w = {0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
                                              0.236926885056189087514264040719918};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = w[0] * f(c);
  for (int i = 1; i < 3; ++i) acc += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  return acc * h;
}

}  // namespace schroder
