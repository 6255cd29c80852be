#include "schroder/conjugacy.hpp"

#include <cmath>

namespace schroder {

namespace {

constexpr double kPi = detail::pi<double>();

}  // namespace

ConjugacyPair conjugator(const MapInstance& map) {
  switch (map.family()) {
    case Family::Logistic:
      return {[](double t) {
                const double s = std::sin(0.5 * kPi * t);
                return s * s;
              },
              [](double x) { return 2.0 / kPi * std::asin(std::sqrt(x)); },
              [](double t) { return 0.5 * kPi * std::sin(kPi * t); },
              make_map(NrParams{2}), map, true};
    case Family::Chebyshev:
      return {[](double t) { return std::cos(kPi * t); }, [](double x) { return std::acos(x) / kPi; },
              [](double t) { return -kPi * std::sin(kPi * t); }, make_map(NrParams{map.branch_count()}), map, false};
    case Family::Lattes: {
      const EllipticContext ctx = *map.elliptic();
      const double w = ctx.omega1();
      return {[ctx, w](double t) { return weierstrass_p(w * t, ctx); },
              [ctx, w](double x) { return weierstrass_p_inv(x, ctx) / w; },
              [ctx, w](double t) { return w * weierstrass_p_prime(w * t, ctx); }, make_map(NrParams{2}), map, false};
    }
    case Family::Sn2: {
      const double m = map.sn2_parameter();
      const double k = complete_k(m);
      return {[m, k](double t) {
                const double s = jacobi_sn(k * t, m);
                return s * s;
              },
              [m, k](double x) { return elliptic_f_sin(std::sqrt(x), m) / k; },
              [m, k](double t) {
                const auto j = jacobi_elliptic(k * t, m);
                return 2.0 * k * j.sn * j.cn * j.dn;
              },
              make_map(NrParams{2}), map, true};
    }
    case Family::CauchyDoubling:
      return {[](double t) { return std::tan(kPi * (t - 0.5)); }, [](double x) { return 0.5 + std::atan(x) / kPi; },
              [](double t) {
                const double c = std::cos(kPi * (t - 0.5));
                return kPi / (c * c);
              },
              make_map(RenyiParams{2}), map, true};
    case Family::Renyi:
    case Family::Nr:
      raise(ErrorKind::NoConjugator, map.describe() + " is its own piecewise-linear base");
    case Family::BooleLft:
      raise(ErrorKind::NoConjugator, map.describe() + " has no catalog conjugator (invertible map with an attracting fixed point)");
  }
  raise(ErrorKind::NoConjugator, map.describe());
}

double conjugacy_residual(const ConjugacyPair& pair, int grid_size, double theta_lo, double theta_hi) {
  if (grid_size < 2) raise(ErrorKind::InvalidParameter, "conjugacy_residual: grid_size must be >= 2");
  const double step = (theta_hi - theta_lo) / grid_size;
  const auto& folds = pair.base.breakpoints();
  double worst = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double theta = theta_lo + (i + 0.5) * step;
    if (theta <= 0.0 || theta > 1.0) continue;
    bool near_fold = false;
    for (double f : folds) near_fold = near_fold || std::abs(theta - f) <= 1e-12;
    if (near_fold) continue;
    const double lhs = pair.target.eval(pair.h(theta));
    const double rhs = pair.h(pair.base.eval(theta));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

DensityModel pushforward_density(const ConjugacyPair& pair) {
  const MapInstance& map = pair.target;
  const Interval dom = map.domain();
  switch (map.family()) {
    case Family::Logistic:
      return {"logistic", dom, 1.0 / kPi, [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }};
    case Family::Chebyshev:
      return {"chebyshev", dom, 1.0 / kPi, [](double x) { return 1.0 / std::sqrt((1.0 - x) * (1.0 + x)); }};
    case Family::Lattes: {
      const EllipticContext ctx = *map.elliptic();
      return {"lattes", dom, 1.0 / ctx.omega1(), [ctx](double x) {
                if (x == kInf) return 0.0;
                return 1.0 / std::sqrt(ctx.cubic(x));
              }};
    }
    case Family::Sn2: {
      const double m = map.sn2_parameter();
      return {"sn2", dom, 1.0 / (2.0 * complete_k(m)),
              [m](double x) { return 1.0 / std::sqrt(x * (1.0 - x) * (1.0 - m * x)); }};
    }
    case Family::CauchyDoubling:
      return {"cauchy_doubling", dom, 1.0 / kPi, [](double x) { return 1.0 / (1.0 + x * x); }};
    default: break;
  }
  raise(ErrorKind::NoConjugator, map.describe());
}

DensityModel catalog_density(const MapInstance& map) {
  if (map.piecewise_linear()) return {std::string(to_string(map.family())), map.domain(), 1.0, [](double) { return 1.0; }};
  if (map.family() == Family::BooleLft)
    raise(ErrorKind::NoConjugator,
          map.describe() + ": the Cauchy density claimed for the hyperbolic linear fractional map is not invariant; "
                           "orbits converge to the attracting fixed point");
  return pushforward_density(conjugator(map));
}

double measure_cdf(const ConjugacyPair& pair, double x) {
  const Interval& dom = pair.target.domain();
  if (!dom.contains_closure(x)) raise(ErrorKind::Domain, "measure_cdf: x outside the domain of " + pair.target.describe());
  if (x == dom.lo) return 0.0;
  if (x == dom.hi) return 1.0;
  const double theta = pair.h_inv(x);
  return std::clamp(pair.increasing ? theta : 1.0 - theta, 0.0, 1.0);
}

}  // namespace schroder
