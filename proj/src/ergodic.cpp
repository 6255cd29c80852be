#include "schroder/ergodic.hpp"

#include <cmath>
#include <sstream>

#include "schroder/quadrature.hpp"

namespace schroder {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

constexpr double kDriftGuard = 1e-12;

}  // namespace

void check_not_singular(const MapInstance& map, double x) {
  for (double s : map.singularities())
    if (std::abs(x - s) <= kDriftGuard * std::max(1.0, std::abs(s)))
      raise(ErrorKind::Singularity, map.describe() + ": orbit reached the singular point x=" + num(s));
}

OrbitStepper::OrbitStepper(const MapInstance& map, std::uint64_t seed, bool refresh, bool guard_singular)
    : map_(map), rng_(seed), refresh_(refresh && map.piecewise_linear()), guard_(guard_singular) {}

double OrbitStepper::step(double x) {
  double y;
  if (guard_) {
    check_not_singular(map_, x);
    y = map_.eval(x);
  } else {
    try {
      y = map_.eval(x);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singularity) throw;
      const double h = kDriftGuard * std::max(1.0, std::abs(x));
      y = map_.eval(map_.domain().contains_closure(x + h) ? x + h : x - h);
      ++nudges_;
    }
  }
  if (refresh_) {
    y += (rng_.uniform() - 0.5) * map_.branch_count() * 0x1.0p-53;
    if (y < 0.0) y = -y;
    if (y > 1.0) y = 2.0 - y;
  }
  const Interval& d = map_.domain();
  if (!d.contains_closure(y)) {
    if (y < d.lo && d.lo - y <= kDriftGuard)
      y = d.lo;
    else if (y > d.hi && y - d.hi <= kDriftGuard)
      y = d.hi;
    else
      raise(ErrorKind::OrbitEscape, map_.describe() + ": iterate " + num(y) + " left the domain");
  }
  return y;
}

double iterate(const MapInstance& map, double x0, long n) {
  if (!map.domain().contains_closure(x0)) raise(ErrorKind::Domain, "iterate: x0 outside the domain");
  OrbitStepper stepper(map, 0, false);
  double x = x0;
  for (long i = 0; i < n; ++i) x = stepper.step(x);
  return x;
}

std::vector<double> iterate_orbit(const MapInstance& map, double x0, long n) {
  if (!map.domain().contains_closure(x0)) raise(ErrorKind::Domain, "iterate: x0 outside the domain");
  OrbitStepper stepper(map, 0, false);
  std::vector<double> orbit{x0};
  orbit.reserve(n + 1);
  for (long i = 0; i < n; ++i) orbit.push_back(stepper.step(orbit.back()));
  return orbit;
}

double draw_initial_point(const MapInstance& map, std::uint64_t seed) {
  const ChartedMap view = bounded_view(map);
  const Interval r = view.domain();
  SplitMix64 rng(seed ^ 0x5eed5eed5eed5eedULL);
  return view.chart().to_x(r.lo + r.length() * rng.uniform());
}

OrbitStats lyapunov_birkhoff(const MapInstance& map, double x0, long n_steps, long burn_in, std::uint64_t seed) {
  if (burn_in < 0 || n_steps - burn_in < 100000)
    raise(ErrorKind::InvalidParameter, "lyapunov_birkhoff: need burn_in >= 0 and n_steps - burn_in >= 1e5");
  if (!map.domain().contains_closure(x0)) raise(ErrorKind::Domain, "lyapunov_birkhoff: x0 outside the domain");
  OrbitStats stats;
  stats.n_steps = n_steps;
  stats.burn_in = burn_in;
  stats.seed = seed;
  OrbitStepper stepper(map, seed, true, false);
  double x = x0;
  for (long i = 0; i < n_steps; ++i) {
    if (i >= burn_in) {
      double d = 0.0;
      try {
        d = map.deriv(x);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Breakpoint && e.kind() != ErrorKind::Singularity) throw;
      }
      if (d == 0.0 || !std::isfinite(d))
        ++stats.skipped;
      else
        stats.lyapunov_sum += std::log(std::abs(d));
    }
    x = stepper.step(x);
  }
  stats.final_x = x;
  if (stats.skipped > 0.001 * static_cast<double>(n_steps - burn_in))
    raise(ErrorKind::DegenerateOrbit,
          "lyapunov_birkhoff: " + std::to_string(stats.skipped) + " skipped iterates exceed 0.1% of the steps");
  return stats;
}

OrbitStats lyapunov_birkhoff_seeded(const MapInstance& map, long n_steps, long burn_in, std::uint64_t seed) {
  return lyapunov_birkhoff(map, draw_initial_point(map, seed), n_steps, burn_in, seed);
}

double lyapunov_quadrature(const MapInstance& map, const DensityModel& rho) {
  std::vector<double> cuts = map.breakpoints();
  cuts.insert(cuts.end(), map.singularities().begin(), map.singularities().end());
  // Quadrature nodes can land exactly on a breakpoint or singular endpoint
  // after rounding; such single points carry no mass.
  auto integrand = [&](double x) {
    const double p = rho(x);
    if (p == 0.0) return 0.0;
    try {
      return std::log(std::abs(map.deriv(x))) * p;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Breakpoint && e.kind() != ErrorKind::Singularity) throw;
      return 0.0;
    }
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  const QuadratureResult res = integrate_singular(integrand, map.domain(), cuts, opt);
  if (!std::isfinite(res.value) || (!res.converged && res.error > 1e-7))
    raise(ErrorKind::NonIntegrable, "lyapunov_quadrature: ln|T'| rho is not integrable for " + map.describe());
  return res.value;
}

}  // namespace schroder
