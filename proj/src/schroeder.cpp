#include "schroder/schroeder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schroder/parallel.hpp"
#include "schroder/quadrature.hpp"

namespace schroder {

namespace {

constexpr double kTiny = 1e-300;

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

KoenigsSeries from_taylor(Polyd taylor, double fixed_point, int order) {
  if (order < 1) raise(ErrorKind::InvalidParameter, "koenigs_series: order must be >= 1");
  if (!(std::abs(taylor(0) - fixed_point) <= 1e-12 * std::max(1.0, std::abs(fixed_point)))) {
    std::ostringstream os;
    os.precision(17);
    os << "koenigs_series: x=" << fixed_point << " is not fixed (T(x)=" << taylor(0) << ")";
    raise(ErrorKind::NotFixedPoint, os.str());
  }
  const double lambda = taylor(1);
  if (std::abs(lambda) <= 1e-12 || std::abs(std::abs(lambda) - 1.0) <= 1e-12)
    raise(ErrorKind::Resonance, "koenigs_series: multiplier must satisfy |lambda| not in {0, 1}");
  for (int n = 2; n <= order; ++n) {
    const double ln = std::pow(lambda, n);
    if (std::abs(lambda - ln) <= 1e-12 * std::max(1.0, std::abs(ln)))
      raise(ErrorKind::Resonance, "koenigs_series: lambda^" + std::to_string(n) + " = lambda");
  }

  Polyd p = truncate(taylor, order);
  p(0) = 0.0;
  std::vector<Polyd> powers(order + 1);
  powers[1] = p;
  for (int k = 2; k <= order; ++k) powers[k] = series_mul(powers[k - 1], p, order);

  Polyd c = Polyd::Zero(order + 1);
  c(1) = 1.0;
  for (int n = 2; n <= order; ++n) {
    double acc = 0.0;
    for (int k = 1; k < n; ++k) acc += c(k) * powers[k](n);
    c(n) = acc / (lambda - std::pow(lambda, n));
  }
  return {fixed_point, lambda, c, truncate(taylor, order)};
}

}  // namespace

std::vector<double> interval_grid(double lo, double hi, int n, double margin) {
  if (n < 2) raise(ErrorKind::InvalidParameter, "grid needs at least two points");
  const double a = lo + margin, b = hi - margin;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

std::vector<double> residual_grid(const MapInstance& map, int n, double margin) {
  if (n < 2) raise(ErrorKind::InvalidParameter, "residual_grid: need at least two points");
  const ChartedMap view = bounded_view(map);
  const Interval range = view.domain();
  const double pad = margin * range.length();
  const std::vector<double> special = view.special_points();
  std::vector<double> grid;
  grid.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double u = range.lo + pad + (range.length() - 2.0 * pad) * i / (n - 1);
    bool skip = false;
    for (double s : special) skip = skip || std::abs(u - s) < pad;
    if (skip) continue;
    double image;
    try {
      image = view.eval(u);
    } catch (const Error&) {
      continue;
    }
    if (image < range.lo + pad || image > range.hi - pad) continue;
    grid.push_back(view.chart().to_x(u));
  }
  return grid;
}

double schroeder_residual(const MapInstance& map, const std::function<double(double)>& q, double lambda,
                          std::span<const double> grid, bool require_nonzero) {
  std::vector<double> r(grid.size());
  std::vector<char> nonzero(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double qx = q(grid[i]);
    nonzero[i] = qx != 0.0;
    r[i] = std::abs(lambda * qx - q(map.eval(grid[i])));
  });
  if (require_nonzero && std::none_of(nonzero.begin(), nonzero.end(), [](char c) { return c != 0; }))
    raise(ErrorKind::Domain, "schroeder_residual: q vanishes on the whole grid (degenerate solution)");
  return max_of(r);
}

double derivative_form_residual(const MapInstance& map, const SchroederCandidate& cand, std::span<const double> grid) {
  std::vector<double> r(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    const double a = cand.alpha(x);
    const double rhs = std::abs(map.deriv(x)) * cand.alpha(map.eval(x));
    r[i] = std::abs(cand.lambda_abs * a - rhs) / std::max(a, kTiny);
  });
  return max_of(r);
}

std::pair<double, double> branch_identity_check(const MapInstance& map, const SchroederCandidate& cand, int j,
                                                double x) {
  const double pre = map.inverse_branch(j, x);
  return {cand.lambda_abs * cand.alpha(pre), std::abs(map.deriv(pre)) * cand.alpha(x)};
}

double fp_aggregate(const MapInstance& map, const SchroederCandidate& cand, double x) {
  double acc = 0.0;
  for (int j = 1; j <= map.branch_count(); ++j) {
    const double pre = map.inverse_branch(j, x);
    acc += cand.alpha(pre) / std::abs(map.deriv(pre));
  }
  return acc;
}

EigenvalueEstimate eigenvalue_estimate(const MapInstance& map, const std::function<double(double)>& alpha,
                                       std::span<const double> grid) {
  if (grid.empty()) raise(ErrorKind::InvalidParameter, "eigenvalue_estimate: empty grid");
  std::vector<double> est(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    est[i] = std::abs(map.deriv(x)) * alpha(map.eval(x)) / std::max(alpha(x), kTiny);
  });
  const auto [lo, hi] = std::minmax_element(est.begin(), est.end());
  const double spread = *hi - *lo;
  const std::size_t mid = est.size() / 2;
  std::nth_element(est.begin(), est.begin() + mid, est.end());
  double median = est[mid];
  if (est.size() % 2 == 0) median = 0.5 * (median + *std::max_element(est.begin(), est.begin() + mid));
  return {median, spread};
}

CumulativeMeasure::CumulativeMeasure(std::function<double(double)> alpha, Interval domain, std::vector<double> cuts)
    : alpha_(std::move(alpha)), domain_(domain), cuts_(std::move(cuts)) {
  const QuadratureResult total = integrate_singular(alpha_, domain_, cuts_);
  if (!(total.value > 0.0) || (!total.converged && total.error > 1e-6 * std::abs(total.value)))
    raise(ErrorKind::NonIntegrable, "build_measure: alpha is not integrable on the domain (quadrature drift)");
  total_ = total.value;
}

double CumulativeMeasure::operator()(double x) const {
  if (!domain_.contains_closure(x)) raise(ErrorKind::Domain, "build_measure: x outside the domain");
  if (x == domain_.lo) return 0.0;
  if (x == domain_.hi) return 1.0;
  const QuadratureResult part = integrate_singular(alpha_, Interval{domain_.lo, x}, cuts_);
  if (!part.converged && part.error > 1e-6 * std::max(std::abs(part.value), 1.0))
    raise(ErrorKind::NonIntegrable, "build_measure: partial integral did not converge");
  return std::clamp(part.value / total_, 0.0, 1.0);
}

double build_measure(const SchroederCandidate& cand, double x, const Interval& domain) {
  return CumulativeMeasure(cand.alpha, domain)(x);
}

double KoenigsSeries::operator()(double x) const { return polyval(coeffs, x - fixed_point); }

Polyd KoenigsSeries::composition_residual() const {
  const Eigen::Index k = coeffs.size() - 1;
  Polyd p = map_taylor;
  p(0) = 0.0;
  Polyd acc = Polyd::Zero(k + 1);
  Polyd power = truncate(p, k);
  for (Eigen::Index n = 1; n <= k; ++n) {
    acc += coeffs(n) * power;
    power = series_mul(power, p, k);
  }
  return acc - multiplier * coeffs;
}

KoenigsSeries koenigs_series(const MapInstance& map, double fixed_point, int order) {
  const double image = map.eval(fixed_point);
  if (!(std::abs(image - fixed_point) <= 1e-12 * std::max(1.0, std::abs(fixed_point)))) {
    std::ostringstream os;
    os.precision(17);
    os << "koenigs_series: x=" << fixed_point << " is not fixed by " << map.describe() << " (T(x)=" << image << ")";
    raise(ErrorKind::NotFixedPoint, os.str());
  }
  Polyd taylor = map.taylor(fixed_point, order);
  taylor(0) = fixed_point;
  return from_taylor(std::move(taylor), fixed_point, order);
}

KoenigsSeries koenigs_series(const std::function<double(double)>& map, double fixed_point, int order) {
  Polyd taylor = taylor_coefficients_fd(map, fixed_point, order);
  if (std::abs(taylor(0) - fixed_point) <= 1e-12 * std::max(1.0, std::abs(fixed_point))) taylor(0) = fixed_point;
  return from_taylor(std::move(taylor), fixed_point, order);
}

Polyd taylor_coefficients_fd(const std::function<double(double)>& f, double x0, int order, double step, int levels) {
  if (order < 0 || levels < 1) raise(ErrorKind::InvalidParameter, "taylor_coefficients_fd: bad order or levels");
  Polyd c = Polyd::Zero(order + 1);
  c(0) = f(x0);
  double factorial = 1.0;
  for (int n = 1; n <= order; ++n) {
    factorial *= n;
    // Central n-th difference with nodes x0 + (n/2 - i) h; error O(h^2).
    auto diff = [&](double h) {
      double acc = 0.0, binom = 1.0;
      for (int i = 0; i <= n; ++i) {
        acc += ((i % 2 == 0) ? binom : -binom) * f(x0 + (0.5 * n - i) * h);
        binom = binom * (n - i) / (i + 1);
      }
      return acc / std::pow(h, n);
    };
    std::vector<std::vector<double>> table(levels, std::vector<double>(levels, 0.0));
    for (int j = 0; j < levels; ++j) {
      table[j][0] = diff(step / std::pow(2.0, j));
      for (int l = 1; l <= j; ++l) {
        const double w = std::pow(4.0, l);
        table[j][l] = (w * table[j][l - 1] - table[j - 1][l - 1]) / (w - 1.0);
      }
    }
    c(n) = table[levels - 1][levels - 1] / factorial;
  }
  return c;
}

}  // namespace schroder
