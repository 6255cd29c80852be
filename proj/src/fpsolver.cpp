#include "schroder/fpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "schroder/ergodic.hpp"
#include "schroder/parallel.hpp"
#include "schroder/quadrature.hpp"

namespace schroder {

namespace {

Eigen::Index cell_of(double u, double lo, double w, Eigen::Index n) {
  const double t = std::floor((u - lo) / w);
  if (!(t >= 0.0)) return 0;
  return std::min(static_cast<Eigen::Index>(t), n - 1);
}

bool same_cells(const GridDensity& a, const GridDensity& b) {
  return a.size() == b.size() && a.lo == b.lo && a.hi == b.hi && a.chart.kind() == b.chart.kind();
}

}  // namespace

double fp_residual(const MapInstance& map, const std::function<double(double)>& rho, std::span<const double> grid) {
  std::vector<double> r(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    double acc = 0.0;
    for (int j = 1; j <= map.branch_count(); ++j) {
      const double pre = map.inverse_branch(j, x);
      acc += rho(pre) / std::abs(map.deriv(pre));
    }
    r[i] = std::abs(rho(x) - acc);
  });
  double m = 0.0;
  for (double v : r) m = std::max(m, v);
  return m;
}

UlamOperator ulam_matrix(const MapInstance& map, int n, int samples_per_cell, std::uint64_t seed) {
  if (n < 16) raise(ErrorKind::InvalidParameter, "ulam_matrix: need at least 16 cells");
  if (samples_per_cell < 32) raise(ErrorKind::InvalidParameter, "ulam_matrix: need at least 32 samples per cell");
  const ChartedMap view = bounded_view(map);
  const Interval range = view.domain();
  const double lo = range.lo, w = range.length() / n;
  const Chart& chart = view.chart();

  std::vector<std::vector<std::pair<int, double>>> rows(n);
  std::vector<long> shifted(n, 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    std::map<int, int> hits;
    for (int s = 0; s < samples_per_cell; ++s) {
      double u = lo + w * (static_cast<double>(i) + (s + rng.uniform()) / samples_per_cell);
      double y;
      for (int attempt = 0;; ++attempt) {
        try {
          y = map.eval(chart.to_x(u));
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Singularity || attempt > 3) throw;
          u += 1e-9 * w;
          ++shifted[i];
        }
      }
      ++hits[static_cast<int>(cell_of(chart.to_u(y), lo, w, n))];
    }
    for (const auto& [j, c] : hits) rows[i].emplace_back(j, static_cast<double>(c) / samples_per_cell);
  });

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < n; ++i)
    for (const auto& [j, v] : rows[i]) triplets.emplace_back(i, j, v);
  UlamOperator op;
  op.n = n;
  op.lo = range.lo;
  op.hi = range.hi;
  op.chart = chart;
  op.transitions.resize(n, n);
  op.transitions.setFromTriplets(triplets.begin(), triplets.end());
  op.transitions.makeCompressed();
  for (long s : shifted) op.shifted_samples += s;
  return op;
}

GridDensity stationary_density(const UlamOperator& op, const PowerIterationOptions& opt,
                               PowerIterationReport* report) {
  if (op.n <= 0) raise(ErrorKind::InvalidParameter, "stationary_density: empty operator");
  Eigen::VectorXd p = Eigen::VectorXd::Constant(op.n, 1.0 / op.n);
  double change = 0.0;
  long it = 0;
  bool converged = false;
  while (it < opt.max_iters) {
    Eigen::VectorXd next = op.transitions.transpose() * p;
    next /= next.sum();
    change = (next - p).lpNorm<1>();
    p.swap(next);
    ++it;
    if (change < opt.tol) {
      converged = true;
      break;
    }
  }
  if (report) *report = {it, change};
  if (!converged) {
    std::ostringstream os;
    os << "stationary_density: power iteration stopped after " << it << " iterations with L1 change " << change;
    throw NonConvergenceError(os.str(), change);
  }
  GridDensity d;
  d.lo = op.lo;
  d.hi = op.hi;
  d.chart = op.chart;
  d.values = p * (op.n / (op.hi - op.lo));
  return d;
}

GridDensity histogram_density(const MapInstance& map, double x0, long n_steps, long burn_in, int n_bins,
                              std::uint64_t seed) {
  if (n_steps < 10000) raise(ErrorKind::InvalidParameter, "histogram_density: need at least 1e4 steps");
  if (burn_in < 0 || burn_in >= n_steps) raise(ErrorKind::InvalidParameter, "histogram_density: bad burn_in");
  if (n_bins < 1) raise(ErrorKind::InvalidParameter, "histogram_density: need at least one bin");
  if (!map.domain().contains_closure(x0)) raise(ErrorKind::Domain, "histogram_density: x0 outside the domain");

  auto degenerate = [&](double at) {
    std::ostringstream os;
    os.precision(17);
    os << "histogram_density: the orbit of x0=" << x0 << " reaches the fixed point " << at;
    raise(ErrorKind::DegenerateOrbit, os.str());
  };
  {
    OrbitStepper plain(map, 0, false, false);
    double x = x0;
    for (int i = 0; i < 32; ++i) {
      const double y = plain.step(x);
      if (y == x) degenerate(x);
      x = y;
    }
  }

  const ChartedMap view = bounded_view(map);
  const Interval range = view.domain();
  GridDensity d;
  d.lo = range.lo;
  d.hi = range.hi;
  d.chart = view.chart();
  d.values = Eigen::VectorXd::Zero(n_bins);
  const double w = d.width();

  OrbitStepper stepper(map, seed, true, false);
  double x = x0;
  for (long i = 0; i < n_steps; ++i) {
    const double y = stepper.step(x);
    if (y == x) degenerate(x);
    x = y;
    if (i >= burn_in) d.values(cell_of(d.chart.to_u(x), d.lo, w, n_bins)) += 1.0;
  }
  d.values /= static_cast<double>(n_steps - burn_in) * w;
  return d;
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  if (!same_cells(a, b)) raise(ErrorKind::DomainMismatch, "l1_distance: the densities live on different cells");
  return (a.values - b.values).lpNorm<1>() * a.width();
}

double l1_distance(const GridDensity& a, const std::function<double(double)>& b) {
  const double w = a.width();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double c0 = a.lo + static_cast<double>(i) * w;
    acc += std::abs(a.values(i) * w - gauss5(b, c0, c0 + w));
  }
  return acc;
}

std::function<double(double)> density_in_chart(const DensityModel& rho, const Chart& chart) {
  return [rho, chart](double u) {
    const double x = chart.to_x(u);
    if (std::isinf(x)) return 0.0;
    return rho(x) * chart.jacobian(u);
  };
}

GridDensity coarsen(const GridDensity& d, int n_cells) {
  if (n_cells < 1 || d.size() % n_cells != 0)
    raise(ErrorKind::DomainMismatch, "coarsen: " + std::to_string(d.size()) + " cells do not split into " +
                                         std::to_string(n_cells) + " equal groups");
  const Eigen::Index f = d.size() / n_cells;
  GridDensity out = d;
  out.values = d.values.reshaped(f, n_cells).colwise().mean().transpose();
  return out;
}

double mass_in(const GridDensity& d, double x_lo, double x_hi) {
  const double u_lo = d.chart.to_u(x_lo), u_hi = d.chart.to_u(x_hi);
  const double w = d.width(), eps = 1e-12 * (d.hi - d.lo);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double c0 = d.lo + static_cast<double>(i) * w;
    if (c0 >= u_lo - eps && c0 + w <= u_hi + eps) acc += d.values(i) * w;
  }
  return acc;
}

}  // namespace schroder
