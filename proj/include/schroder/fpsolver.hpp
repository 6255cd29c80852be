#ifndef SCHRODER_FPSOLVER_HPP
#define SCHRODER_FPSOLVER_HPP

// Independent numerical route to invariant densities: Frobenius-Perron
// residuals, Ulam's discretization of the transfer operator, and orbit
// histograms. Nothing here uses a conjugating function; unbounded maps are
// handled through the compactifying chart of `maps`.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <span>

#include "schroder/density.hpp"
#include "schroder/maps.hpp"

namespace schroder {

/// Piecewise-constant density on n equal cells of [lo, hi] in a chart
/// coordinate (the identity for bounded maps).
struct GridDensity {
  double lo = 0.0;
  double hi = 1.0;
  Chart chart = Chart::line();
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  double width() const { return (hi - lo) / static_cast<double>(values.size()); }
  double center(Eigen::Index i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
  double mass() const { return values.sum() * width(); }
  /// Density with respect to x at the center of cell i (chart Jacobian removed).
  double value_in_x(Eigen::Index i) const { return values(i) / chart.jacobian(center(i)); }
};

/// Row-stochastic Ulam matrix: transitions(i, j) = P(cell i -> cell j).
struct UlamOperator {
  int n = 0;
  double lo = 0.0;
  double hi = 1.0;
  Chart chart = Chart::line();
  Eigen::SparseMatrix<double, Eigen::RowMajor> transitions;
  long shifted_samples = 0;  ///< samples moved off a singular point
};

/// max_x |rho(x) - sum_j rho(T_j^{-1}(x)) / |T'(T_j^{-1}(x))||.
double fp_residual(const MapInstance& map, const std::function<double(double)>& rho, std::span<const double> grid);

/// Ulam matrix from k stratified, jittered samples per cell mapped one step
/// forward. Deterministic in (map, n, k, seed) and independent of threading.
UlamOperator ulam_matrix(const MapInstance& map, int n, int samples_per_cell, std::uint64_t seed);

struct PowerIterationOptions {
  double tol = 1e-12;
  long max_iters = 100000;
};

struct PowerIterationReport {
  long iterations = 0;
  double last_change = 0.0;
};

/// Fixed point of p -> P^T p from the uniform vector, stopped when the L1
/// change drops below tol. Throws NonConvergenceError carrying the last change.
GridDensity stationary_density(const UlamOperator& op, const PowerIterationOptions& opt = {},
                               PowerIterationReport* report = nullptr);

/// Bin frequencies of the orbit of x0 after burn_in discarded steps, binned
/// in the bounded chart coordinate. Throws DegenerateOrbit for starting
/// points whose orbit reaches a fixed point.
GridDensity histogram_density(const MapInstance& map, double x0, long n_steps, long burn_in, int n_bins,
                              std::uint64_t seed);

/// sum_i |a_i - b_i| width_i; throws DomainMismatch for different cells.
double l1_distance(const GridDensity& a, const GridDensity& b);
/// Same against a density function in the grid's coordinate, averaged over
/// each cell by the five-point Gauss rule.
double l1_distance(const GridDensity& a, const std::function<double(double)>& b);

/// Closed-form density re-expressed in a chart coordinate: rho(x(u)) dx/du.
std::function<double(double)> density_in_chart(const DensityModel& rho, const Chart& chart);

/// Averages groups of adjacent cells down to n_cells; throws DomainMismatch
/// unless n_cells divides the cell count.
GridDensity coarsen(const GridDensity& d, int n_cells);

/// Probability mass of the cells whose x-range lies inside [x_lo, x_hi].
double mass_in(const GridDensity& d, double x_lo, double x_hi);

}  // namespace schroder

#endif  // SCHRODER_FPSOLVER_HPP
