#ifndef SCHRODER_SCHROEDER_HPP
#define SCHRODER_SCHROEDER_HPP

// Schroeder's functional equation lambda q(x) = q(T(x)) and its derivative
// form |lambda| |q'(x)| = |T'(x)| |q'(T(x))|. A positive solution alpha = |q'|
// of the derivative form with |lambda| equal to the branch count r is the
// invariant density; integrating it gives the invariant measure.
//
// Two eigenvalue regimes live here and must not be confused:
//   * measure level: |lambda| = r, the number of monotone branches
//     (derivative_form_residual, fp_aggregate, eigenvalue_estimate);
//   * local level: lambda = T'(xbar) at a fixed point (koenigs_series),
//     e.g. 4 for the logistic map at 0, while its density has |lambda| = 2.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "schroder/interval.hpp"
#include "schroder/maps.hpp"
#include "schroder/polynomial.hpp"

namespace schroder {

/// alpha plays the role of |q'|; q is optional.
struct SchroederCandidate {
  std::function<double(double)> alpha;
  std::function<double(double)> q;
  double lambda_abs = 0.0;
};

/// Deterministic evaluation grid: n points equispaced in the bounded chart
/// coordinate, keeping a margin (fraction of the chart length) away from
/// domain ends, branch boundaries and singularities, and dropping points
/// whose image falls within the margin of a domain end.
std::vector<double> residual_grid(const MapInstance& map, int n, double margin = 1e-4);

/// Equispaced grid on [lo, hi] shrunk by `margin` at both ends.
std::vector<double> interval_grid(double lo, double hi, int n, double margin = 1e-4);

/// max |lambda q(x) - q(T(x))| over the grid. With require_nonzero the
/// identically-zero q is rejected instead of scoring 0.
double schroeder_residual(const MapInstance& map, const std::function<double(double)>& q, double lambda,
                          std::span<const double> grid, bool require_nonzero = false);

/// max | |lambda| alpha(x) - |T'(x)| alpha(T(x)) | / max(alpha(x), 1e-300).
double derivative_form_residual(const MapInstance& map, const SchroederCandidate& cand, std::span<const double> grid);

/// The per-branch identity at a preimage:
/// (|lambda| alpha(T_j^{-1}(x)), |T'(T_j^{-1}(x))| alpha(x)).
std::pair<double, double> branch_identity_check(const MapInstance& map, const SchroederCandidate& cand, int j,
                                                double x);

/// sum_j alpha(T_j^{-1}(x)) / |T'(T_j^{-1}(x))|; equals alpha(x) for an
/// invariant density.
double fp_aggregate(const MapInstance& map, const SchroederCandidate& cand, double x);

struct EigenvalueEstimate {
  double lambda_abs = 0.0;  ///< median of the pointwise estimates
  double spread = 0.0;      ///< max - min of the pointwise estimates
};

/// Pointwise |T'(x)| alpha(T(x)) / alpha(x) summarized by median and spread.
EigenvalueEstimate eigenvalue_estimate(const MapInstance& map, const std::function<double(double)>& alpha,
                                       std::span<const double> grid);

/// Left-cumulative normalized integral of alpha.
class CumulativeMeasure {
 public:
  CumulativeMeasure(std::function<double(double)> alpha, Interval domain, std::vector<double> cuts = {});

  double operator()(double x) const;
  double total_mass() const { return total_; }

 private:
  std::function<double(double)> alpha_;
  Interval domain_;
  std::vector<double> cuts_;
  double total_ = 0.0;
};

/// mu(x) = int_lo^x alpha / int_domain alpha.
double build_measure(const SchroederCandidate& cand, double x, const Interval& domain);

/// Local analytic solution q(x) = sum_n c_n (x - xbar)^n, c_1 = 1, of
/// q(T(x)) = lambda q(x) at a fixed point xbar with multiplier lambda = T'(xbar).
struct KoenigsSeries {
  double fixed_point = 0.0;
  double multiplier = 0.0;
  Polyd coeffs;           ///< coeffs(0) = 0, coeffs(1) = 1, ..., coeffs(K)
  Polyd map_taylor;       ///< Taylor coefficients of T at xbar, through degree K

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double x) const;
  /// Power-series coefficients of q_K(T(x)) - lambda q_K(x) through degree K.
  Polyd composition_residual() const;
};

/// Koenigs series from the map's exact Taylor expansion.
KoenigsSeries koenigs_series(const MapInstance& map, double fixed_point, int order);

/// Koenigs series for an arbitrary smooth map, Taylor coefficients by
/// Richardson-extrapolated central differences (step 1e-2, four levels).
KoenigsSeries koenigs_series(const std::function<double(double)>& map, double fixed_point, int order);

/// Taylor coefficients f^(n)(x0)/n!, n = 0..order, by finite differences.
Polyd taylor_coefficients_fd(const std::function<double(double)>& f, double x0, int order, double step = 1e-2,
                             int levels = 4);

}  // namespace schroder

#endif  // SCHRODER_SCHROEDER_HPP
