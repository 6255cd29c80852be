#ifndef SCHRODER_QUADRATURE_HPP
#define SCHRODER_QUADRATURE_HPP

#include <functional>
#include <span>

#include "schroder/interval.hpp"

namespace schroder {

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on a finite [a, b].
QuadratureResult integrate_gk(const ScalarFn& f, double a, double b, const QuadratureOptions& opt = {});

/// Integral over an interval whose ends may carry inverse-square-root
/// singularities or be infinite. Each finite piece is split at its midpoint
/// and mapped by y = end -/+ t^2 toward its ends; infinite tails use
/// y = c + 1/s^2. `cuts` are interior points where the integrand may be
/// singular; they are treated like ends.
QuadratureResult integrate_singular(const ScalarFn& f, const Interval& domain, std::span<const double> cuts = {},
                                    const QuadratureOptions& opt = {});

/// Five-point Gauss-Legendre rule on [a, b].
double gauss5(const ScalarFn& f, double a, double b);

}  // namespace schroder

#endif  // SCHRODER_QUADRATURE_HPP
