#ifndef SCHRODER_CONJUGACY_HPP
#define SCHRODER_CONJUGACY_HPP

#include <functional>

#include "schroder/density.hpp"
#include "schroder/maps.hpp"

namespace schroder {

/// Conjugating function h : [0,1] -> domain(target) with
/// target(h(theta)) = h(base(theta)), where base is nr(r) or renyi(r).
struct ConjugacyPair {
  std::function<double(double)> h;
  std::function<double(double)> h_inv;
  std::function<double(double)> h_prime;
  MapInstance base;
  MapInstance target;
  bool increasing = true;  ///< orientation of h
};

/// Catalog conjugator; throws NoConjugator for renyi, nr and boole_lft.
ConjugacyPair conjugator(const MapInstance& map);

/// max_theta |T(h(theta)) - h(S(theta))| / max(1, |h(S(theta))|) over
/// grid_size midpoints of [theta_lo, theta_hi], skipping fold points of S.
double conjugacy_residual(const ConjugacyPair& pair, int grid_size, double theta_lo = 0.0, double theta_hi = 1.0);

/// Density 1/|h'(h^{-1}(x))| of the target, in the catalog closed form.
DensityModel pushforward_density(const ConjugacyPair& pair);

/// Closed-form invariant density for every family that has one: the
/// pushforward for conjugated families, Lebesgue for renyi/nr. Throws
/// NoConjugator for boole_lft.
DensityModel catalog_density(const MapInstance& map);

/// Left-cumulative invariant measure mu(x) = rho-mass of [lo, x].
double measure_cdf(const ConjugacyPair& pair, double x);

}  // namespace schroder

#endif  // SCHRODER_CONJUGACY_HPP
