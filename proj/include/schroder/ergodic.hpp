#ifndef SCHRODER_ERGODIC_HPP
#define SCHRODER_ERGODIC_HPP

#include <cstdint>
#include <vector>

#include "schroder/density.hpp"
#include "schroder/maps.hpp"

namespace schroder {

/// Deterministic 64-bit generator (splitmix64). Used for every seeded draw in
/// the library so results do not depend on the standard library vendor.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Orbit stepping with the library's drift and singularity guards.
///
/// Piecewise-linear maps with integer slope shift binary digits out of a
/// double, so their floating-point orbits collapse onto 0 within ~55 steps.
/// With `refresh` set, the bits shifted out are replaced by seeded random
/// bits (a perturbation below 1e-15), which makes the computed orbit that of
/// a Lebesgue-typical point instead of a short dyadic rational.
class OrbitStepper {
 public:
  /// With guard_singular unset, iterates near a singular point are stepped
  /// through, and an exact hit is nudged 1e-12 into the domain first.
  OrbitStepper(const MapInstance& map, std::uint64_t seed, bool refresh, bool guard_singular = true);

  /// One step from x; throws Singularity, OrbitEscape.
  double step(double x);

  /// Exact singular hits nudged so far.
  long nudges() const { return nudges_; }

 private:
  const MapInstance& map_;
  SplitMix64 rng_;
  bool refresh_;
  bool guard_;
  long nudges_ = 0;
};

/// Checks that x is not within 1e-12 of a singular point; throws Singularity.
void check_not_singular(const MapInstance& map, double x);

/// n-fold composition T^n(x0).
double iterate(const MapInstance& map, double x0, long n);
/// x0, T(x0), ..., T^n(x0).
std::vector<double> iterate_orbit(const MapInstance& map, double x0, long n);

/// Seeded draw of a generic interior starting point.
double draw_initial_point(const MapInstance& map, std::uint64_t seed);

struct OrbitStats {
  long n_steps = 0;
  long burn_in = 0;
  std::uint64_t seed = 0;
  double lyapunov_sum = 0.0;
  double final_x = 0.0;
  long skipped = 0;  ///< iterates on breakpoints or critical points

  double estimate() const { return lyapunov_sum / static_cast<double>(n_steps - burn_in - skipped); }
};

/// Birkhoff average of ln|T'| along the orbit of x0 after burn_in steps.
OrbitStats lyapunov_birkhoff(const MapInstance& map, double x0, long n_steps, long burn_in, std::uint64_t seed = 0);

/// Same, with x0 drawn from the seed.
OrbitStats lyapunov_birkhoff_seeded(const MapInstance& map, long n_steps, long burn_in, std::uint64_t seed);

/// int ln|T'(x)| rho(x) dx by adaptive quadrature split at branch boundaries.
double lyapunov_quadrature(const MapInstance& map, const DensityModel& rho);

}  // namespace schroder

#endif  // SCHRODER_ERGODIC_HPP
