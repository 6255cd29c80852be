#ifndef SCHRODER_INTERVAL_HPP
#define SCHRODER_INTERVAL_HPP

#include <cmath>
#include <limits>

namespace schroder {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real interval, possibly with infinite ends. Open flags only matter for
/// membership tests; infinite ends are always open.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = false;
  bool hi_open = false;

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }

  bool contains(double x) const {
    if (std::isnan(x)) return false;
    const bool above = lo_open || !std::isfinite(lo) ? x > lo : x >= lo;
    const bool below = hi_open || !std::isfinite(hi) ? x < hi : x <= hi;
    return above && below;
  }

  bool contains_closure(double x) const { return !std::isnan(x) && x >= lo && x <= hi; }
};

}  // namespace schroder

#endif  // SCHRODER_INTERVAL_HPP
