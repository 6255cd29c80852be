#ifndef SCHRODER_MAPS_HPP
#define SCHRODER_MAPS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schroder/elliptic.hpp"
#include "schroder/interval.hpp"
#include "schroder/polynomial.hpp"

namespace schroder {

enum class Family { Renyi, Nr, Logistic, Chebyshev, Lattes, Sn2, CauchyDoubling, BooleLft };

std::string_view to_string(Family f);
/// Parses the snake_case family name; throws InvalidParameter for unknown names.
Family family_from_string(std::string_view name);

struct RenyiParams {
  int r = 2;
};
struct NrParams {
  int r = 2;
};
struct LogisticParams {};
struct ChebyshevParams {
  int r = 2;
};
struct LattesParams {
  double g2 = 4.0;
  double g3 = 0.0;
};
/// Elliptic modulus kappa in (0,1); the Jacobi parameter is m = kappa^2.
struct Sn2Params {
  double kappa = 0.7071067811865476;
};
struct CauchyDoublingParams {};
struct BooleLftParams {
  double a = 2.0, b = 1.0, c = 1.0, d = 1.0;
};

using MapParams = std::variant<RenyiParams, NrParams, LogisticParams, ChebyshevParams, LattesParams, Sn2Params,
                               CauchyDoublingParams, BooleLftParams>;

/// A catalog map with r strictly monotone branches. Branches are indexed
/// 1..r from left to right; a point on a shared boundary belongs to the
/// left branch. Instances are immutable and cheap to copy.
class MapInstance {
 public:
  Family family() const { return family_; }
  const MapParams& params() const { return params_; }
  int branch_count() const { return r_; }
  const Interval& domain() const { return domain_; }

  /// Closed interval of branch j (1-based).
  Interval branch(int j) const;
  /// Interior boundaries between consecutive branches, ascending (size r-1).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Points of the domain where eval is singular.
  const std::vector<double>& singularities() const { return singular_; }
  /// Branch index (1-based) containing x, left convention on boundaries.
  int branch_of(double x) const;
  /// Sign of the derivative on branch j.
  int orientation(int j) const;

  /// Elliptic invariants (lattes only).
  const std::optional<EllipticContext>& elliptic() const { return elliptic_; }
  /// Jacobi parameter m = kappa^2 (sn2 only).
  double sn2_parameter() const;

  /// True for the piecewise-linear families (renyi, nr).
  bool piecewise_linear() const { return family_ == Family::Renyi || family_ == Family::Nr; }

  double eval(double x) const;
  double deriv(double x) const;
  double inverse_branch(int j, double y) const;

  /// Taylor coefficients a_0..a_order of T(x0 + t), exact for the polynomial
  /// and rational families.
  Polyd taylor(double x0, int order) const;

  std::string describe() const;

 private:
  friend MapInstance make_map(const MapParams& params);
  MapInstance() = default;

  double solve_on_branch(int j, double y) const;
  void locate_critical_point();

  Family family_ = Family::Logistic;
  MapParams params_;
  int r_ = 1;
  Interval domain_;
  std::vector<double> breakpoints_;
  std::vector<double> singular_;
  std::optional<EllipticContext> elliptic_;
};

/// Validates parameters and builds the instance; throws InvalidParameter
/// naming the violated constraint.
MapInstance make_map(const MapParams& params);

inline double eval(const MapInstance& map, double x) { return map.eval(x); }
inline double deriv(const MapInstance& map, double x) { return map.deriv(x); }
inline double inverse_branch(const MapInstance& map, int j, double y) { return map.inverse_branch(j, y); }

/// Bijection between a (possibly unbounded) domain and a bounded coordinate u.
///   identity:  u = x
///   half-line: u = (x - a)/(x - a + 1) on [a, inf)
///   line:      u = 1/2 + x/(2(1 + |x|)) on (-inf, inf)
class Chart {
 public:
  enum class Kind { Identity, HalfLine, Line };

  static Chart identity(const Interval& domain);
  static Chart half_line(double anchor);
  static Chart line();

  Kind kind() const { return kind_; }
  /// Domain of the u coordinate.
  Interval range() const;

  double to_u(double x) const;
  double to_x(double u) const;
  /// dx/du at u.
  double jacobian(double u) const;

 private:
  Kind kind_ = Kind::Identity;
  double anchor_ = 0.0;
  Interval identity_domain_;
};

/// A catalog map viewed through a chart onto a bounded interval.
class ChartedMap {
 public:
  ChartedMap(MapInstance map, Chart chart);

  const MapInstance& map() const { return map_; }
  const Chart& chart() const { return chart_; }
  Interval domain() const { return chart_.range(); }
  int branch_count() const { return map_.branch_count(); }

  double eval(double u) const;
  double deriv(double u) const;
  double inverse_branch(int j, double u) const;
  /// Branch boundaries and singular points expressed in u.
  std::vector<double> special_points() const;

 private:
  MapInstance map_;
  Chart chart_;
};

/// Conjugated view of an unbounded map on [0,1]; throws InvalidParameter for
/// maps whose domain is already bounded.
ChartedMap compactify(const MapInstance& map);

/// Identity chart for bounded maps, compactification otherwise.
ChartedMap bounded_view(const MapInstance& map);

}  // namespace schroder

#endif  // SCHRODER_MAPS_HPP
