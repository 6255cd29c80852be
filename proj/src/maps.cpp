#include "schroder/maps.hpp"

#include <cmath>
#include <sstream>

namespace schroder {

namespace {

constexpr double kPi = detail::pi<double>();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void bad_param(const std::string& what) { raise(ErrorKind::InvalidParameter, what); }

// Chebyshev polynomials of both kinds by the three-term recurrence.
double cheb_t(int r, double x) {
  if (r == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int n = 1; n < r; ++n) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double cheb_u(int r, double x) {
  if (r == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * x;
  for (int n = 1; n < r; ++n) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Polyd cheb_t_poly(int r) {
  Polyd prev = Polyd::Ones(1);
  if (r == 0) return prev;
  Polyd cur = Polyd::Zero(2);
  cur(1) = 1.0;
  for (int n = 1; n < r; ++n) {
    Polyd next = Polyd::Zero(n + 2);
    next.tail(n + 1) = 2.0 * cur;
    next.head(prev.size()) -= prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Polyd make_poly(std::initializer_list<double> c) {
  Polyd p(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (double v : c) p(i++) = v;
  return p;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Renyi: return "renyi";
    case Family::Nr: return "nr";
    case Family::Logistic: return "logistic";
    case Family::Chebyshev: return "chebyshev";
    case Family::Lattes: return "lattes";
    case Family::Sn2: return "sn2";
    case Family::CauchyDoubling: return "cauchy_doubling";
    case Family::BooleLft: return "boole_lft";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::Renyi, Family::Nr, Family::Logistic, Family::Chebyshev, Family::Lattes, Family::Sn2,
                   Family::CauchyDoubling, Family::BooleLft})
    if (to_string(f) == name) return f;
  bad_param("unknown map family '" + std::string(name) + "'");
}

MapInstance make_map(const MapParams& params) {
  MapInstance m;
  m.params_ = params;
  auto need_r = [](int r, const char* fam) {
    if (r < 1) bad_param(std::string(fam) + ": r >= 1 violated (r=" + std::to_string(r) + ")");
  };
  std::visit(overloaded{
                 [&](const RenyiParams& p) {
                   need_r(p.r, "renyi");
                   m.family_ = Family::Renyi;
                   m.r_ = p.r;
                   m.domain_ = {0.0, 1.0};
                   for (int k = 1; k < p.r; ++k) m.breakpoints_.push_back(double(k) / p.r);
                 },
                 [&](const NrParams& p) {
                   need_r(p.r, "nr");
                   m.family_ = Family::Nr;
                   m.r_ = p.r;
                   m.domain_ = {0.0, 1.0};
                   for (int k = 1; k < p.r; ++k) m.breakpoints_.push_back(double(k) / p.r);
                 },
                 [&](const LogisticParams&) {
                   m.family_ = Family::Logistic;
                   m.r_ = 2;
                   m.domain_ = {0.0, 1.0};
                   m.breakpoints_ = {0.5};
                 },
                 [&](const ChebyshevParams& p) {
                   need_r(p.r, "chebyshev");
                   m.family_ = Family::Chebyshev;
                   m.r_ = p.r;
                   m.domain_ = {-1.0, 1.0};
                   for (int k = 1; k < p.r; ++k) m.breakpoints_.push_back(std::cos(kPi * double(p.r - k) / p.r));
                 },
                 [&](const LattesParams& p) {
                   m.family_ = Family::Lattes;
                   m.r_ = 2;
                   m.elliptic_.emplace(p.g2, p.g3);  // throws "disc <= 0"
                   m.domain_ = {m.elliptic_->e1(), kInf, false, true};
                   m.singular_ = {m.elliptic_->e1()};
                   m.locate_critical_point();
                 },
                 [&](const Sn2Params& p) {
                   if (!(p.kappa > 0.0 && p.kappa < 1.0))
                     bad_param("sn2: 0 < kappa < 1 violated (kappa=" + num(p.kappa) + ")");
                   m.family_ = Family::Sn2;
                   m.r_ = 2;
                   m.domain_ = {0.0, 1.0};
                   m.locate_critical_point();
                 },
                 [&](const CauchyDoublingParams&) {
                   m.family_ = Family::CauchyDoubling;
                   m.r_ = 2;
                   m.domain_ = {-kInf, kInf, true, true};
                   m.breakpoints_ = {0.0};
                   m.singular_ = {0.0};
                 },
                 [&](const BooleLftParams& p) {
                   if (p.c == 0.0) bad_param("boole_lft: c != 0 violated");
                   const double det = p.a * p.d - p.b * p.c;
                   const double scale = std::max({1.0, std::abs(p.a * p.d), std::abs(p.b * p.c)});
                   if (!(std::abs(det - 1.0) <= 1e-12 * scale))
                     bad_param("boole_lft: ad - bc = 1 violated (ad - bc = " + num(det) + ")");
                   m.family_ = Family::BooleLft;
                   m.r_ = 1;
                   m.domain_ = {-kInf, kInf, true, true};
                   m.singular_ = {-p.d / p.c};
                 },
             },
             params);
  return m;
}

void MapInstance::locate_critical_point() {
  // The single interior critical point separating the two branches: T' changes
  // sign from negative to positive (lattes) or positive to negative (sn2).
  double lo, hi;
  if (family_ == Family::Lattes) {
    const double e1 = elliptic_->e1();
    lo = e1;
    double width = 1.0;
    while (deriv(e1 + width) <= 0.0) width *= 2.0;
    hi = e1 + width;
  } else {
    lo = 0.0;
    hi = 1.0;
  }
  const bool rising_left = family_ == Family::Sn2;
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double d = deriv(mid);
    if ((d > 0.0) == rising_left)
      lo = mid;
    else
      hi = mid;
  }
  breakpoints_ = {lo + 0.5 * (hi - lo)};
}

double MapInstance::sn2_parameter() const {
  if (family_ != Family::Sn2) raise(ErrorKind::InvalidParameter, "sn2_parameter: map is not sn2");
  const double k = std::get<Sn2Params>(params_).kappa;
  return k * k;
}

Interval MapInstance::branch(int j) const {
  if (j < 1 || j > r_) raise(ErrorKind::OutOfImage, "branch index " + std::to_string(j) + " outside 1.." + std::to_string(r_));
  Interval b = domain_;
  if (j > 1) {
    b.lo = breakpoints_[j - 2];
    b.lo_open = false;
  }
  if (j < r_) {
    b.hi = breakpoints_[j - 1];
    b.hi_open = false;
  }
  return b;
}

int MapInstance::branch_of(double x) const {
  if (!domain_.contains_closure(x)) raise(ErrorKind::Domain, describe() + ": x=" + num(x) + " outside domain");
  int j = 1;
  for (double b : breakpoints_)
    if (x > b) ++j;
  return j;
}

int MapInstance::orientation(int j) const {
  switch (family_) {
    case Family::Renyi:
    case Family::CauchyDoubling: return 1;
    case Family::Nr: return (j - 1) % 2 == 0 ? 1 : -1;
    case Family::Logistic:
    case Family::Sn2: return j == 1 ? 1 : -1;
    case Family::Chebyshev: return (r_ - j) % 2 == 0 ? 1 : -1;
    case Family::Lattes: return j == 1 ? -1 : 1;
    case Family::BooleLft: return 1;
  }
  return 1;
}

double MapInstance::eval(double x) const {
  if (!domain_.contains_closure(x)) raise(ErrorKind::Domain, describe() + ": x=" + num(x) + " outside domain");
  auto singular = [&]() -> double { raise(ErrorKind::Singularity, describe() + ": eval singular at x=" + num(x)); };
  switch (family_) {
    case Family::Renyi: {
      const double rx = r_ * x;
      return rx - std::floor(rx);
    }
    case Family::Nr: {
      const double rx = r_ * x;
      const double k = std::floor(rx);
      const double f = rx - k;
      return std::fmod(k, 2.0) == 0.0 ? f : 1.0 - f;
    }
    case Family::Logistic: return 4.0 * x * (1.0 - x);
    case Family::Chebyshev: return cheb_t(r_, x);
    case Family::Lattes: {
      if (x == kInf) return kInf;
      const auto& e = *elliptic_;
      const double den = e.cubic(x);
      if (den == 0.0) singular();
      const double u = x * x + e.g2() / 4.0;
      return (u * u + 2.0 * e.g3() * x) / den;
    }
    case Family::Sn2: {
      const double m = sn2_parameter();
      const double den = 1.0 - m * x * x;
      return 4.0 * x * (1.0 - x) * (1.0 - m * x) / (den * den);
    }
    case Family::CauchyDoubling:
      if (x == 0.0) singular();
      if (std::isinf(x)) return x;
      return 0.5 * (x - 1.0 / x);
    case Family::BooleLft: {
      const auto& p = std::get<BooleLftParams>(params_);
      if (std::isinf(x)) return p.a / p.c;
      const double den = p.c * x + p.d;
      if (den == 0.0) return kInf;  // the point at infinity
      return (p.a * x + p.b) / den;
    }
  }
  return 0.0;
}

double MapInstance::deriv(double x) const {
  if (!domain_.contains_closure(x)) raise(ErrorKind::Domain, describe() + ": x=" + num(x) + " outside domain");
  auto singular = [&]() -> double { raise(ErrorKind::Singularity, describe() + ": derivative singular at x=" + num(x)); };
  switch (family_) {
    case Family::Renyi:
    case Family::Nr: {
      for (double b : breakpoints_)
        if (x == b) raise(ErrorKind::Breakpoint, describe() + ": derivative undefined at breakpoint x=" + num(x));
      return orientation(branch_of(x)) * double(r_);
    }
    case Family::Logistic: return 4.0 - 8.0 * x;
    case Family::Chebyshev: return r_ * cheb_u(r_ - 1, x);
    case Family::Lattes: {
      if (x == kInf) return 0.25;
      const auto& e = *elliptic_;
      const double den = e.cubic(x);
      if (den == 0.0) singular();
      const double u = x * x + e.g2() / 4.0;
      const double num_v = u * u + 2.0 * e.g3() * x;
      const double dnum = 4.0 * x * u + 2.0 * e.g3();
      const double dden = 12.0 * x * x - e.g2();
      return (dnum - num_v * dden / den) / den;
    }
    case Family::Sn2: {
      const double m = sn2_parameter();
      const double n = 4.0 * x * (1.0 - x) * (1.0 - m * x);
      const double dn = 4.0 * (1.0 - 2.0 * (1.0 + m) * x + 3.0 * m * x * x);
      const double d = 1.0 - m * x * x;
      const double dd = -2.0 * m * x;
      return (dn * d - 2.0 * n * dd) / (d * d * d);
    }
    case Family::CauchyDoubling:
      if (x == 0.0) singular();
      if (std::isinf(x)) return 0.5;
      return 0.5 * (1.0 + 1.0 / (x * x));
    case Family::BooleLft: {
      const auto& p = std::get<BooleLftParams>(params_);
      if (std::isinf(x)) return 0.0;
      const double den = p.c * x + p.d;
      if (den == 0.0) singular();
      return 1.0 / (den * den);
    }
  }
  return 0.0;
}

double MapInstance::inverse_branch(int j, double y) const {
  if (j < 1 || j > r_)
    raise(ErrorKind::OutOfImage, describe() + ": branch index " + std::to_string(j) + " outside 1.." + std::to_string(r_));
  auto out_of_image = [&]() -> double {
    raise(ErrorKind::OutOfImage, describe() + ": y=" + num(y) + " outside the image of branch " + std::to_string(j));
  };
  if (std::isnan(y)) out_of_image();
  switch (family_) {
    case Family::Renyi:
      if (y < 0.0 || y > 1.0) out_of_image();
      if (y == 1.0) raise(ErrorKind::Breakpoint, describe() + ": y=1 is the jump value of a branch and is not attained");
      return (j - 1 + y) / r_;
    case Family::Nr:
      if (y < 0.0 || y > 1.0) out_of_image();
      return orientation(j) > 0 ? (j - 1 + y) / r_ : (j - y) / r_;
    case Family::Logistic: {
      if (y < 0.0 || y > 1.0) out_of_image();
      const double s = std::sqrt(1.0 - y);
      return j == 1 ? 0.5 * y / (1.0 + s) : 0.5 * (1.0 + s);
    }
    case Family::Chebyshev: {
      if (y < -1.0 || y > 1.0) out_of_image();
      // x = cos(pi*theta) with theta in [(r-j)/r, (r-j+1)/r].
      const double phi = std::acos(y) / kPi;
      const double s = (r_ - j) % 2 == 0 ? phi : 1.0 - phi;
      return std::cos(kPi * (r_ - j + s) / r_);
    }
    case Family::Lattes: {
      if (!(y >= elliptic_->e1())) out_of_image();
      if (y == kInf) return j == 1 ? elliptic_->e1() : kInf;
      return solve_on_branch(j, y);
    }
    case Family::Sn2:
      if (y < 0.0 || y > 1.0) out_of_image();
      return solve_on_branch(j, y);
    case Family::CauchyDoubling: {
      if (std::isinf(y)) return j == 1 ? 0.0 : y;
      const double s = std::hypot(y, 1.0);
      if (j == 1) return y >= 0.0 ? -1.0 / (y + s) : y - s;
      return y >= 0.0 ? y + s : 1.0 / (s - y);
    }
    case Family::BooleLft: {
      const auto& p = std::get<BooleLftParams>(params_);
      if (std::isinf(y)) return -p.d / p.c;
      const double den = p.a - p.c * y;
      if (den == 0.0) out_of_image();
      return (p.d * y - p.b) / den;
    }
  }
  return 0.0;
}

double MapInstance::solve_on_branch(int j, double y) const {
  const Interval b = branch(j);
  const int orient = orientation(j);
  // Work in s = (x - lo)/(1 + x - lo) on unbounded branches.
  const bool unbounded = std::isinf(b.hi);
  auto to_x = [&](double s) { return unbounded ? b.lo + s / (1.0 - s) : s; };
  double lo = unbounded ? 0.0 : b.lo;
  double hi = unbounded ? 1.0 : b.hi;
  for (int it = 0; it < 4000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double v = eval(to_x(mid));
    if (v == y) return to_x(mid);
    if ((v < y) == (orient > 0))
      lo = mid;
    else
      hi = mid;
  }
  double x = to_x(lo + 0.5 * (hi - lo));
  double resid = std::abs(eval(x) - y);
  for (int it = 0; it < 3 && resid > 0.0; ++it) {
    const double d = deriv(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double xn = x - (eval(x) - y) / d;
    if (!(xn > b.lo && xn < b.hi)) break;
    const double rn = std::abs(eval(xn) - y);
    if (!(rn < resid)) break;
    x = xn;
    resid = rn;
  }
  return x;
}

Polyd MapInstance::taylor(double x0, int order) const {
  if (order < 1) raise(ErrorKind::InvalidParameter, "taylor: order must be >= 1");
  auto rational = [&](const Polyd& n, const Polyd& d) {
    return series_div(taylor_shift(n, x0), taylor_shift(d, x0), order);
  };
  switch (family_) {
    case Family::Renyi:
    case Family::Nr: {
      Polyd c = Polyd::Zero(order + 1);
      c(0) = eval(x0);
      c(1) = deriv(x0);
      return c;
    }
    case Family::Logistic: return truncate(taylor_shift(make_poly({0.0, 4.0, -4.0}), x0), order);
    case Family::Chebyshev: return truncate(taylor_shift(cheb_t_poly(r_), x0), order);
    case Family::Lattes: {
      const auto& e = *elliptic_;
      const double g2 = e.g2(), g3 = e.g3();
      return rational(make_poly({g2 * g2 / 16.0, 2.0 * g3, g2 / 2.0, 0.0, 1.0}), make_poly({-g3, -g2, 0.0, 4.0}));
    }
    case Family::Sn2: {
      const double m = sn2_parameter();
      return rational(make_poly({0.0, 4.0, -4.0 * (1.0 + m), 4.0 * m}), make_poly({1.0, 0.0, -2.0 * m, 0.0, m * m}));
    }
    case Family::CauchyDoubling: return rational(make_poly({-1.0, 0.0, 1.0}), make_poly({0.0, 2.0}));
    case Family::BooleLft: {
      const auto& p = std::get<BooleLftParams>(params_);
      return rational(make_poly({p.b, p.a}), make_poly({p.d, p.c}));
    }
  }
  return Polyd::Zero(order + 1);
}

std::string MapInstance::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(family_);
  std::visit(overloaded{
                 [&](const RenyiParams& p) { os << "(r=" << p.r << ")"; },
                 [&](const NrParams& p) { os << "(r=" << p.r << ")"; },
                 [&](const LogisticParams&) {},
                 [&](const ChebyshevParams& p) { os << "(r=" << p.r << ")"; },
                 [&](const LattesParams& p) { os << "(g2=" << p.g2 << ",g3=" << p.g3 << ")"; },
                 [&](const Sn2Params& p) { os << "(kappa=" << p.kappa << ")"; },
                 [&](const CauchyDoublingParams&) {},
                 [&](const BooleLftParams& p) { os << "(a=" << p.a << ",b=" << p.b << ",c=" << p.c << ",d=" << p.d << ")"; },
             },
             params_);
  return os.str();
}

// ---------------------------------------------------------------------------

Chart Chart::identity(const Interval& domain) {
  if (!domain.bounded()) raise(ErrorKind::InvalidParameter, "identity chart needs a bounded domain");
  Chart c;
  c.kind_ = Kind::Identity;
  c.identity_domain_ = domain;
  return c;
}

Chart Chart::half_line(double anchor) {
  Chart c;
  c.kind_ = Kind::HalfLine;
  c.anchor_ = anchor;
  return c;
}

Chart Chart::line() {
  Chart c;
  c.kind_ = Kind::Line;
  return c;
}

Interval Chart::range() const {
  if (kind_ == Kind::Identity) return {identity_domain_.lo, identity_domain_.hi};
  return {0.0, 1.0};
}

double Chart::to_u(double x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::HalfLine: {
      if (x == kInf) return 1.0;
      const double t = x - anchor_;
      return t / (t + 1.0);
    }
    case Kind::Line:
      if (x == kInf) return 1.0;
      if (x == -kInf) return 0.0;
      return 0.5 + x / (2.0 * (1.0 + std::abs(x)));
  }
  return x;
}

double Chart::to_x(double u) const {
  switch (kind_) {
    case Kind::Identity: return u;
    case Kind::HalfLine:
      if (u >= 1.0) return kInf;
      return anchor_ + u / (1.0 - u);
    case Kind::Line: {
      const double v = 2.0 * u - 1.0;
      if (v >= 1.0) return kInf;
      if (v <= -1.0) return -kInf;
      return v / (1.0 - std::abs(v));
    }
  }
  return u;
}

double Chart::jacobian(double u) const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::HalfLine: return 1.0 / ((1.0 - u) * (1.0 - u));
    case Kind::Line: {
      const double w = 1.0 - std::abs(2.0 * u - 1.0);
      return 2.0 / (w * w);
    }
  }
  return 1.0;
}

ChartedMap::ChartedMap(MapInstance map, Chart chart) : map_(std::move(map)), chart_(chart) {}

double ChartedMap::eval(double u) const { return chart_.to_u(map_.eval(chart_.to_x(u))); }

double ChartedMap::deriv(double u) const {
  const double x = chart_.to_x(u);
  if (std::isinf(x)) raise(ErrorKind::Singularity, "charted derivative undefined at the point at infinity");
  const double y = map_.eval(x);
  if (std::isinf(y)) raise(ErrorKind::Singularity, "charted derivative undefined where the image is infinite");
  return map_.deriv(x) / chart_.jacobian(chart_.to_u(y)) * chart_.jacobian(u);
}

double ChartedMap::inverse_branch(int j, double u) const {
  return chart_.to_u(map_.inverse_branch(j, chart_.to_x(u)));
}

std::vector<double> ChartedMap::special_points() const {
  std::vector<double> pts;
  for (double b : map_.breakpoints()) pts.push_back(chart_.to_u(b));
  for (double s : map_.singularities()) pts.push_back(chart_.to_u(s));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

ChartedMap compactify(const MapInstance& map) {
  const Interval& d = map.domain();
  if (d.bounded()) raise(ErrorKind::InvalidParameter, "compactify: " + map.describe() + " already has a bounded domain (no-op)");
  if (std::isfinite(d.lo)) return ChartedMap(map, Chart::half_line(d.lo));
  return ChartedMap(map, Chart::line());
}

ChartedMap bounded_view(const MapInstance& map) {
  if (map.domain().bounded()) return ChartedMap(map, Chart::identity(map.domain()));
  return compactify(map);
}

}  // namespace schroder
