#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "schroder/conjugacy.hpp"

using namespace schroder;

namespace {

bool throws_kind(ErrorKind kind, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

std::vector<MapInstance> conjugated() {
  return {make_map(LogisticParams{}),         make_map(ChebyshevParams{2}),     make_map(ChebyshevParams{3}),
          make_map(ChebyshevParams{5}),       make_map(LattesParams{4.0, 0.0}), make_map(LattesParams{5.0, 1.0}),
          make_map(LattesParams{8.0, 2.0}),   make_map(Sn2Params{0.5}),         make_map(Sn2Params{std::sqrt(0.5)}),
          make_map(CauchyDoublingParams{})};
}

// Total mass of rho. Finite ends use x = end -/+ t^2 with the Jacobian taken
// from the realized offset, so rho * sqrt(x - end) stays bounded at the node.
// Offsets below one ulp are held one ulp inside, where that product is at its limit.
double oracle_mass(const DensityModel& rho) {
  const Interval d = rho.domain();
  auto left = [&](double a, double b) {
    return oracle::integrate([&](double t) { double x = a + t * t; if (x == a) x = std::nextafter(a, b); return 2 * std::sqrt(x - a) * rho(x); }, 0.0,
                             std::sqrt(b - a));
  };
  auto right = [&](double a, double b) {
    return oracle::integrate([&](double t) { double x = b - t * t; if (x == b) x = std::nextafter(b, a); return 2 * std::sqrt(b - x) * rho(x); }, 0.0,
                             std::sqrt(b - a));
  };
  if (d.bounded()) {
    const double mid = 0.5 * (d.lo + d.hi);
    return left(d.lo, mid) + right(mid, d.hi);
  }
  if (std::isfinite(d.lo)) {
    const double c = d.lo + 1.0;
    return left(d.lo, c) + oracle::integrate_to_inf([&](double x) { return rho(x); }, c);
  }
  return oracle::integrate([&](double t) { return rho(std::tan(t)) / (std::cos(t) * std::cos(t)); }, -M_PI / 2,
                           M_PI / 2);
}

}  // namespace

TEST_CASE("conjugator examples") {
  const auto lg = conjugator(make_map(LogisticParams{}));
  CHECK(std::abs(lg.h(0.5) - 0.5) < 1e-15);
  CHECK(lg.base.family() == Family::Nr);
  CHECK(lg.base.branch_count() == 2);
  const auto ch = conjugator(make_map(ChebyshevParams{3}));
  CHECK(ch.h(1.0) == -1.0);
  CHECK(ch.base.branch_count() == 3);
  CHECK_FALSE(ch.increasing);
  const auto sn = conjugator(make_map(Sn2Params{std::sqrt(0.5)}));
  CHECK(std::abs(sn.h(1.0) - 1.0) < 1e-12);
  const auto cd = conjugator(make_map(CauchyDoublingParams{}));
  CHECK(cd.base.family() == Family::Renyi);
  CHECK(std::abs(cd.h(0.5)) < 1e-15);
  const auto lt = conjugator(make_map(LattesParams{4.0, 0.0}));
  CHECK(std::abs(lt.h(1.0) - 1.0) < 1e-12);
  CHECK_FALSE(lt.increasing);

  CHECK(throws_kind(ErrorKind::NoConjugator, [] { conjugator(make_map(RenyiParams{2})); }));
  CHECK(throws_kind(ErrorKind::NoConjugator, [] { conjugator(make_map(NrParams{3})); }));
  CHECK(throws_kind(ErrorKind::NoConjugator, [] { conjugator(make_map(BooleLftParams{})); }));
}

TEST_CASE("conjugacy residual examples") {
  CHECK(conjugacy_residual(conjugator(make_map(LogisticParams{})), 1000) < 1e-12);
  CHECK(conjugacy_residual(conjugator(make_map(LattesParams{4.0, 0.0})), 500, 0.05, 0.95) < 1e-8);
  auto wrong = conjugator(make_map(LogisticParams{}));
  wrong.target = make_map(ChebyshevParams{2});
  CHECK(conjugacy_residual(wrong, 1000) > 0.1);
}

TEST_CASE("conjugacy pair invariants") {
  for (const auto& m : conjugated()) {
    const auto pair = conjugator(m);
    INFO(m.describe());
    CHECK(conjugacy_residual(pair, 1000, 0.01, 0.99) < 1e-8);
    double prev = pair.h(0.001);
    for (int i = 1; i < 1000; ++i) {
      const double th = 0.001 + 0.998 * i / 999.0;
      const double x = pair.h(th);
      CHECK((pair.increasing ? x > prev : x < prev));
      prev = x;
      CHECK(std::abs(pair.h(pair.h_inv(x)) - x) <= 1e-11 * std::max(1.0, std::abs(x)));
      if (i % 37 == 0) {
        const double d = 1e-6;
        const double fd = (pair.h(th + d) - pair.h(th - d)) / (2 * d);
        CHECK(std::abs(fd - pair.h_prime(th)) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("pushforward densities") {
  const auto lg = pushforward_density(conjugator(make_map(LogisticParams{})));
  CHECK(std::abs(lg(0.5) - 0.6366197724) < 1e-10);
  for (double x : {0.01, 0.3, 0.77}) CHECK(std::abs(lg(x) - 1 / (M_PI * std::sqrt(x * (1 - x)))) < 1e-12);

  const auto ch = pushforward_density(conjugator(make_map(ChebyshevParams{4})));
  for (double x : {-0.9, 0.0, 0.4}) CHECK(std::abs(ch(x) - 1 / (M_PI * std::sqrt(1 - x * x))) < 1e-12);

  const auto cd = pushforward_density(conjugator(make_map(CauchyDoublingParams{})));
  for (double x : {-3.0, 0.0, 10.0}) CHECK(std::abs(cd(x) - 1 / (M_PI * (1 + x * x))) < 1e-14);

  const auto lt = pushforward_density(conjugator(make_map(LattesParams{4.0, 0.0})));
  CHECK(std::abs(lt.normalization() - 1 / 1.3110287771460599) < 1e-13);
  CHECK(std::abs(lt(2.0) - (1 / 1.3110287771460599) / std::sqrt(24.0)) < 1e-13);

  const auto sn = pushforward_density(conjugator(make_map(Sn2Params{std::sqrt(0.5)})));
  CHECK(std::abs(sn.normalization() - 1 / (2 * complete_k(0.5))) < 1e-13);
  CHECK(lg(-0.1) == 0.0);
}

TEST_CASE("closed-form densities integrate to one") {
  for (const auto& m : conjugated()) {
    INFO(m.describe());
    CHECK(std::abs(oracle_mass(pushforward_density(conjugator(m))) - 1.0) < 1e-9);
  }
  // explicit lattes example: int_1^inf Z / sqrt(4x^3 - 4x) = 1; with x = 1 + t^2
  // the integrand is Z / sqrt((1 + t^2)(2 + t^2))
  const double z = 1 / 1.3110287771460599;
  const double mass = oracle::integrate_to_inf([&](double t) { return z / std::sqrt((1 + t * t) * (2 + t * t)); }, 0.0);
  CHECK(std::abs(mass - 1.0) < 1e-9);
}

TEST_CASE("catalog_density") {
  const auto lb = catalog_density(make_map(RenyiParams{3}));
  CHECK(lb(0.3) == 1.0);
  CHECK(catalog_density(make_map(NrParams{2}))(0.9) == 1.0);
  CHECK(std::abs(catalog_density(make_map(LogisticParams{}))(0.5) - 2 / M_PI) < 1e-15);
  CHECK(throws_kind(ErrorKind::NoConjugator, [] { catalog_density(make_map(BooleLftParams{})); }));
}

TEST_CASE("measure_cdf examples") {
  const auto lg = conjugator(make_map(LogisticParams{}));
  CHECK(std::abs(measure_cdf(lg, 0.5) - 0.5) < 1e-15);
  const auto ch = conjugator(make_map(ChebyshevParams{2}));
  CHECK(std::abs(measure_cdf(ch, -1.0)) < 1e-15);
  CHECK(std::abs(measure_cdf(ch, 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(measure_cdf(ch, 0.3) - (1 - std::acos(0.3) / M_PI)) < 1e-15);
  const auto lt = conjugator(make_map(LattesParams{4.0, 0.0}));
  CHECK(std::abs(measure_cdf(lt, 1.0)) < 1e-12);
  CHECK(std::abs(measure_cdf(lt, kInf) - 1.0) < 1e-15);
  CHECK(std::abs(measure_cdf(lt, 2.0) - 0.44551489018313123) < 1e-12);
  CHECK(throws_kind(ErrorKind::Domain, [&] { measure_cdf(lg, 1.5); }));
  CHECK(throws_kind(ErrorKind::Domain, [&] { measure_cdf(lt, 0.5); }));
}

TEST_CASE("measure_cdf is monotone, normalized and matches the density") {
  for (const auto& m : conjugated()) {
    INFO(m.describe());
    const auto pair = conjugator(m);
    const auto rho = pushforward_density(pair);
    const Interval d = m.domain();
    CHECK(std::abs(measure_cdf(pair, d.lo)) < 1e-8);
    CHECK(std::abs(measure_cdf(pair, d.hi) - 1.0) < 1e-8);
    double prev = measure_cdf(pair, d.lo);
    for (int i = 1; i < 200; ++i) {
      const double th = i / 200.0;
      const double x = pair.h(th);
      const double mu = measure_cdf(pair, x);
      if (pair.increasing) {
        CHECK(mu >= prev);
        prev = mu;
      }
      CHECK(mu >= 0.0);
      CHECK(mu <= 1.0);
    }
    // derivative of mu is rho at a few interior points
    for (double th : {0.2, 0.45, 0.7}) {
      const double x = pair.h(th);
      const double dx = 1e-6 * std::max(1.0, std::abs(x));
      const double fd = (measure_cdf(pair, x + dx) - measure_cdf(pair, x - dx)) / (2 * dx);
      CHECK(std::abs(fd - rho(x)) <= 1e-5 * std::max(1.0, rho(x)));
    }
  }
}

TEST_CASE("logistic measure equals h_inv") {
  const auto lg = conjugator(make_map(LogisticParams{}));
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    CHECK(std::abs(measure_cdf(lg, x) - lg.h_inv(x)) < 1e-12);
    CHECK(std::abs(measure_cdf(lg, x) - 2 / M_PI * std::asin(std::sqrt(x))) < 1e-12);
  }
}
