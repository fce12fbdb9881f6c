#include "doctest.h"

#include <cmath>
#include <random>

#include "compop/boundary_set.hpp"
#include "compop/errors.hpp"
#include "compop/symbol.hpp"
#include "compop/weight.hpp"

using namespace compop;

TEST_CASE("weight families") {
  auto id = WeightFunction::power(1.0, 1.0);
  CHECK(id(kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-15));

  auto lp = WeightFunction::log_power(2.0);
  const double t = std::exp(1.0) * std::exp(-std::exp(1.0));
  CHECK(lp(t) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(lp(0.0) == 0.0);

  auto lin = WeightFunction::custom({{0.0, 0.0}, {kPi, 1.0}});
  CHECK(lin(kPi / 2) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(WeightFunction::power(0.0, 1.0), Error);
  CHECK_THROWS_AS(WeightFunction::log_power(-1.0), Error);
  try {
    WeightFunction::custom({{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.4}, {kPi, 1.0}});
    FAIL("expected NonMonotone");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotone);
  }
}

TEST_CASE("weight inverse and derivative") {
  const std::vector<WeightFunction> hs{
      WeightFunction::power(1.0, 1.0), WeightFunction::power(2.0, 1.5), WeightFunction::log_power(2.0),
      WeightFunction::custom({{0.0, 0.0}, {0.5, 0.1}, {1.0, 0.5}, {2.0, 0.9}, {kPi, 1.0}})};
  for (const auto& h : hs) {
    for (int k = 1; k <= 40; ++k) {
      const double t = kPi * k / 41.0;
      CHECK(h.inverse(h(t)) == doctest::Approx(t).epsilon(1e-10));
      const double d = 1e-6;
      const double fd = (h(t + d) - h(t - d)) / (2 * d);
      CHECK(h.derivative(t) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("admissibility report") {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(kPi / 2 * std::pow(2.0, -0.5 * (k - 1)));
  auto r1 = admissibility_report(WeightFunction::power(1.0, 1.0), grid);
  CHECK(r1.doubling_min == doctest::Approx(2.0));
  CHECK(r1.doubling_max == doctest::Approx(2.0));
  CHECK(r1.slope_min == doctest::Approx(1.0));
  CHECK(r1.shape == WeightShape::Linear);
  CHECK(r1.admissible);

  auto r2 = admissibility_report(WeightFunction::power(1.0, 2.0), grid);
  CHECK(r2.doubling_min == doctest::Approx(4.0));
  CHECK(r2.slope_max == doctest::Approx(2.0));
  CHECK(r2.admissible);

  std::vector<double> g3;
  for (int k = 4; k <= 20; ++k) g3.push_back(std::pow(2.0, -k));
  auto h3 = WeightFunction::log_power(2.0);
  auto r3 = admissibility_report(h3, g3);
  // symbolic oracle: t h'/h = 2/log(e/t)
  double smin = 1e300;
  for (double t : g3) smin = std::min(smin, 2.0 / std::log(std::exp(1.0) / t));
  CHECK(r3.slope_min == doctest::Approx(smin).epsilon(1e-6));
  CHECK_FALSE(r3.admissible);

  CHECK_THROWS_AS(admissibility_report(h3, std::vector<double>{0.1, 0.2}), Error);
  std::vector<double> bad = g3;
  bad.push_back(2.0);
  CHECK_THROWS_AS(admissibility_report(h3, bad), Error);
}

TEST_CASE("cantor sets") {
  auto c0 = make_cantor_set(0, 0.3);
  CHECK(c0.arcs().size() == 1);
  CHECK(*c0.analytic_hausdorff_dimension() == 1.0);

  auto c1 = make_cantor_set(1, 1.0 / 3);
  REQUIRE(c1.arcs().size() == 2);
  for (const auto& a : c1.arcs()) CHECK(a.length() == doctest::Approx(kTwoPi / 3));
  CHECK(*c1.analytic_hausdorff_dimension() == doctest::Approx(std::log(2.0) / std::log(3.0)));

  auto c2 = make_cantor_set(2, 0.25);
  REQUIRE(c2.arcs().size() == 4);
  for (const auto& a : c2.arcs()) CHECK(a.length() == doctest::Approx(kTwoPi / 16));

  CHECK(neighborhood_measure(c1, kTwoPi / 6) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_cantor_set(-1, 0.3), Error);
  CHECK_THROWS_AS(make_cantor_set(2, 0.5), Error);
}

TEST_CASE("neighbourhood measure: self-similar formula vs explicit arc merge") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int level : {1, 3, 6, 9}) {
    for (double ratio : {0.1, 0.25, 0.4}) {
      auto K = make_cantor_set(level, ratio);
      auto E = BoundarySet::from_arcs(K.arcs());
      for (int i = 0; i < 20; ++i) {
        const double t = std::pow(10.0, -6.0 * U(rng)) * 2.0;
        CHECK(K.neighborhood_measure(t) == doctest::Approx(E.neighborhood_measure(t)).epsilon(1e-12));
        const double th = kTwoPi * U(rng);
        CHECK(K.distance(th) == doctest::Approx(E.distance(th)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("neighbourhood measure basics") {
  auto P = BoundarySet::point(1.0);
  CHECK(P.neighborhood_measure(0.5) == doctest::Approx(0.5 / kPi));
  CHECK(P.neighborhood_measure(4.0) == 1.0);
  auto A = BoundarySet::arc(0.0, 1.0);
  CHECK(A.neighborhood_measure(0.25) == doctest::Approx(1.5 / kTwoPi));
  CHECK(BoundarySet().neighborhood_measure(1.0) == 0.0);

  auto K = BoundarySet::from_arcs({{0.2, 0.4}, {1.0, 1.0}, {3.0, 4.5}, {6.1, 6.2}});
  double prev = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = 0.01 * k;
    const double m = K.neighborhood_measure(t);
    CHECK(m >= prev);
    if (k > 0) CHECK(m - prev <= 2.0 * 4 * 0.01 / kTwoPi + 1e-14);
    prev = m;
  }
}

TEST_CASE("symbol evaluation") {
  auto zero = Symbol::outer(WeightFunction::zero(), BoundarySet::point(0.0));
  auto e0 = eval(zero, {0.3, 0.2});
  CHECK(std::abs(e0.value - 1.0) < 1e-15);
  CHECK(std::abs(e0.derivative) < 1e-15);

  auto sr = Symbol::scaled_rotation(0.4, 0.0);
  auto es = eval(sr, {0.1, -0.5});
  CHECK(std::abs(es.value - cplx(0.04, -0.2)) < 1e-15);
  CHECK(std::abs(es.derivative - 0.4) < 1e-15);

  CHECK_THROWS_AS(eval(sr, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(Symbol::polynomial({0.0, 1.0, 0.5}), Error);
}

namespace {
// Dense trapezoid oracle for f(0) = exp(-mean of g).
double trapezoid_f0(const Symbol& phi, int n) {
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += phi.boundary_exponent(kTwoPi * k / n);
  return std::exp(-acc / n);
}
}  // namespace

TEST_CASE("outer symbol f(0) against trapezoid oracle") {
  const std::vector<Symbol> syms{
      Symbol::outer(WeightFunction::power(1.0, 1.0), BoundarySet::point(1.0)),
      Symbol::outer(WeightFunction::power(1.0, 2.0), BoundarySet::arc(0.5, 2.0)),
      Symbol::outer(WeightFunction::log_power(2.0), make_cantor_set(4, 0.3))};
  // The log-power weight has infinite slope at the arc endpoints, which limits
  // the trapezoid oracle itself to about 1e-8 at 2^20 nodes.
  const double tol[] = {1e-9, 1e-9, 5e-8};
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const double oracle = trapezoid_f0(syms[i], 1 << 20);
    CHECK(std::abs(eval(syms[i], 0.0).value - oracle) < tol[i]);
  }
}

TEST_CASE("outer symbol derivative, modulus and radial limits") {
  auto phi = Symbol::outer(WeightFunction::power(1.0, 1.0), BoundarySet::point(1.0));
  const cplx z(0.3, 0.5);
  const double d = 1e-5;
  const cplx fd = (eval(phi, z + d).value - eval(phi, z - d).value) / (2 * d);
  CHECK(std::abs(eval(phi, z).derivative - fd) < 1e-7);
  CHECK(std::abs(eval(phi, z).value) < 1.0);

  CHECK(boundary_modulus(phi, 1.0) == doctest::Approx(1.0));
  CHECK(boundary_modulus(phi, 2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(boundary_modulus(Symbol::polynomial({0.0, 0.0, 1.0}), 0.7) == doctest::Approx(1.0));

  for (double th : {2.5, 4.0}) {
    double prev_err = 1e300;
    for (int k = 2; k <= 12; ++k) {
      const double r = 1.0 - std::pow(2.0, -k);
      const double err = std::abs(std::abs(eval(phi, std::polar(r, th)).value) - boundary_modulus(phi, th));
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
    CHECK(prev_err < 1e-3);
  }
}

TEST_CASE("self-map property on a 2^14 grid") {
  const std::vector<Symbol> syms{
      Symbol::polynomial({0.0, 0.5, 0.5}), Symbol::scaled_rotation(0.9, 1.0),
      Symbol::outer(WeightFunction::log_power(1.0), make_cantor_set(5, 0.2))};
  for (const auto& phi : syms) {
    double sup = 0.0;
    for (int k = 0; k < (1 << 14); ++k) sup = std::max(sup, boundary_modulus(phi, kTwoPi * k / (1 << 14)));
    CHECK(sup <= 1.0 + 1e-9);
  }
}

TEST_CASE("taylor coefficients") {
  auto c = taylor_coefficients(Symbol::scaled_rotation(0.3, 0.0), 8);
  CHECK(c.size() == 8);
  CHECK(std::abs(c[1] - 0.3) < 1e-15);
  for (int k : {0, 2, 3, 7}) CHECK(c[k] == cplx(0.0));

  auto q = taylor_coefficients(Symbol::polynomial({0.0, 0.5, 0.5}), 8);
  CHECK(std::abs(q[1] - 0.5) < 1e-15);
  CHECK(std::abs(q[2] - 0.5) < 1e-15);
  CHECK(q[3] == cplx(0.0));
  CHECK_THROWS_AS(taylor_coefficients(Symbol::identity(), 6), Error);

  auto phi = Symbol::outer(WeightFunction::power(1.0, 1.0), BoundarySet::point(1.0));
  auto t64 = taylor_coefficients(phi, 64);
  CHECK(std::abs(t64[0] - eval(phi, 0.0).value) < 1e-8);
  auto t128 = taylor_coefficients(phi, 128);
  for (int k = 0; k < 32; ++k) CHECK(std::abs(t128[k] - t64[k]) < 1e-6);
  // coefficient 1 equals φ'(0)
  CHECK(std::abs(t64[1] - eval(phi, 0.0).derivative) < 1e-8);
}
