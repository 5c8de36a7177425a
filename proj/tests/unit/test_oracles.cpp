#include <fracvc/fracops.hpp>
#include <fracvc/oracles.hpp>

#include "support.hpp"

#include <cmath>

using namespace fracvc;
using fracvc::test::golden;
using fracvc::test::golden_value;
using fracvc::test::rel_err;

TEST_CASE("half-space closed form") {
  const AlphaContext c1 = make_context(1, 0.5);
  const Point g = halfspace_gradient(make_point({0.0}), make_point({1.0}), make_point({1.0}), c1);
  CHECK(rel_err(g(0), 2.0 * c1.mu()) <= 1e-15);
  const AlphaContext c2 = make_context(2, 0.5);
  const Point a = halfspace_gradient(Point::Zero(2), unit_vector(2, 1), make_point({7.0, 1.0}), c2);
  CHECK(a(0) == 0.0);
  CHECK(rel_err(a(1), 2.0 * c1.mu()) <= 1e-15);
  // depends on the distance only, and equals (mu_1/alpha) nu / d^alpha
  const AlphaContext c = make_context(2, 0.25);
  const Point nu = make_point({0.6, 0.8}), x0 = make_point({1.0, -1.0});
  const Point x = make_point({-2.0, 3.0});
  const double d = std::abs((x - x0).dot(nu));
  const Point expect = make_context(1, 0.25).mu() / 0.25 * nu / std::pow(d, 0.25);
  CHECK(rel_err(halfspace_gradient(x0, nu, x, c), expect) <= 1e-14);
  CHECK_THROWS_AS(halfspace_gradient(x0, nu, x0, c), Error);
}

TEST_CASE("interval unions") {
  CHECK(rel_err(interval_union_gradient({{0.0, 1.0}}, -1.0, 0.5), golden_value("interval_gradient", 1, 0.5)) <= 1e-14);
  // negative just right of b_1, zero at the midpoint by reflection symmetry
  const std::vector<Interval> two{{0.0, 1.0}, {2.0, 3.0}};
  CHECK(interval_union_gradient(two, 1.1, 0.5) < 0.0);
  CHECK(interval_union_gradient(two, 1.9, 0.5) > 0.0);
  CHECK(std::abs(interval_union_gradient(two, 1.5, 0.5)) <= 1e-15);
  const AlphaContext c = make_context(1, 0.75);
  for (double t : {-3.0, 0.5, 2.0}) {
    const double half_line = interval_union_gradient({{-1.0, kInf}}, t, 0.75);
    CHECK(rel_err(half_line, halfspace_gradient(make_point({-1.0}), make_point({1.0}), make_point({t}), c)(0)) <= 1e-14);
  }
  CHECK(interval_constant(0.5) == doctest::Approx(make_context(1, 0.5).mu() / 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(interval_union_gradient({{0.0, 1.0}}, 1.0, 0.5), Error);
}

TEST_CASE("ball closed form") {
  const AlphaContext c = make_context(2, 0.5);
  CHECK(ball_gradient(Point::Zero(2), 1.0, Point::Zero(2), c).norm() == 0.0);
  const Point x = make_point({1.5, 0.7});
  const Point g = ball_gradient(Point::Zero(2), 1.0, x, c);
  CHECK(rel_err(g, make_point({golden_value("ball_gradient_x", 2, 0.5), golden_value("ball_gradient_y", 2, 0.5)})) <=
        1e-6);
  CHECK_THROWS_AS(ball_gradient(Point::Zero(2), 1.0, make_point({1.0, 0.0}), c), Error);
}

TEST_CASE("ball gradient points antiparallel to x - x0") {
  const AlphaContext c = make_context(2, 0.75);
  const Point x0 = make_point({0.3, -0.2});
  for (const Point& x : {make_point({0.5, 0.1}), make_point({3.0, 2.0}), make_point({-0.4, -0.9})}) {
    const Point g = ball_gradient(x0, 1.2, x, c);
    const Point d = x - x0;
    CHECK(g.dot(d) / (g.norm() * d.norm()) == doctest::Approx(-1.0).epsilon(1e-14));
  }
}

TEST_CASE("ball magnitude agrees with the engine") {
  const AlphaContext c = make_context(2, 0.5);
  QuadratureConfig q;
  q.tol = 1e-8;
  const Point x = make_point({2.0 / std::sqrt(2.0), 2.0 / std::sqrt(2.0)});
  const MeasureEstimate m = frac_gradient_set(ball(Point::Zero(2), 1.0), x, c, q);
  CHECK(std::abs(m.value.norm() - ball_gradient(Point::Zero(2), 1.0, x, c).norm()) <= m.abs_error_estimate + 1e-9);
}

TEST_CASE("ball matches the half-space constant near the sphere") {
  for (int n : {2, 3}) {
    const AlphaContext c = make_context(n, 0.5);
    const double d = 1e-3;
    Point x = Point::Zero(n);
    x(0) = 1.0 + d;
    const double scaled = ball_gradient(Point::Zero(n), 1.0, x, c).norm() * std::pow(d, 0.5);
    CHECK(rel_err(scaled, make_context(1, 0.5).mu() / 0.5) <= 0.05);
  }
}

TEST_CASE("cached profile agrees with direct quadrature") {
  const BallProfile& p = ball_profile(2, 0.5);
  for (double t : {0.01, 0.3, 0.97, 1.04, 2.5, 40.0}) {
    CAPTURE(t);
    CHECK(rel_err(p(t), ball_profile_exact(2, 0.5, t)) <= 1e-5);
  }
}

TEST_CASE("gamma beta identity") {
  for (double s : {1.0, 2.5, 3.0, 3.5})
    for (double u : {0.5, 1.0, 2.0}) {
      CAPTURE(s);
      CAPTURE(u);
      const IdentityPair p = gamma_beta_identity(u, s);
      CHECK(rel_err(p.lhs, p.rhs) <= 1e-8);
      CHECK(rel_err(p.rhs, golden_value("gamma_beta", 0, s)) <= 1e-13);
    }
  CHECK(gamma_beta_identity(1.0, 1.0).rhs == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(gamma_beta_identity(2.0, 3.0).rhs == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("half-space variation on a ball") {
  for (double a : {0.25, 0.5, 0.75}) {
    const AlphaContext c = make_context(2, a);
    const double per_unit = make_context(1, a).mu() / a;
    CHECK(rel_err(halfspace_variation_on_ball(c, 1.0), per_unit * golden_value("ball_abs_power_integral", 2, a)) <=
          1e-10);
    // homogeneous of degree n - alpha in the radius
    CHECK(rel_err(halfspace_variation_on_ball(c, 3.0), std::pow(3.0, 2.0 - a) * halfspace_variation_on_ball(c, 1.0)) <=
          1e-12);
  }
  const AlphaContext c1 = make_context(1, 0.5);
  CHECK(rel_err(halfspace_variation_on_ball(c1, 1.0), 2.0 * c1.mu() * golden_value("ball_abs_power_integral", 1, 0.5)) <=
        1e-12);
}

TEST_CASE("golden table") {
  const GoldenTable t = GoldenTable::parse("# comment\nmu 1 0.5 - 0.25 DERIVED\n\nball_gradient_x 2 0.5 1.5,0.7 -1 DERIVED\n");
  REQUIRE(t.records().size() == 2);
  CHECK(t.find("mu", 1, 0.5).expected == 0.25);
  CHECK(t.records()[1].point.size() == 2);
  CHECK_FALSE(t.lookup("mu", 2, 0.5).has_value());
  CHECK_THROWS_AS(t.find("mu", 3, 0.5), Error);
  CHECK_THROWS_AS(GoldenTable::parse("mu 1\n"), Error);
  CHECK(golden().records().size() >= 30);
}
