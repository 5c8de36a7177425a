#include <fracvc/kernel.hpp>

#include "support.hpp"

#include <cmath>

using namespace fracvc;
using fracvc::test::golden;
using fracvc::test::rel_err;

TEST_CASE("mu matches the independent Gamma oracle") {
  int count = 0;
  for (const auto& rec : golden().records()) {
    if (rec.name != "mu") continue;
    CAPTURE(rec.n);
    CAPTURE(rec.alpha);
    CHECK(rel_err(make_context(rec.n, rec.alpha).mu(), rec.expected) <= 1e-12);
    ++count;
  }
  CHECK(count == 15);
}

TEST_CASE("mu closed forms at alpha = 1/2") {
  const double g14 = std::tgamma(0.25);
  CHECK(rel_err(make_context(1, 0.5).mu(), std::sqrt(2.0 / kPi) * std::tgamma(1.25) / g14) <= 1e-13);
  CHECK(rel_err(make_context(2, 0.5).mu(), std::sqrt(2.0) / kPi * std::tgamma(1.75) / g14) <= 1e-13);
}

TEST_CASE("mu in log space stays finite near alpha = 1") {
  const double m = make_context(3, 1.0 - 1e-9).mu();
  CHECK(std::isfinite(m));
  CHECK(m > 0.0);
  CHECK(normalization_constant<long double>(2, 0.3L) == doctest::Approx(make_context(2, 0.3).mu()).epsilon(1e-14));
}

TEST_CASE("context validation") {
  CHECK_THROWS_WITH_AS(make_context(1, 0.0), doctest::Contains("alpha out of range"), Error);
  CHECK_THROWS_AS(make_context(1, 1.0), Error);
  CHECK_THROWS_AS(make_context(1, std::nan("")), Error);
  CHECK_THROWS_AS(make_context(0, 0.5), Error);
  CHECK_THROWS_AS(make_context(4, 0.5), Error);
}

TEST_CASE("riesz kernel") {
  const AlphaContext c1 = make_context(1, 0.5), c2 = make_context(2, 0.5);
  CHECK(riesz_kernel(make_point({1.0}), c1)(0) == 1.0);
  const Point k = riesz_kernel(make_point({3.0, 4.0}), c2);
  CHECK(rel_err(k, make_point({3.0, 4.0}) / std::pow(5.0, 3.5)) <= 1e-15);
  const Point z = make_point({0.3, -1.7});
  CHECK((riesz_kernel(z, c2) + riesz_kernel(Point(-z), c2)).norm() == 0.0);
  CHECK_THROWS_WITH_AS(riesz_kernel(Point(Point::Zero(2)), c2), doctest::Contains("kernel singularity"), Error);
}

TEST_CASE("riesz kernel homogeneity") {
  const AlphaContext c = make_context(3, 0.25);
  const Point z = make_point({0.2, 0.5, -0.4});
  const double lambda = 3.7;
  const Point lhs = riesz_kernel(Point(lambda * z), c);
  const Point rhs = std::pow(lambda, -(3 + 0.25)) * riesz_kernel(z, c);
  CHECK(rel_err(lhs, rhs) <= 1e-14);
}

TEST_CASE("mu descent") {
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    CAPTURE(a);
    CHECK(rel_err(mu_descent(make_context(2, a)), make_context(1, a).mu()) <= 1e-12);
    CHECK(rel_err(mu_descent(make_context(3, a)), make_context(2, a).mu()) <= 1e-12);
  }
  CHECK_THROWS_WITH_AS(mu_descent(make_context(1, 0.5)), doctest::Contains("no lower dimension"), Error);
}

TEST_CASE("gamma ratio and sphere constants") {
  for (const auto& rec : golden().records())
    if (rec.name == "gamma_beta") CHECK(rel_err(gamma_beta_ratio(rec.alpha), rec.expected) <= 1e-13);
  CHECK(gamma_beta_ratio(1.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(sphere_surface(1) == 2.0);
  CHECK(sphere_surface(2) == doctest::Approx(2 * kPi));
  CHECK(sphere_surface(3) == doctest::Approx(4 * kPi));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * kPi / 3));
}
