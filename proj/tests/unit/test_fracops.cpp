#include <fracvc/fracops.hpp>
#include <fracvc/random.hpp>

#include "support.hpp"

#include <cmath>

using namespace fracvc;
using fracvc::test::golden_value;
using fracvc::test::rel_err;

namespace {

QuadratureConfig config(double tol = 1e-6) {
  QuadratureConfig q;
  q.tol = tol;
  return q;
}

const SetSpec unit_ball = ball(Point::Zero(2), 1.0);
const SetSpec upper = half_space(Point::Zero(2), unit_vector(2, 1));

}  // namespace

TEST_CASE("half-space gradient is the closed form") {
  const AlphaContext c1 = make_context(1, 0.5);
  const MeasureEstimate m = frac_gradient_set(half_space(make_point({0.0}), make_point({1.0})), make_point({1.0}), c1,
                                              config(1e-8));
  CHECK(rel_err(m.value(0), 2.0 * c1.mu()) <= 1e-7);

  const AlphaContext c2 = make_context(2, 0.5);
  const MeasureEstimate a = frac_gradient_set(upper, make_point({7.0, 1.0}), c2, config(1e-8));
  const MeasureEstimate b = frac_gradient_set(upper, make_point({-3.0, 1.0}), c2, config(1e-8));
  CHECK(rel_err(Point(a.value), make_point({0.0, 2.0 * c1.mu()})) <= 1e-6);
  CHECK((a.value - b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate);
}

TEST_CASE("interval at t = -1") {
  const AlphaContext c = make_context(1, 0.5);
  const MeasureEstimate m = frac_gradient_set(interval_union({{0.0, 1.0}}), make_point({-1.0}), c, config(1e-9));
  CHECK(rel_err(m.value(0), golden_value("interval_gradient", 1, 0.5)) <= 1e-8);
  CHECK(rel_err(m.value(0), 2.0 * c.mu() * (1.0 - 1.0 / std::sqrt(2.0))) <= 1e-8);
}

TEST_CASE("ball gradient vanishes at the center and matches the golden value off it") {
  const AlphaContext c = make_context(2, 0.5);
  const MeasureEstimate z = frac_gradient_set(unit_ball, Point::Zero(2), c, config());
  CHECK(z.value.norm() <= z.abs_error_estimate + 1e-14);
  const MeasureEstimate m = frac_gradient_set(unit_ball, make_point({1.5, 0.7}), c, config(1e-8));
  const Point g = make_point({golden_value("ball_gradient_x", 2, 0.5), golden_value("ball_gradient_y", 2, 0.5)});
  CHECK(rel_err(Point(m.value), g) <= 1e-6);
}

TEST_CASE("boundary points are rejected") {
  const AlphaContext c = make_context(2, 0.5);
  CHECK_THROWS_WITH_AS(frac_gradient_set(unit_ball, make_point({0.0, 1.0}), c, config()),
                       doctest::Contains("evaluation point on boundary"), Error);
}

TEST_CASE("property: translation and dilation covariance") {
  const AlphaContext c = make_context(2, 0.75);
  const SetSpec sq = square(Eigen::Vector2d(0.0, 0.0), 1.0);
  const Point x = make_point({1.3, 0.4}), shift = make_point({-2.0, 5.0});
  const MeasureEstimate a = frac_gradient_set(sq, x, c, config(1e-8));
  const MeasureEstimate b = frac_gradient_set(translated(sq, shift), x + shift, c, config(1e-8));
  CHECK((a.value - b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate + 1e-12);
  const double lambda = 3.0;
  const MeasureEstimate d = frac_gradient_set(dilated(sq, lambda), lambda * x, c, config(1e-8));
  const Value scaled = std::pow(lambda, -c.alpha()) * a.value;
  CHECK((d.value - scaled).norm() <= d.abs_error_estimate + a.abs_error_estimate + 1e-12);
}

TEST_CASE("property: complement flips the sign") {
  const AlphaContext c = make_context(2, 0.5);
  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const Point x = random_in_ball(Point::Zero(2), 2.0, rng);
    const MeasureEstimate a = frac_gradient_set(unit_ball, x, c, config());
    const MeasureEstimate b = frac_gradient_set(complement(unit_ball), x, c, config());
    CHECK((a.value + b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate + 1e-12);
  }
}

TEST_CASE("fields") {
  const AlphaContext c = make_context(2, 0.5);
  CHECK(frac_gradient(constant_field(2, 2.0), make_point({0.1, 0.1}), c, config()).value.norm() == 0.0);
  const FieldSpec bump = radial_bump(make_point({0.2, 0.1}), 0.8);
  const MeasureEstimate m = frac_gradient(bump, make_point({0.2, 0.1}), c, config());
  CHECK(m.value.norm() <= m.abs_error_estimate + 1e-14);

  // divergence of bump e_1 is the first gradient component
  const Point x = make_point({0.6, -0.3});
  const MeasureEstimate g = frac_gradient(bump, x, c, config(1e-8));
  const MeasureEstimate d = frac_divergence(along_axis(bump, 0), x, c, config(1e-8));
  CHECK(std::abs(d.scalar() - g.value(0)) <= d.abs_error_estimate + g.abs_error_estimate);
  CHECK(frac_divergence(vector_field({constant_field(2, 1.0), constant_field(2, -1.0)}), x, c, config()).value.norm() ==
        0.0);
}

TEST_CASE("divergence matches the Monte Carlo oracle") {
  const AlphaContext c = make_context(2, 0.5);
  const FieldSpec phi = vector_field({modulated_bump(make_point({0.0, 0.0}), 1.0, 1), radial_bump(make_point({0.3, 0.0}), 0.7)});
  const Point x = make_point({0.4, 0.5});
  const MeasureEstimate d = frac_divergence(phi, x, c, config(1e-8));
  QuadratureConfig q = config();
  q.mc_samples = 400000;
  const MeasureEstimate mc = mc_singular_integral_divergence(phi, x, c, q);
  CHECK(std::abs(d.scalar() - c.mu() * mc.scalar()) <= c.mu() * 4.0 * mc.abs_error_estimate + d.abs_error_estimate);
}

TEST_CASE("nonlocal gradient") {
  const AlphaContext c = make_context(2, 0.5);
  const Point x = make_point({0.4, 0.3});
  CHECK(frac_nl_gradient(Operand(unit_ball), Operand(constant_field(2, 1.0)), x, c, config()).value.norm() == 0.0);

  // symmetric in its arguments
  const MeasureEstimate fg = frac_nl_gradient(Operand(unit_ball), Operand(upper), x, c, config());
  const MeasureEstimate gf = frac_nl_gradient(Operand(upper), Operand(unit_ball), x, c, config());
  CHECK((fg.value - gf.value).norm() <= fg.abs_error_estimate + gf.abs_error_estimate + 1e-14);

  // chi_E with itself: (1 - 2 chi_E(x)) times the gradient
  for (const Point& y : {make_point({0.4, 0.3}), make_point({1.4, -0.3})}) {
    const MeasureEstimate nl = frac_nl_gradient(Operand(unit_ball), Operand(unit_ball), y, c, config());
    const MeasureEstimate gr = frac_gradient_set(unit_ball, y, c, config());
    const Value expect = (1.0 - 2.0 * indicator(unit_ball, y)) * gr.value;
    CHECK((nl.value - expect).norm() <= nl.abs_error_estimate + gr.abs_error_estimate + 1e-14);
  }

  QuadratureConfig q = config();
  q.mc_samples = 400000;
  const MeasureEstimate mc = mc_singular_integral_nl(Operand(unit_ball), Operand(upper), x, c, q);
  CHECK((fg.value - c.mu() * mc.value).norm() <= c.mu() * 4.0 * mc.abs_error_estimate + fg.abs_error_estimate);
}

TEST_CASE("Leibniz rule at a point") {
  const AlphaContext c = make_context(2, 0.5);
  const Operand f(unit_ball), g(radial_bump(make_point({0.5, 0.0}), 1.0));
  const Point x = make_point({0.2, 0.4});
  const MeasureEstimate prod = frac_gradient(f * g, x, c, config());
  const MeasureEstimate gf = frac_gradient(f, x, c, config());
  const MeasureEstimate gg = frac_gradient(g, x, c, config());
  const MeasureEstimate nl = frac_nl_gradient(f, g, x, c, config());
  const Value rhs = f.value(x) * gg.value + g.value(x) * gf.value + nl.value;
  const double bars = prod.abs_error_estimate + std::abs(f.value(x)) * gg.abs_error_estimate +
                      std::abs(g.value(x)) * gf.abs_error_estimate + nl.abs_error_estimate;
  CHECK((prod.value - rhs).norm() <= bars);
}

TEST_CASE("nonlocal divergence") {
  const AlphaContext c = make_context(2, 0.5);
  const Point x = make_point({0.2, -0.6});
  const FieldSpec phi = along_axis(radial_bump(make_point({0.0, 0.0}), 1.0), 0);
  CHECK(frac_nl_divergence(Operand(constant_field(2, 1.0)), phi, x, c, config()).value.norm() == 0.0);
  CHECK(frac_nl_divergence(Operand(unit_ball), along_axis(constant_field(2, 1.0), 1), x, c, config()).value.norm() ==
        0.0);
  const MeasureEstimate v = frac_nl_divergence(Operand(unit_ball), phi, x, c, config(1e-7));
  QuadratureConfig q = config();
  q.mc_samples = 400000;
  const MeasureEstimate mc = mc_singular_integral_nl_divergence(Operand(unit_ball), phi, x, c, q);
  CHECK(std::abs(v.scalar() - c.mu() * mc.scalar()) <= c.mu() * 4.0 * mc.abs_error_estimate + v.abs_error_estimate);
}

TEST_CASE("perimeter") {
  const AlphaContext c1 = make_context(1, 0.5);
  const SetSpec i = interval_union({{-1.0, 1.0}});
  const MeasureEstimate det = frac_perimeter(i, std::nullopt, c1, config(1e-8), PerimeterMethod::deterministic);
  CHECK(rel_err(det.scalar(), golden_value("perimeter_interval", 1, 0.5)) <= 1e-6);
  QuadratureConfig q = config();
  q.mc_samples = 400000;
  const MeasureEstimate mc = frac_perimeter(i, std::nullopt, c1, q, PerimeterMethod::monte_carlo);
  CHECK(std::abs(mc.scalar() - det.scalar()) <= 4.0 * mc.abs_error_estimate + 1e-6 * det.scalar());

  CHECK(frac_perimeter(empty_set(2), std::nullopt, make_context(2, 0.5), config()).scalar() == 0.0);
  CHECK_THROWS_WITH_AS(frac_perimeter(upper, std::nullopt, make_context(2, 0.5), config()),
                       doctest::Contains("perimeter may diverge"), Error);
}

TEST_CASE("local perimeter") {
  const AlphaContext c = make_context(2, 0.5);
  const SetSpec far = ball(make_point({5.0, 5.0}), 0.5);
  CHECK(frac_perimeter_local(unit_ball, far, c, config()).scalar() == 0.0);
  CHECK(frac_perimeter_local(upper, ball(make_point({0.0, 3.0}), 1.0), c, config()).scalar() == 0.0);
  QuadratureConfig q = config();
  q.mc_samples = 200000;
  const MeasureEstimate a = frac_perimeter_local(upper, unit_ball, c, q);
  q.seed += 17;
  const MeasureEstimate b = frac_perimeter_local(upper, unit_ball, c, q);
  CHECK(a.scalar() > 0.0);
  CHECK(std::abs(a.scalar() - b.scalar()) <= 3.0 * std::hypot(a.abs_error_estimate, b.abs_error_estimate));
}

TEST_CASE("perimeter dominates the total variation") {
  const AlphaContext c = make_context(2, 0.5);
  const MeasureEstimate p = frac_perimeter(unit_ball, std::nullopt, c, config(1e-5), PerimeterMethod::deterministic);
  // |grad chi_E| is radial in r = |x|; integrate its magnitude on a large disk
  const QuadratureConfig q = config(1e-5);
  auto magnitude = [&](double r) {
    const MeasureEstimate m = frac_gradient_set(unit_ball, make_point({r, 0.0}), c, q);
    return m.value.norm();
  };
  double total = 0.0;
  const int nodes = 400;
  for (int k = 0; k < nodes; ++k) {
    // midpoint rule in r on [0, 8] avoiding r = 1
    const double r = 8.0 * (k + 0.5) / nodes;
    total += 2.0 * kPi * r * magnitude(r) * 8.0 / nodes;
  }
  CHECK(c.mu() * p.scalar() >= total);
}
