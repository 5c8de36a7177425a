#include <fracvc/geometry.hpp>
#include <fracvc/random.hpp>

#include "support.hpp"

#include <cmath>

using namespace fracvc;

namespace {

SetSpec unit_ball(int n) { return ball(Point::Zero(n), 1.0); }
SetSpec upper(int n) { return half_space(Point::Zero(n), unit_vector(n, n - 1)); }
SetSpec unit_square() { return square(Eigen::Vector2d(0.0, 0.0), 1.0); }

std::size_t vertex_count(const SetSpec& e) { return std::get<shape::Polygon>(e.node().shape).vertices.size(); }

}  // namespace

TEST_CASE("membership of primitives") {
  CHECK(membership(unit_ball(2), make_point({0.0, 0.0})) == Location::inside);
  CHECK(membership(unit_ball(2), make_point({1.0, 0.0})) == Location::on_boundary);
  CHECK(membership(unit_ball(2), make_point({0.0, 1.5})) == Location::outside);
  CHECK(membership(upper(2), make_point({3.0, -1.0})) == Location::outside);
  CHECK(membership(upper(1), make_point({-1.0})) == Location::outside);
  CHECK(membership(complement(unit_ball(2)), make_point({0.0, 0.0})) == Location::outside);
  CHECK(membership(unit_square(), make_point({0.0, 0.0})) == Location::on_boundary);
  CHECK(membership(unit_square(), make_point({0.5, 0.5})) == Location::inside);
  CHECK(membership(whole_space(3), make_point({1.0, 2.0, 3.0})) == Location::inside);
  CHECK(membership(empty_set(3), make_point({1.0, 2.0, 3.0})) == Location::outside);
  CHECK(indicator(upper(2), make_point({4.0, 0.0})) == 0.5);
}

TEST_CASE("boolean combinations") {
  const SetSpec lens = intersection(unit_ball(2), upper(2));
  CHECK(membership(lens, make_point({0.0, 0.5})) == Location::inside);
  CHECK(membership(lens, make_point({0.0, -0.5})) == Location::outside);
  CHECK(membership(lens, make_point({0.5, 0.0})) == Location::on_boundary);
  const SetSpec both = set_union(unit_ball(2), ball(make_point({3.0, 0.0}), 1.0));
  CHECK(membership(both, make_point({3.2, 0.1})) == Location::inside);
  CHECK(membership(both, make_point({2.0, 0.0})) == Location::on_boundary);
  CHECK(membership(both, make_point({1.5, 0.0})) == Location::outside);
}

TEST_CASE("affine images") {
  const SetSpec e = translated(dilated(unit_ball(2), 2.0), make_point({1.0, 0.0}));
  CHECK(membership(e, make_point({2.9, 0.0})) == Location::inside);
  CHECK(membership(e, make_point({3.0, 0.0})) == Location::on_boundary);
  const SetSpec b = blow_up(unit_ball(2), make_point({1.0, 0.0}), 0.25);
  CHECK(membership(b, make_point({-1.0, 0.0})) == Location::inside);
  CHECK(membership(b, make_point({0.0, 0.0})) == Location::on_boundary);
  CHECK(boundary_distance(b, make_point({-1.0, 0.0})) == doctest::Approx(1.0));
}

TEST_CASE("boundary distance") {
  CHECK(boundary_distance(unit_ball(2), make_point({2.0, 0.0})) == doctest::Approx(1.0));
  const SetSpec h = half_space(make_point({1.0, 1.0}), make_point({0.6, 0.8}));
  const Point x = make_point({4.0, -2.0});
  CHECK(boundary_distance(h, x) == doctest::Approx(std::abs((x - make_point({1.0, 1.0})).dot(make_point({0.6, 0.8})))));
  const SetSpec lens = intersection(unit_ball(2), upper(2));
  const Point y = make_point({0.1, 0.3});
  CHECK(boundary_distance(lens, y) <=
        std::min(boundary_distance(unit_ball(2), y), boundary_distance(upper(2), y)) + 1e-15);
  CHECK(boundary_distance(unit_square(), make_point({0.5, 0.25})) == doctest::Approx(0.25));
}

TEST_CASE("ray and line segments") {
  const Segments r = ray_segments(unit_ball(2), make_point({0.0, 0.0}), make_point({1.0, 0.0}));
  REQUIRE(r.size() == 1);
  CHECK(r[0].lo == 0.0);
  CHECK(r[0].hi == doctest::Approx(1.0));
  const Segments l = line_segments(unit_square(), make_point({-1.0, 0.5}), make_point({1.0, 0.0}));
  REQUIRE(l.size() == 1);
  CHECK(l[0].lo == doctest::Approx(1.0));
  CHECK(l[0].hi == doctest::Approx(2.0));
  const Segments h = ray_segments(upper(2), make_point({0.0, -1.0}), make_point({0.0, 1.0}));
  REQUIRE(h.size() == 1);
  CHECK(h[0].lo == doctest::Approx(1.0));
  CHECK(std::isinf(h[0].hi));
  const SetSpec two = interval_union({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(line_segments(two, make_point({0.0}), make_point({1.0})).size() == 2);
}

TEST_CASE("segment algebra") {
  const Segments a = {{0.0, 2.0}, {3.0, 5.0}}, b = {{1.0, 4.0}};
  const Segments i = intersect_segments(a, b);
  REQUIRE(i.size() == 2);
  CHECK(i[0].lo == 1.0);
  CHECK(i[1].hi == 4.0);
  CHECK(unite_segments(a, b).size() == 1);
  const Segments c = complement_segments(a, -1.0, 6.0);
  REQUIRE(c.size() == 3);
  CHECK(c[1].lo == 2.0);
  CHECK(c[1].hi == 3.0);
}

TEST_CASE("critical angles of a square seen from outside") {
  const std::vector<double> ang = critical_angles(unit_square(), make_point({-1.0, 0.5}));
  for (double target : {std::atan2(-0.5, 1.0) + 2 * kPi, std::atan2(0.5, 1.0)}) {
    bool found = false;
    for (double a : ang) found = found || std::abs(a - target) < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("critical angles include boundary crossings") {
  const auto has = [](const std::vector<double>& ang, double target) {
    bool found = false;
    for (double a : ang) found = found || std::abs(a - target) < 1e-12;
    return found;
  };
  // Circles |y| = 1 and |y - e1| = 1 cross at (1/2, +-sqrt(3)/2); seen from (1/2, -2).
  const Point x = make_point({0.5, -2.0});
  const SetSpec a = unit_ball(2), b = ball(make_point({1.0, 0.0}), 1.0);
  for (const auto& set : {intersection(a, b), set_union(a, b)}) CHECK(has(critical_angles(set, x), kPi / 2));
  CHECK(has(critical_angles(std::vector<SetSpec>{a, b}, x), kPi / 2));
  CHECK_FALSE(has(critical_angles(a, x), kPi / 2));
  // Line y2 = 0 meets the circle at (+-1, 0); seen from (0, 1) through a scaled copy.
  const SetSpec lens = intersection(dilated(unit_ball(2), 2.0), upper(2));
  const std::vector<double> ang = critical_angles(lens, make_point({0.0, 1.0}));
  CHECK(has(ang, std::atan2(-1.0, 2.0) + 2 * kPi));
  CHECK(has(ang, std::atan2(-1.0, -2.0) + 2 * kPi));
}

TEST_CASE("bounding balls") {
  CHECK(is_bounded(unit_square()));
  CHECK_FALSE(is_bounded(upper(2)));
  CHECK(is_bounded(intersection(upper(2), unit_ball(2))));
  const auto bb = bounding_ball(koch_prefractal(3));
  REQUIRE(bb.has_value());
  CHECK(bb->radius > 0.5);
}

TEST_CASE("koch prefractal vertex counts") {
  CHECK(vertex_count(koch_prefractal(0)) == 3);
  CHECK(vertex_count(koch_prefractal(1)) == 12);
  for (int k = 0; k <= 4; ++k) CHECK(vertex_count(koch_prefractal(k)) == 3u * (1u << (2 * k)));
  CHECK_THROWS_AS(koch_prefractal(-1), Error);
  CHECK_THROWS_AS(koch_prefractal(40), Error);
  CHECK(membership(koch_prefractal(2), make_point({0.5, 0.3})) == Location::inside);
}

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(ball(make_point({0.0, 0.0}), -1.0), Error);
  CHECK_THROWS_AS(half_space(make_point({0.0, 0.0}), make_point({0.0, 0.0})), Error);
  CHECK_THROWS_AS(interval_union({{0.0, 2.0}, {1.0, 3.0}}), Error);
  CHECK_THROWS_AS(intersection(unit_ball(2), unit_ball(3)), Error);
}

TEST_CASE("density profiles") {
  const std::vector<double> radii{0.5, 0.1, 0.01};
  const DensityReport in = density_profile(unit_ball(2), make_point({0.0, 0.0}), radii, 2000, 7);
  for (double f : in.fractions) CHECK(f == 1.0);
  CHECK(in.classification == DensityClass::density1);

  const DensityReport half = density_profile(upper(2), make_point({0.0, 0.0}), radii, 20000, 7);
  for (double f : half.fractions) CHECK(std::abs(f - 0.5) < 0.02);
  CHECK(half.classification == DensityClass::essential_boundary);

  const DensityReport corner = density_profile(unit_square(), make_point({0.0, 0.0}), radii, 20000, 7);
  for (double f : corner.fractions) CHECK(std::abs(f - 0.25) < 0.02);
  CHECK(corner.classification == DensityClass::essential_boundary);

  CHECK_THROWS_AS(density_profile(upper(2), make_point({0.0, 0.0}), {}, 10, 1), Error);
}

TEST_CASE("property: membership agrees with boundary distance") {
  Rng rng(11);
  const SetSpec e = set_union(intersection(unit_ball(2), upper(2)), translated(unit_square(), make_point({0.5, -1.5})));
  for (int k = 0; k < 500; ++k) {
    const Point x = random_in_ball(Point::Zero(2), 2.5, rng);
    const double d = boundary_distance(e, x);
    CHECK(d >= 0.0);
    if (d > 1e-9) {
      // moving by less than the distance never changes membership
      const Point y = x + 0.99 * d * random_direction(2, rng);
      CHECK(membership(e, x) == membership(e, y));
    }
  }
}
