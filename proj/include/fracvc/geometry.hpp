#ifndef FRACVC_GEOMETRY_HPP
#define FRACVC_GEOMETRY_HPP

#include <fracvc/types.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace fracvc {

enum class Location { inside, outside, on_boundary };

/// Open parameter interval (lo, hi); hi may be +inf and lo may be -inf.
struct Interval {
  double lo;
  double hi;
};
using Segments = std::vector<Interval>;

struct SetNode;

/// An exactly decidable subset of R^n. Primitives are open sets; boolean
/// combinations follow pointwise logic. Cheap to copy (shared immutable tree).
class SetSpec {
 public:
  SetSpec(int dim, std::shared_ptr<const SetNode> node) : dim_(dim), node_(std::move(node)) {}

  int dim() const { return dim_; }
  const SetNode& node() const { return *node_; }

 private:
  int dim_;
  std::shared_ptr<const SetNode> node_;
};

namespace shape {

struct WholeSpace {};
struct EmptySet {};
/// {y : (y - origin) . normal > 0}, normal a unit vector.
struct HalfSpace {
  Point origin;
  Point normal;
};
struct Ball {
  Point center;
  double radius;
};
/// n = 1 only. Strictly increasing endpoints; the first lo may be -inf and the last hi +inf.
struct IntervalUnion {
  std::vector<Interval> intervals;
};
/// n = 2 only. Simple closed polyline; interior by nonzero winding number.
struct Polygon {
  std::vector<Eigen::Vector2d> vertices;
  bool convex = false;
};
struct Complement {
  SetSpec inner;
};
struct Intersection {
  SetSpec a;
  SetSpec b;
};
struct Union {
  SetSpec a;
  SetSpec b;
};
/// {y : origin + scale * y in inner}. Translations and dilations of any set.
struct Affine {
  SetSpec inner;
  Point origin;
  double scale;
};

}  // namespace shape

struct SetNode {
  std::variant<shape::WholeSpace, shape::EmptySet, shape::HalfSpace, shape::Ball,
               shape::IntervalUnion, shape::Polygon, shape::Complement, shape::Intersection,
               shape::Union, shape::Affine>
      shape;
};

// Construction. Every factory validates its arguments and throws Error on misuse.
SetSpec whole_space(int n);
SetSpec empty_set(int n);
SetSpec half_space(const Point& origin, const Point& normal);
SetSpec ball(const Point& center, double radius);
SetSpec interval_union(std::vector<Interval> intervals);
SetSpec convex_polygon(std::vector<Eigen::Vector2d> vertices);
SetSpec polygon(std::vector<Eigen::Vector2d> vertices);
SetSpec complement(const SetSpec& inner);
SetSpec intersection(const SetSpec& a, const SetSpec& b);
SetSpec set_union(const SetSpec& a, const SetSpec& b);
/// Axis-aligned square [lo, lo + side]^2 with exact corner coordinates.
SetSpec square(const Eigen::Vector2d& lo, double side);
/// E + shift.
SetSpec translated(const SetSpec& set, const Point& shift);
/// factor * E.
SetSpec dilated(const SetSpec& set, double factor);
/// (E - point) / radius, the blow-up rescaling.
SetSpec blow_up(const SetSpec& set, const Point& point, double radius);
/// Koch snowflake prefractal; level 0 is the unit equilateral triangle.
SetSpec koch_prefractal(int level);

// Queries.
Location membership(const SetSpec& set, const Point& x);
/// chi_E(x), with 1/2 on the boundary of a primitive.
double indicator(const SetSpec& set, const Point& x);
/// Certified lower bound on dist(x, boundary of E); exact on primitives.
double boundary_distance(const SetSpec& set, const Point& x);
/// Parameters t > 0 with x + t*dir in E, as sorted disjoint open intervals.
Segments ray_segments(const SetSpec& set, const Point& x, const Point& dir);
/// Parameters t in R with base + t*dir in E.
Segments line_segments(const SetSpec& set, const Point& base, const Point& dir);
/// n = 2: polar angles (in [0, 2 pi)) of rays from x along which the ray
/// integrands are not smooth: tangencies, vertex directions.
std::vector<double> critical_angles(const SetSpec& set, const Point& x);
/// Angles for several sets at once, including directions to points where their boundaries cross.
std::vector<double> critical_angles(const std::vector<SetSpec>& sets, const Point& x);
/// n = 2: signed offsets s (along the left normal of dir, measured from base)
/// of lines parallel to dir that touch a vertex or are tangent to a ball.
std::vector<double> critical_offsets(const SetSpec& set, const Point& base, const Point& dir);

struct BoundingBall {
  Point center;
  double radius;
};
/// A ball containing E, if E is bounded.
std::optional<BoundingBall> bounding_ball(const SetSpec& set);
inline bool is_bounded(const SetSpec& set) { return bounding_ball(set).has_value(); }

// Density diagnostics.
enum class DensityClass { density0, density1, essential_boundary, inconclusive };

struct DensityReport {
  Point point;
  std::vector<double> radii;
  std::vector<double> fractions;
  std::vector<double> standard_errors;
  DensityClass classification = DensityClass::inconclusive;
};

struct DensityThresholds {
  double low = 0.01;
  double high = 0.99;
};

/// Monte Carlo estimates of |E cap B_r(x)| / |B_r(x)| for each radius.
DensityReport density_profile(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                              int samples_per_radius, std::uint64_t seed,
                              DensityThresholds thresholds = {});

const char* to_string(DensityClass c);
const char* to_string(Location loc);

/// Interval intersection/union/complement on sorted disjoint segment lists.
Segments intersect_segments(const Segments& a, const Segments& b);
Segments unite_segments(const Segments& a, const Segments& b);
Segments complement_segments(const Segments& a, double lo, double hi);

}  // namespace fracvc

#endif  // FRACVC_GEOMETRY_HPP
