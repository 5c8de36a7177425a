#include <fracvc/geometry.hpp>
#include <fracvc/random.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracvc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

SetSpec make_set(int dim, auto shape) {
  auto node = std::make_shared<SetNode>();
  node->shape = std::move(shape);
  return SetSpec(dim, std::move(node));
}

void require_dim(const Point& p, int n, const char* what) {
  if (p.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected a " << n << "-vector, got size " << p.size();
    throw Error(msg.str());
  }
}

void require_same_dim(const SetSpec& a, const SetSpec& b, const char* what) {
  if (a.dim() != b.dim()) throw Error(std::string(what) + ": operands live in different dimensions");
}

Eigen::Vector2d as2(const Point& p) { return Eigen::Vector2d(p(0), p(1)); }

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// ---- polygons -------------------------------------------------------------

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (cross2(b - a, p - a) != 0.0) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

Location polygon_membership(const shape::Polygon& poly, const Eigen::Vector2d& p) {
  const auto& v = poly.vertices;
  const std::size_t m = v.size();
  int winding = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& a = v[i];
    const Eigen::Vector2d& b = v[(i + 1) % m];
    if (on_segment(p, a, b)) return Location::on_boundary;
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && cross2(b - a, p - a) > 0.0) ++winding;
    } else if (b.y() <= p.y() && cross2(b - a, p - a) < 0.0) {
      --winding;
    }
  }
  return winding != 0 ? Location::inside : Location::outside;
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

Segments polygon_ray(const shape::Polygon& poly, const Eigen::Vector2d& x, const Eigen::Vector2d& d) {
  const auto& v = poly.vertices;
  const std::size_t m = v.size();
  std::vector<double> ts;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& a = v[i];
    const Eigen::Vector2d e = v[(i + 1) % m] - a;
    const double denom = cross2(d, e);
    if (denom == 0.0) continue;  // parallel: measure-zero set of directions
    const Eigen::Vector2d w = a - x;
    const double t = cross2(w, e) / denom;
    const double u = cross2(w, d) / denom;
    if (u >= 0.0 && u <= 1.0 && t > 0.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  Segments out;
  double prev = 0.0;
  auto test = [&](double lo, double hi) {
    const double mid = std::isinf(hi) ? lo + 1.0 + lo : 0.5 * (lo + hi);
    if (polygon_membership(poly, x + mid * d) == Location::inside) {
      if (!out.empty() && out.back().hi == lo) {
        out.back().hi = hi;
      } else {
        out.push_back({lo, hi});
      }
    }
  };
  for (double t : ts) {
    if (t > prev) test(prev, t);
    prev = t;
  }
  test(prev, kInf);
  return out;
}

// ---- interval lists -------------------------------------------------------

void push_merged(Segments& out, Interval iv) {
  if (!(iv.hi > iv.lo)) return;
  if (!out.empty() && iv.lo <= out.back().hi) {
    out.back().hi = std::max(out.back().hi, iv.hi);
  } else {
    out.push_back(iv);
  }
}

Segments reverse_and_negate(const Segments& s) {
  Segments out;
  out.reserve(s.size());
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back({-it->hi, -it->lo});
  return out;
}

}  // namespace

// ---- interval algebra ------------------------------------------------------

Segments intersect_segments(const Segments& a, const Segments& b) {
  Segments out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

Segments unite_segments(const Segments& a, const Segments& b) {
  Segments out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].lo <= b[j].lo)) {
      push_merged(out, a[i++]);
    } else {
      push_merged(out, b[j++]);
    }
  }
  return out;
}

Segments complement_segments(const Segments& a, double lo, double hi) {
  Segments out;
  double cur = lo;
  for (const auto& iv : a) {
    if (iv.lo > cur) out.push_back({cur, std::min(iv.lo, hi)});
    cur = std::max(cur, iv.hi);
    if (cur >= hi) break;
  }
  if (cur < hi) out.push_back({cur, hi});
  Segments cleaned;
  for (const auto& iv : out)
    if (iv.hi > iv.lo) cleaned.push_back(iv);
  return cleaned;
}

// ---- factories -------------------------------------------------------------

SetSpec whole_space(int n) { return make_set(n, shape::WholeSpace{}); }
SetSpec empty_set(int n) { return make_set(n, shape::EmptySet{}); }

SetSpec half_space(const Point& origin, const Point& normal) {
  const int n = static_cast<int>(origin.size());
  if (n < 1 || n > 3) throw Error("half_space: dimension must be 1, 2 or 3");
  require_dim(normal, n, "half_space normal");
  const double len = normal.norm();
  if (!(len > 0.0)) throw Error("half_space: normal must be nonzero");
  return make_set(n, shape::HalfSpace{origin, normal / len});
}

SetSpec ball(const Point& center, double radius) {
  const int n = static_cast<int>(center.size());
  if (n < 1 || n > 3) throw Error("ball: dimension must be 1, 2 or 3");
  if (!(radius > 0.0)) throw Error("ball: radius must be positive");
  return make_set(n, shape::Ball{center, radius});
}

SetSpec interval_union(std::vector<Interval> intervals) {
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (!(intervals[k].lo < intervals[k].hi))
      throw Error("interval_union: each interval needs lo < hi");
    if (k > 0 && !(intervals[k - 1].hi < intervals[k].lo))
      throw Error("interval_union: endpoints must be strictly increasing");
    if (k > 0 && std::isinf(intervals[k].lo)) throw Error("interval_union: only the first lo may be -inf");
    if (k + 1 < intervals.size() && std::isinf(intervals[k].hi))
      throw Error("interval_union: only the last hi may be +inf");
  }
  return make_set(1, shape::IntervalUnion{std::move(intervals)});
}

namespace {
void validate_polygon(const std::vector<Eigen::Vector2d>& v) {
  if (v.size() < 3) throw Error("polygon: at least three vertices required");
  double area2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) area2 += cross2(v[i], v[(i + 1) % v.size()]);
  if (area2 == 0.0) throw Error("polygon: degenerate (zero area)");
}
}  // namespace

SetSpec convex_polygon(std::vector<Eigen::Vector2d> vertices) {
  validate_polygon(vertices);
  const std::size_t m = vertices.size();
  int sign = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double c = cross2(vertices[(i + 1) % m] - vertices[i], vertices[(i + 2) % m] - vertices[(i + 1) % m]);
    if (c == 0.0) continue;
    const int s = c > 0 ? 1 : -1;
    if (sign != 0 && s != sign) throw Error("convex_polygon: vertices do not describe a convex polygon");
    sign = s;
  }
  return make_set(2, shape::Polygon{std::move(vertices), true});
}

SetSpec polygon(std::vector<Eigen::Vector2d> vertices) {
  validate_polygon(vertices);
  return make_set(2, shape::Polygon{std::move(vertices), false});
}

SetSpec complement(const SetSpec& inner) { return make_set(inner.dim(), shape::Complement{inner}); }

SetSpec intersection(const SetSpec& a, const SetSpec& b) {
  require_same_dim(a, b, "intersection");
  return make_set(a.dim(), shape::Intersection{a, b});
}

SetSpec set_union(const SetSpec& a, const SetSpec& b) {
  require_same_dim(a, b, "union");
  return make_set(a.dim(), shape::Union{a, b});
}

SetSpec square(const Eigen::Vector2d& lo, double side) {
  if (!(side > 0.0)) throw Error("square: side must be positive");
  const Eigen::Vector2d hi = lo + Eigen::Vector2d(side, side);
  return convex_polygon({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}});
}

SetSpec translated(const SetSpec& set, const Point& shift) {
  require_dim(shift, set.dim(), "translated");
  return make_set(set.dim(), shape::Affine{set, -shift, 1.0});
}

SetSpec dilated(const SetSpec& set, double factor) {
  if (!(factor > 0.0)) throw Error("dilated: factor must be positive");
  return make_set(set.dim(), shape::Affine{set, Point::Zero(set.dim()), 1.0 / factor});
}

SetSpec blow_up(const SetSpec& set, const Point& point, double radius) {
  require_dim(point, set.dim(), "blow_up");
  if (!(radius > 0.0)) throw Error("blow_up: radius must be positive");
  return make_set(set.dim(), shape::Affine{set, point, radius});
}

SetSpec koch_prefractal(int level) {
  if (level < 0 || level > 6) throw Error("koch_prefractal: level must lie in [0, 6]");
  std::vector<Eigen::Vector2d> v = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  const double c = 0.5, s = -std::sqrt(3.0) / 2.0;  // rotation by -60 degrees: outward for CCW order
  for (int l = 0; l < level; ++l) {
    std::vector<Eigen::Vector2d> next;
    next.reserve(4 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Eigen::Vector2d& p = v[i];
      const Eigen::Vector2d d = (v[(i + 1) % v.size()] - p) / 3.0;
      const Eigen::Vector2d a = p + d;
      const Eigen::Vector2d peak = a + Eigen::Vector2d(c * d.x() - s * d.y(), s * d.x() + c * d.y());
      next.push_back(p);
      next.push_back(a);
      next.push_back(peak);
      next.push_back(p + 2.0 * d);
    }
    v = std::move(next);
  }
  return polygon(std::move(v));
}

// ---- queries --------------------------------------------------------------

Location membership(const SetSpec& set, const Point& x) {
  return std::visit(
      overloaded{
          [](const shape::WholeSpace&) { return Location::inside; },
          [](const shape::EmptySet&) { return Location::outside; },
          [&](const shape::HalfSpace& h) {
            const double s = (x - h.origin).dot(h.normal);
            return s > 0 ? Location::inside : (s < 0 ? Location::outside : Location::on_boundary);
          },
          [&](const shape::Ball& b) {
            const double d2 = (x - b.center).squaredNorm();
            const double r2 = b.radius * b.radius;
            return d2 < r2 ? Location::inside : (d2 > r2 ? Location::outside : Location::on_boundary);
          },
          [&](const shape::IntervalUnion& u) {
            const double t = x(0);
            for (const auto& iv : u.intervals) {
              if (t == iv.lo || t == iv.hi) return Location::on_boundary;
              if (t > iv.lo && t < iv.hi) return Location::inside;
            }
            return Location::outside;
          },
          [&](const shape::Polygon& p) { return polygon_membership(p, as2(x)); },
          [&](const shape::Complement& c) {
            const Location l = membership(c.inner, x);
            if (l == Location::inside) return Location::outside;
            if (l == Location::outside) return Location::inside;
            return Location::on_boundary;
          },
          [&](const shape::Intersection& i) {
            const Location a = membership(i.a, x);
            if (a == Location::outside) return Location::outside;
            const Location b = membership(i.b, x);
            if (b == Location::outside) return Location::outside;
            return (a == Location::inside && b == Location::inside) ? Location::inside
                                                                    : Location::on_boundary;
          },
          [&](const shape::Union& u) {
            const Location a = membership(u.a, x);
            if (a == Location::inside) return Location::inside;
            const Location b = membership(u.b, x);
            if (b == Location::inside) return Location::inside;
            return (a == Location::outside && b == Location::outside) ? Location::outside
                                                                      : Location::on_boundary;
          },
          [&](const shape::Affine& a) {
            return membership(a.inner, Point(a.origin + a.scale * x));
          },
      },
      set.node().shape);
}

double indicator(const SetSpec& set, const Point& x) {
  switch (membership(set, x)) {
    case Location::inside: return 1.0;
    case Location::outside: return 0.0;
    default: return 0.5;
  }
}

double boundary_distance(const SetSpec& set, const Point& x) {
  return std::visit(
      overloaded{
          [](const shape::WholeSpace&) { return kInf; },
          [](const shape::EmptySet&) { return kInf; },
          [&](const shape::HalfSpace& h) { return std::abs((x - h.origin).dot(h.normal)); },
          [&](const shape::Ball& b) { return std::abs((x - b.center).norm() - b.radius); },
          [&](const shape::IntervalUnion& u) {
            double d = kInf;
            for (const auto& iv : u.intervals) {
              if (std::isfinite(iv.lo)) d = std::min(d, std::abs(x(0) - iv.lo));
              if (std::isfinite(iv.hi)) d = std::min(d, std::abs(x(0) - iv.hi));
            }
            return d;
          },
          [&](const shape::Polygon& p) {
            const Eigen::Vector2d q = as2(x);
            double d = kInf;
            const std::size_t m = p.vertices.size();
            for (std::size_t i = 0; i < m; ++i)
              d = std::min(d, segment_distance(q, p.vertices[i], p.vertices[(i + 1) % m]));
            return d;
          },
          [&](const shape::Complement& c) { return boundary_distance(c.inner, x); },
          [&](const shape::Intersection& i) {
            return std::min(boundary_distance(i.a, x), boundary_distance(i.b, x));
          },
          [&](const shape::Union& u) {
            return std::min(boundary_distance(u.a, x), boundary_distance(u.b, x));
          },
          [&](const shape::Affine& a) {
            return boundary_distance(a.inner, Point(a.origin + a.scale * x)) / a.scale;
          },
      },
      set.node().shape);
}

Segments ray_segments(const SetSpec& set, const Point& x, const Point& dir) {
  return std::visit(
      overloaded{
          [](const shape::WholeSpace&) { return Segments{{0.0, kInf}}; },
          [](const shape::EmptySet&) { return Segments{}; },
          [&](const shape::HalfSpace& h) {
            const double s0 = (x - h.origin).dot(h.normal);
            const double c = dir.dot(h.normal);
            if (c == 0.0) return s0 > 0 ? Segments{{0.0, kInf}} : Segments{};
            const double t = -s0 / c;
            if (c > 0) return Segments{{std::max(0.0, t), kInf}};
            return t > 0 ? Segments{{0.0, t}} : Segments{};
          },
          [&](const shape::Ball& b) {
            const Point w = x - b.center;
            const double a = dir.squaredNorm();
            const double hb = dir.dot(w);
            const double k = w.squaredNorm() - b.radius * b.radius;
            const double disc = hb * hb - a * k;
            if (disc <= 0.0) return Segments{};
            const double q = -(hb + std::copysign(std::sqrt(disc), hb));
            double t1 = q / a, t2 = q != 0.0 ? k / q : -t1;
            if (t1 > t2) std::swap(t1, t2);
            if (t2 <= 0.0) return Segments{};
            return Segments{{std::max(0.0, t1), t2}};
          },
          [&](const shape::IntervalUnion& u) {
            const double d = dir(0);
            Segments out;
            if (d == 0.0) return out;
            for (const auto& iv : u.intervals) {
              double lo = (iv.lo - x(0)) / d, hi = (iv.hi - x(0)) / d;
              if (lo > hi) std::swap(lo, hi);
              lo = std::max(lo, 0.0);
              if (hi > lo) out.push_back({lo, hi});
            }
            if (d < 0) std::reverse(out.begin(), out.end());
            return out;
          },
          [&](const shape::Polygon& p) { return polygon_ray(p, as2(x), as2(dir)); },
          [&](const shape::Complement& c) {
            return complement_segments(ray_segments(c.inner, x, dir), 0.0, kInf);
          },
          [&](const shape::Intersection& i) {
            return intersect_segments(ray_segments(i.a, x, dir), ray_segments(i.b, x, dir));
          },
          [&](const shape::Union& u) {
            return unite_segments(ray_segments(u.a, x, dir), ray_segments(u.b, x, dir));
          },
          [&](const shape::Affine& a) {
            Segments s = ray_segments(a.inner, Point(a.origin + a.scale * x), dir);
            for (auto& iv : s) {
              iv.lo /= a.scale;
              iv.hi /= a.scale;
            }
            return s;
          },
      },
      set.node().shape);
}

Segments line_segments(const SetSpec& set, const Point& base, const Point& dir) {
  const Segments fwd = ray_segments(set, base, dir);
  const Segments bwd = reverse_and_negate(ray_segments(set, base, Point(-dir)));
  Segments out;
  for (const auto& iv : bwd) push_merged(out, iv);
  for (const auto& iv : fwd) {
    if (!out.empty() && out.back().hi == 0.0 && iv.lo == 0.0) {
      out.back().hi = iv.hi;
    } else {
      push_merged(out, iv);
    }
  }
  return out;
}

namespace {

// A piece of boundary in plane coordinates: a line o + t d with t in [lo, hi], or a circle.
struct Curve {
  bool circle = false;
  Eigen::Vector2d o, d;
  double lo = -kInf, hi = kInf;
  double r = 0.0;
};

void collect_curves(const SetSpec& set, std::vector<Curve>& out) {
  std::visit(overloaded{
                 [](const shape::WholeSpace&) {},
                 [](const shape::EmptySet&) {},
                 [](const shape::IntervalUnion&) {},
                 [&](const shape::HalfSpace& h) {
                   out.push_back({false, as2(h.origin), Eigen::Vector2d(-h.normal(1), h.normal(0))});
                 },
                 [&](const shape::Ball& b) { out.push_back({true, as2(b.center), Eigen::Vector2d::Zero(), 0, 0, b.radius}); },
                 [&](const shape::Polygon& p) {
                   for (std::size_t k = 0; k < p.vertices.size(); ++k) {
                     const Eigen::Vector2d& a = p.vertices[k];
                     out.push_back({false, a, p.vertices[(k + 1) % p.vertices.size()] - a, 0.0, 1.0});
                   }
                 },
                 [&](const shape::Complement& c) { collect_curves(c.inner, out); },
                 [&](const shape::Intersection& i) {
                   collect_curves(i.a, out);
                   collect_curves(i.b, out);
                 },
                 [&](const shape::Union& u) {
                   collect_curves(u.a, out);
                   collect_curves(u.b, out);
                 },
                 [&](const shape::Affine& a) {
                   std::vector<Curve> inner;
                   collect_curves(a.inner, inner);
                   // inner coordinates z map to y = (z - origin) / scale
                   const Eigen::Vector2d o = as2(a.origin);
                   for (Curve c : inner) {
                     c.o = (c.o - o) / a.scale;
                     if (c.circle) {
                       c.r /= a.scale;
                     } else if (std::isfinite(c.hi)) {
                       c.d /= a.scale;
                     }
                     out.push_back(c);
                   }
                 },
             },
             set.node().shape);
}


void line_circle(const Curve& l, const Curve& c, std::vector<Eigen::Vector2d>& out) {
  const Eigen::Vector2d w = l.o - c.o;
  const double a = l.d.squaredNorm(), b = w.dot(l.d), q = w.squaredNorm() - c.r * c.r;
  const double disc = b * b - a * q;
  if (disc < 0.0) return;
  const double s = std::sqrt(disc);
  for (double t : {(-b - s) / a, (-b + s) / a})
    if (t >= l.lo && t <= l.hi) out.push_back(l.o + t * l.d);
}

void crossing_points(const Curve& a, const Curve& b, std::vector<Eigen::Vector2d>& out) {
  if (!a.circle && !b.circle) {
    const double den = cross2(a.d, b.d);
    if (den == 0.0) return;
    const Eigen::Vector2d w = b.o - a.o;
    const double t = cross2(w, b.d) / den, u = cross2(w, a.d) / den;
    if (t >= a.lo && t <= a.hi && u >= b.lo && u <= b.hi) out.push_back(a.o + t * a.d);
  } else if (!a.circle) {
    line_circle(a, b, out);
  } else if (!b.circle) {
    line_circle(b, a, out);
  } else {
    const Eigen::Vector2d w = b.o - a.o;
    const double d = w.norm();
    if (d == 0.0 || d > a.r + b.r || d < std::abs(a.r - b.r)) return;
    const double along = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, a.r * a.r - along * along));
    const Eigen::Vector2d m = a.o + along / d * w, perp(-w.y() / d, w.x() / d);
    out.push_back(m + h * perp);
    out.push_back(m - h * perp);
  }
}

// Points where the boundary of a meets the boundary of b: corners of a cap b and a cup b.
std::vector<Eigen::Vector2d> boundary_crossings(const SetSpec& a, const SetSpec& b) {
  std::vector<Curve> ca, cb;
  collect_curves(a, ca);
  collect_curves(b, cb);
  std::vector<Eigen::Vector2d> out;
  for (const auto& u : ca)
    for (const auto& v : cb) crossing_points(u, v, out);
  return out;
}

void crossing_angles(const SetSpec& a, const SetSpec& b, const Point& x, std::vector<double>& out) {
  for (const auto& p : boundary_crossings(a, b)) {
    const Eigen::Vector2d w = p - as2(x);
    if (w.x() != 0.0 || w.y() != 0.0) out.push_back(std::atan2(w.y(), w.x()));
  }
}

void collect_angles(const SetSpec& set, const Point& x, std::vector<double>& out) {
  std::visit(overloaded{
                 [](const shape::WholeSpace&) {},
                 [](const shape::EmptySet&) {},
                 [](const shape::IntervalUnion&) {},
                 [&](const shape::HalfSpace& h) {
                   const double a = std::atan2(h.normal(0), -h.normal(1));
                   out.push_back(a);
                   out.push_back(a + kPi);
                 },
                 [&](const shape::Ball& b) {
                   const Point w = b.center - x;
                   const double d = w.norm();
                   if (d < b.radius || d == 0.0) return;
                   const double base = std::atan2(w(1), w(0));
                   const double half = std::asin(std::min(1.0, b.radius / d));
                   out.push_back(base - half);
                   out.push_back(base + half);
                 },
                 [&](const shape::Polygon& p) {
                   for (const auto& v : p.vertices) {
                     const Eigen::Vector2d w = v - as2(x);
                     if (w.x() != 0.0 || w.y() != 0.0) out.push_back(std::atan2(w.y(), w.x()));
                   }
                 },
                 [&](const shape::Complement& c) { collect_angles(c.inner, x, out); },
                 [&](const shape::Intersection& i) {
                   collect_angles(i.a, x, out);
                   collect_angles(i.b, x, out);
                   crossing_angles(i.a, i.b, x, out);
                 },
                 [&](const shape::Union& u) {
                   collect_angles(u.a, x, out);
                   collect_angles(u.b, x, out);
                   crossing_angles(u.a, u.b, x, out);
                 },
                 [&](const shape::Affine& a) { collect_angles(a.inner, Point(a.origin + a.scale * x), out); },
             },
             set.node().shape);
}

void collect_offsets(const SetSpec& set, const Point& base, const Point& dir, std::vector<double>& out) {
  const Eigen::Vector2d m(-dir(1), dir(0));
  std::visit(overloaded{
                 [](const shape::WholeSpace&) {},
                 [](const shape::EmptySet&) {},
                 [](const shape::IntervalUnion&) {},
                 [](const shape::HalfSpace&) {},
                 [&](const shape::Ball& b) {
                   const double s = (as2(b.center) - as2(base)).dot(m);
                   out.push_back(s - b.radius);
                   out.push_back(s + b.radius);
                 },
                 [&](const shape::Polygon& p) {
                   for (const auto& v : p.vertices) out.push_back((v - as2(base)).dot(m));
                 },
                 [&](const shape::Complement& c) { collect_offsets(c.inner, base, dir, out); },
                 [&](const shape::Intersection& i) {
                   collect_offsets(i.a, base, dir, out);
                   collect_offsets(i.b, base, dir, out);
                   for (const auto& p : boundary_crossings(i.a, i.b)) out.push_back((p - as2(base)).dot(m));
                 },
                 [&](const shape::Union& u) {
                   collect_offsets(u.a, base, dir, out);
                   collect_offsets(u.b, base, dir, out);
                   for (const auto& p : boundary_crossings(u.a, u.b)) out.push_back((p - as2(base)).dot(m));
                 },
                 [&](const shape::Affine& a) {
                   std::vector<double> inner;
                   collect_offsets(a.inner, Point(a.origin + a.scale * base), dir, inner);
                   for (double s : inner) out.push_back(s / a.scale);
                 },
             },
             set.node().shape);
}

}  // namespace

std::vector<double> critical_angles(const std::vector<SetSpec>& sets, const Point& x) {
  if (sets.empty()) return {};
  SetSpec all = sets.front();
  for (std::size_t k = 1; k < sets.size(); ++k) all = intersection(all, sets[k]);
  return critical_angles(all, x);
}

std::vector<double> critical_angles(const SetSpec& set, const Point& x) {
  if (set.dim() != 2) return {};
  std::vector<double> raw;
  collect_angles(set, x, raw);
  for (double& a : raw) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a = 0.0;
  }
  std::sort(raw.begin(), raw.end());
  std::vector<double> out;
  for (double a : raw)
    if (out.empty() || a - out.back() > 1e-14) out.push_back(a);
  return out;
}

std::vector<double> critical_offsets(const SetSpec& set, const Point& base, const Point& dir) {
  if (set.dim() != 2) return {};
  std::vector<double> out;
  collect_offsets(set, base, dir, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<BoundingBall> bounding_ball(const SetSpec& set) {
  return std::visit(
      overloaded{
          [&](const shape::WholeSpace&) -> std::optional<BoundingBall> { return std::nullopt; },
          [&](const shape::EmptySet&) -> std::optional<BoundingBall> {
            return BoundingBall{Point::Zero(set.dim()), 0.0};
          },
          [](const shape::HalfSpace&) -> std::optional<BoundingBall> { return std::nullopt; },
          [](const shape::Ball& b) -> std::optional<BoundingBall> { return BoundingBall{b.center, b.radius}; },
          [](const shape::IntervalUnion& u) -> std::optional<BoundingBall> {
            if (u.intervals.empty()) return BoundingBall{Point::Zero(1), 0.0};
            const double lo = u.intervals.front().lo, hi = u.intervals.back().hi;
            if (std::isinf(lo) || std::isinf(hi)) return std::nullopt;
            return BoundingBall{make_point({0.5 * (lo + hi)}), 0.5 * (hi - lo)};
          },
          [](const shape::Polygon& p) -> std::optional<BoundingBall> {
            Eigen::Vector2d lo = p.vertices.front(), hi = p.vertices.front();
            for (const auto& v : p.vertices) {
              lo = lo.cwiseMin(v);
              hi = hi.cwiseMax(v);
            }
            const Eigen::Vector2d c = 0.5 * (lo + hi);
            double r = 0.0;
            for (const auto& v : p.vertices) r = std::max(r, (v - c).norm());
            return BoundingBall{make_point({c.x(), c.y()}), r};
          },
          [&](const shape::Complement& c) -> std::optional<BoundingBall> {
            if (std::holds_alternative<shape::WholeSpace>(c.inner.node().shape))
              return BoundingBall{Point::Zero(set.dim()), 0.0};
            return std::nullopt;
          },
          [](const shape::Intersection& i) -> std::optional<BoundingBall> {
            auto a = bounding_ball(i.a), b = bounding_ball(i.b);
            if (a && b) return a->radius <= b->radius ? a : b;
            return a ? a : b;
          },
          [](const shape::Union& u) -> std::optional<BoundingBall> {
            auto a = bounding_ball(u.a), b = bounding_ball(u.b);
            if (!a || !b) return std::nullopt;
            const Point c = 0.5 * (a->center + b->center);
            const double r = std::max((a->center - c).norm() + a->radius, (b->center - c).norm() + b->radius);
            return BoundingBall{c, r};
          },
          [](const shape::Affine& a) -> std::optional<BoundingBall> {
            auto inner = bounding_ball(a.inner);
            if (!inner) return std::nullopt;
            return BoundingBall{Point((inner->center - a.origin) / a.scale), inner->radius / a.scale};
          },
      },
      set.node().shape);
}

DensityReport density_profile(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                              int samples_per_radius, std::uint64_t seed, DensityThresholds thresholds) {
  if (radii.empty()) throw Error("density_profile: empty radii list");
  if (samples_per_radius < 1) throw Error("density_profile: need at least one sample per radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw Error("density_profile: radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw Error("density_profile: radii must be strictly decreasing");
  }
  require_dim(x, set.dim(), "density_profile");

  DensityReport rep;
  rep.point = x;
  rep.radii = radii;
  Rng rng(seed);
  for (double r : radii) {
    double hits = 0.0;
    for (int s = 0; s < samples_per_radius; ++s) hits += indicator(set, random_in_ball(x, r, rng));
    const double p = hits / samples_per_radius;
    rep.fractions.push_back(p);
    rep.standard_errors.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / samples_per_radius));
  }
  const double p = rep.fractions.back();
  const double se = rep.standard_errors.back();
  if (p < thresholds.low) {
    rep.classification = DensityClass::density0;
  } else if (p > thresholds.high) {
    rep.classification = DensityClass::density1;
  } else if (p - 3.0 * se > thresholds.low && p + 3.0 * se < thresholds.high) {
    rep.classification = DensityClass::essential_boundary;
  } else {
    rep.classification = DensityClass::inconclusive;
  }
  return rep;
}

const char* to_string(DensityClass c) {
  switch (c) {
    case DensityClass::density0: return "density0";
    case DensityClass::density1: return "density1";
    case DensityClass::essential_boundary: return "essential_boundary";
    default: return "inconclusive";
  }
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::inside: return "inside";
    case Location::outside: return "outside";
    default: return "on_boundary";
  }
}

}  // namespace fracvc
