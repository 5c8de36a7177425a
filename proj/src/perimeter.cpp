#include <fracvc/fracops.hpp>

#include <fracvc/gauss_kronrod.hpp>
#include <fracvc/random.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace fracvc {

namespace {

// Pair integral of |s - t|^{-1-alpha} over I x J for disjoint open intervals.
double pair_integral(Interval i, Interval j, double alpha) {
  if (i.lo > j.lo) std::swap(i, j);
  if (!std::isfinite(i.lo) && !std::isfinite(j.hi)) throw Error("perimeter may diverge");
  auto phi = [alpha](double u) { return std::pow(u, 1.0 - alpha) / (alpha * (1.0 - alpha)); };
  const double a = i.lo, b = i.hi, c = j.lo, d = j.hi;
  double v = -phi(c - b);
  if (std::isfinite(a)) v += phi(c - a);
  if (std::isfinite(d)) v += phi(d - b);
  if (std::isfinite(a) && std::isfinite(d)) v -= phi(d - a);
  return v;
}

double pair_sum(const Segments& u, const Segments& v, double alpha) {
  double s = 0.0;
  for (const auto& i : u)
    for (const auto& j : v) s += pair_integral(i, j, alpha);
  return s;
}

enum class Kind { whole, restricted, local };

struct LineProblem {
  SetSpec set;
  std::optional<SetSpec> region;
  Kind kind;
  double alpha;
  // lines are parametrized by a direction and an offset around this ball
  Point center;
  double radius;

  double line_value(const Point& base, const Point& dir) const {
    const Segments e = line_segments(set, base, dir);
    const Segments ec = complement_segments(e, -kInf, kInf);
    switch (kind) {
      case Kind::whole:
        return 2.0 * pair_sum(e, ec, alpha);
      case Kind::restricted: {
        const Segments w = line_segments(*region, base, dir);
        const Segments wc = complement_segments(w, -kInf, kInf);
        return 2.0 * (pair_sum(intersect_segments(e, w), ec, alpha) +
                      pair_sum(intersect_segments(e, wc), intersect_segments(ec, w), alpha));
      }
      case Kind::local: {
        const Segments w = line_segments(*region, base, dir);
        return pair_sum(intersect_segments(e, w), intersect_segments(ec, w), alpha);
      }
    }
    return 0.0;
  }
};

Point orthonormal_offset(const Point& dir, const Point& z) {
  // z holds n-1 coordinates in a basis of dir^perp
  const int n = static_cast<int>(dir.size());
  if (n == 1) return Point::Zero(1);
  if (n == 2) return z(0) * make_point({-dir(1), dir(0)});
  Point a = std::abs(dir(0)) < 0.9 ? unit_vector(3, 0) : unit_vector(3, 1);
  Point u = a - a.dot(dir) * dir;
  u.normalize();
  const Eigen::Vector3d w = Eigen::Vector3d(dir(0), dir(1), dir(2)).cross(Eigen::Vector3d(u(0), u(1), u(2)));
  return z(0) * u + z(1) * make_point({w(0), w(1), w(2)});
}

LineProblem make_problem(const SetSpec& set, const std::optional<SetSpec>& region, Kind kind,
                         const AlphaContext& ctx) {
  if (set.dim() != ctx.n()) throw Error("perimeter: set dimension does not match the context");
  if (region && region->dim() != ctx.n()) throw Error("perimeter: region dimension does not match the context");
  std::optional<BoundingBall> bb;
  if (kind == Kind::whole) {
    bb = bounding_ball(set);
    if (!bb) {
      if (std::holds_alternative<shape::EmptySet>(set.node().shape) ||
          std::holds_alternative<shape::WholeSpace>(set.node().shape)) {
        bb = BoundingBall{Point::Zero(ctx.n()), 0.0};
      } else {
        throw Error("perimeter may diverge");
      }
    }
  } else {
    bb = bounding_ball(*region);
    if (!bb) throw Error(kind == Kind::local ? "local perimeter needs a bounded region" : "perimeter may diverge");
  }
  return LineProblem{set, region, kind, ctx.alpha(), bb->center, bb->radius};
}

MeasureEstimate monte_carlo(const LineProblem& p, int n, const QuadratureConfig& cfg) {
  validate(cfg);
  MeasureEstimate m;
  m.value = Value::Zero(1);
  if (p.radius == 0.0) {
    m.evaluations = 1;
    return m;
  }
  Rng rng(cfg.seed);
  // measure of the unoriented directions times the (n-1)-ball of offsets
  const double offsets = n == 1 ? 1.0 : (n == 2 ? 2.0 * p.radius : kPi * p.radius * p.radius);
  const double weight = 0.5 * sphere_surface(n) * offsets;
  double sum = 0.0, sum2 = 0.0;
  const long count = cfg.mc_samples;
  for (long k = 0; k < count; ++k) {
    const Point dir = random_direction(n, rng);
    Point z = Point::Zero(std::max(1, n - 1));
    if (n == 2) {
      z(0) = p.radius * (2.0 * uniform01(rng) - 1.0);
    } else if (n == 3) {
      const double rr = p.radius * std::sqrt(uniform01(rng));
      const double t = 2.0 * kPi * uniform01(rng);
      z(0) = rr * std::cos(t);
      z(1) = rr * std::sin(t);
    }
    const Point base = p.center + orthonormal_offset(dir, z);
    const double v = weight * p.line_value(base, dir);
    sum += v;
    sum2 += v * v;
  }
  const double c = static_cast<double>(count);
  const double mean = sum / c;
  m.value(0) = mean;
  m.abs_error_estimate = std::sqrt(std::max(0.0, sum2 / c - mean * mean) / (c - 1.0));
  m.evaluations = count;
  return m;
}

MeasureEstimate deterministic(const LineProblem& p, int n, const QuadratureConfig& cfg) {
  validate(cfg);
  MeasureEstimate m;
  m.value = Value::Zero(1);
  if (n == 1) {
    m.value(0) = p.line_value(Point::Zero(1), make_point({1.0}));
    m.evaluations = 1;
    return m;
  }
  if (n != 2) throw Error("deterministic perimeter is available for n <= 2 only");
  if (p.radius == 0.0) {
    m.evaluations = 1;
    return m;
  }
  long evals = 0;
  bool ok = true;
  QuadOptions inner;
  inner.abs_tol = 1e-300;
  inner.rel_tol = 0.2 * cfg.tol;
  inner.max_intervals = cfg.max_intervals;
  inner.controlled_components = 1;
  auto over_offsets = [&](double theta) -> Value {
    const Point dir = make_point({std::cos(theta), std::sin(theta)});
    const Point normal = make_point({-dir(1), dir(0)});
    std::vector<double> br{-p.radius};
    auto add_offsets = [&](const SetSpec& s) {
      for (double o : critical_offsets(s, p.center, dir))
        if (o > -p.radius && o < p.radius) br.push_back(o);
    };
    add_offsets(p.set);
    if (p.region) add_offsets(*p.region);
    br.push_back(p.radius);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<MappedPiece> pieces;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) append_clustered(pieces, br[k], br[k + 1], 2.0);
    auto g = [&](double z) -> Value { return Value::Constant(1, p.line_value(Point(p.center + z * normal), dir)); };
    const QuadResult q = integrate_pieces(g, pieces, 1, inner);
    evals += q.evaluations;
    ok = ok && q.converged;
    Value v(2);
    v << q.value(0), q.error;
    return v;
  };
  QuadOptions outer;
  outer.abs_tol = 1e-300;
  outer.rel_tol = cfg.tol;
  outer.max_intervals = cfg.max_intervals;
  outer.controlled_components = 1;
  const std::array<double, 5> br{0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi};
  const QuadResult q = integrate(over_offsets, std::span<const double>(br), 2, outer);
  m.value(0) = q.value(0);
  m.abs_error_estimate = q.error + std::abs(q.value(1));
  m.evaluations = std::max(1L, evals);
  m.converged = ok && q.converged;
  return m;
}

MeasureEstimate dispatch(const LineProblem& p, int n, const QuadratureConfig& cfg, PerimeterMethod method) {
  return method == PerimeterMethod::monte_carlo ? monte_carlo(p, n, cfg) : deterministic(p, n, cfg);
}

}  // namespace

MeasureEstimate frac_perimeter(const SetSpec& set, const std::optional<SetSpec>& omega, const AlphaContext& ctx,
                               const QuadratureConfig& cfg, PerimeterMethod method) {
  const bool whole = !omega || std::holds_alternative<shape::WholeSpace>(omega->node().shape);
  const LineProblem p =
      make_problem(set, whole ? std::nullopt : omega, whole ? Kind::whole : Kind::restricted, ctx);
  return dispatch(p, ctx.n(), cfg, method);
}

MeasureEstimate frac_perimeter_local(const SetSpec& set, const SetSpec& region, const AlphaContext& ctx,
                                     const QuadratureConfig& cfg, PerimeterMethod method) {
  const LineProblem p = make_problem(set, region, Kind::local, ctx);
  return dispatch(p, ctx.n(), cfg, method);
}

}  // namespace fracvc
