#include <fracvc/fields.hpp>

#include <fracvc/gauss_kronrod.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/sphere.hpp>

#include <algorithm>
#include <cmath>

namespace fracvc {

namespace {

// max over s in [0,1] of 6 s (1 - s^2)^2, attained at s^2 = 1/5
constexpr double kBumpSlope = 96.0 / (25.0 * 2.2360679774997896964);
// max over t = s^2 of (1 - t)^2 (1 + 5 t), attained at t = 1/5
constexpr double kModulatedSlope = 1.28;
// max of u (1 - u^2)^3, attained at u^2 = 1/7
const double kModulatedSup = std::sqrt(1.0 / 7.0) * std::pow(6.0 / 7.0, 3);

double cube(double v) { return v * v * v; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(what) + " must be positive and finite");
}

// Crossings of a ray with the sphere |y - c| = r, as parameters t > 0.
std::vector<double> sphere_crossings(const Point& c, double r, const Point& x, const Point& dir) {
  const Segments s = ray_segments(ball(c, r), x, dir);
  std::vector<double> out;
  for (const auto& iv : s) {
    if (iv.lo > 0.0) out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

RayProfile field_ray_profile(const FieldSpec& f, const Point& x, const Point& dir) {
  if (f.custom_ray) return f.custom_ray(x, dir);
  RayProfile p;
  if (std::isfinite(f.support_radius)) {
    const Segments s = ray_segments(ball(f.support_center, f.support_radius), x, dir);
    if (s.empty()) {
      p.tail_start = 0.0;
    } else {
      if (s.front().lo > 0.0) p.breaks.push_back(s.front().lo);
      p.breaks.push_back(s.front().hi);
      p.tail_start = s.front().hi;
    }
    p.tail_value = 0.0;
  } else if (f.family == "constant") {
    p.tail_start = 0.0;
    p.tail_value = f.scalar(x);
  }
  if (f.kinks) {
    for (double t : f.kinks(x, dir))
      if (t > 0.0 && t < p.tail_start) p.breaks.push_back(t);
  }
  sort_unique(p.breaks);
  return p;
}

FieldSpec constant_field(int n, double value) {
  FieldSpec f;
  f.dim = n;
  f.evaluate = [value](const Point&) {
    Value v(1);
    v(0) = value;
    return v;
  };
  f.lipschitz = 0.0;
  f.sup_norm = std::abs(value);
  f.support_center = Point::Zero(n);
  f.family = "constant";
  return f;
}

FieldSpec radial_bump(const Point& center, double width, double amplitude) {
  require_positive(width, "bump width");
  FieldSpec f;
  f.dim = static_cast<int>(center.size());
  f.evaluate = [center, width, amplitude](const Point& y) {
    const double s2 = (y - center).squaredNorm() / (width * width);
    Value v(1);
    v(0) = s2 < 1.0 ? amplitude * cube(1.0 - s2) : 0.0;
    return v;
  };
  f.lipschitz = kBumpSlope * std::abs(amplitude) / width;
  f.sup_norm = std::abs(amplitude);
  f.support_center = center;
  f.support_radius = width;
  f.family = "bump";
  return f;
}

FieldSpec tent(double center, double width, double amplitude) {
  require_positive(width, "tent width");
  FieldSpec f;
  f.dim = 1;
  f.evaluate = [center, width, amplitude](const Point& y) {
    Value v(1);
    v(0) = amplitude * std::max(0.0, 1.0 - std::abs(y(0) - center) / width);
    return v;
  };
  f.lipschitz = std::abs(amplitude) / width;
  f.sup_norm = std::abs(amplitude);
  f.support_center = make_point({center});
  f.support_radius = width;
  f.family = "tent";
  f.kinks = [center](const Point& x, const Point& dir) {
    const double t = (center - x(0)) / dir(0);
    return t > 0.0 ? std::vector<double>{t} : std::vector<double>{};
  };
  return f;
}

FieldSpec modulated_bump(const Point& center, double width, int axis, double amplitude) {
  require_positive(width, "bump width");
  if (axis < 0 || axis >= center.size()) throw Error("modulated bump: axis out of range");
  FieldSpec f;
  f.dim = static_cast<int>(center.size());
  f.evaluate = [center, width, axis, amplitude](const Point& y) {
    const double s2 = (y - center).squaredNorm() / (width * width);
    Value v(1);
    v(0) = s2 < 1.0 ? amplitude * (y(axis) - center(axis)) / width * cube(1.0 - s2) : 0.0;
    return v;
  };
  f.lipschitz = kModulatedSlope * std::abs(amplitude) / width;
  f.sup_norm = kModulatedSup * std::abs(amplitude);
  f.support_center = center;
  f.support_radius = width;
  f.family = "modulated_bump";
  return f;
}

FieldSpec vector_field(const std::vector<FieldSpec>& components) {
  if (components.empty()) throw Error("vector field needs at least one component");
  const int n = components.front().dim;
  if (static_cast<int>(components.size()) != n)
    throw Error("vector field: number of components must equal the dimension");
  FieldSpec f;
  f.dim = n;
  f.components = n;
  f.evaluate = [components](const Point& y) {
    Value v(static_cast<Eigen::Index>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) v(static_cast<Eigen::Index>(k)) = components[k].scalar(y);
    return v;
  };
  double lip2 = 0.0, sup2 = 0.0;
  bool lip_known = true;
  bool compact = true;
  Point lo = Point::Constant(n, kInf), hi = Point::Constant(n, -kInf);
  for (const auto& c : components) {
    if (c.dim != n || !c.is_scalar()) throw Error("vector field: components must be scalar fields of equal dimension");
    lip_known = lip_known && c.has_lipschitz_bound();
    lip2 += c.lipschitz * c.lipschitz;
    sup2 += c.sup_norm * c.sup_norm;
    if (c.family == "constant" && c.sup_norm == 0.0) continue;
    if (!std::isfinite(c.support_radius)) {
      compact = false;
      continue;
    }
    lo = lo.cwiseMin(c.support_center - Point::Constant(n, c.support_radius));
    hi = hi.cwiseMax(c.support_center + Point::Constant(n, c.support_radius));
  }
  f.lipschitz = lip_known ? std::sqrt(lip2) : -1.0;
  f.sup_norm = std::sqrt(sup2);
  if (compact && std::isfinite(lo(0))) {
    f.support_center = 0.5 * (lo + hi);
    f.support_radius = 0.5 * (hi - lo).norm();
  } else if (compact) {
    // every component is identically zero
    f.support_center = Point::Zero(n);
    f.support_radius = 0.0;
  } else {
    f.support_center = Point::Zero(n);
  }
  f.kinks = [components](const Point& x, const Point& dir) {
    std::vector<double> out;
    for (const auto& c : components) {
      if (std::isfinite(c.support_radius) && c.support_radius > 0.0) {
        for (double t : sphere_crossings(c.support_center, c.support_radius, x, dir)) out.push_back(t);
      }
      if (c.kinks)
        for (double t : c.kinks(x, dir)) out.push_back(t);
    }
    return out;
  };
  f.family = "vector";
  return f;
}

FieldSpec along_axis(const FieldSpec& scalar, int axis) {
  if (!scalar.is_scalar()) throw Error("along_axis expects a scalar field");
  if (axis < 0 || axis >= scalar.dim) throw Error("along_axis: axis out of range");
  std::vector<FieldSpec> comps;
  for (int k = 0; k < scalar.dim; ++k) comps.push_back(k == axis ? scalar : constant_field(scalar.dim, 0.0));
  return vector_field(comps);
}

double mollifier_radial_primitive(int n, double s) {
  s = std::clamp(s, 0.0, 1.0);
  const double s2 = s * s;
  switch (n) {
    case 1:
      return s * (1.0 - s2 + 0.6 * s2 * s2 - s2 * s2 * s2 / 7.0);
    case 2:
      return s2 * (0.5 - 0.75 * s2 + 0.5 * s2 * s2 - s2 * s2 * s2 / 8.0);
    case 3:
      return s * s2 * (1.0 / 3.0 - 0.6 * s2 + 3.0 / 7.0 * s2 * s2 - s2 * s2 * s2 / 9.0);
    default:
      throw Error("mollifier: n out of range");
  }
}

double mollifier_constant(int n) { return 1.0 / (sphere_surface(n) * mollifier_radial_primitive(n, 1.0)); }

double mollifier_density(const Point& z, double eps) {
  const int n = static_cast<int>(z.size());
  const double s2 = z.squaredNorm() / (eps * eps);
  if (s2 >= 1.0) return 0.0;
  return mollifier_constant(n) * cube(1.0 - s2) / std::pow(eps, n);
}

namespace {

// Mass of rho_eps in {z . nu > -s}, i.e. the mollified half-space at signed distance s.
double mollified_halfspace_profile(int n, double s, double eps) {
  const double tau = s / eps;
  if (tau >= 1.0) return 1.0;
  if (tau <= -1.0) return 0.0;
  const double cn = mollifier_constant(n);
  // marginal density of the first coordinate under eta
  auto marginal = [n, cn](double u) -> double {
    const double a2 = std::max(0.0, 1.0 - u * u);
    if (n == 1) return cn * cube(a2);
    if (n == 2) return cn * std::pow(a2, 3.5) * 32.0 / 35.0;
    return cn * 2.0 * kPi * a2 * a2 * a2 * a2 / 8.0;
  };
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-13;
  if (tau <= 0.0) {
    auto g = [&](double u) -> Value { return Value::Constant(1, marginal(u)); };
    return integrate(g, -1.0, tau, 1, o).value(0);
  }
  auto g = [&](double u) -> Value { return Value::Constant(1, marginal(u)); };
  return 1.0 - integrate(g, tau, 1.0, 1, o).value(0);
}

// Fraction of the sphere |z| = r around y lying inside the ball B_R(c).
double sphere_fraction_in_ball(int n, double d, double r, double radius) {
  if (r == 0.0) return d < radius ? 1.0 : 0.0;
  if (n == 1) {
    return 0.5 * ((std::abs(d + r) < radius ? 1.0 : 0.0) + (std::abs(d - r) < radius ? 1.0 : 0.0));
  }
  if (d == 0.0) return r < radius ? 1.0 : 0.0;
  const double k = (radius * radius - d * d - r * r) / (2.0 * d * r);
  if (k >= 1.0) return 1.0;
  if (k <= -1.0) return 0.0;
  if (n == 2) return 1.0 - std::acos(k) / kPi;
  return 0.5 * (k + 1.0);
}

double mollified_ball_value(const shape::Ball& b, double eps, const Point& y) {
  const int n = static_cast<int>(y.size());
  const double d = (y - b.center).norm();
  if (d + eps <= b.radius) return 1.0;
  if (d >= b.radius + eps) return 0.0;
  const double cn = mollifier_constant(n) * sphere_surface(n);
  std::vector<double> br{0.0};
  for (double r : {std::abs(b.radius - d) / eps, (b.radius + d) / eps})
    if (r > 0.0 && r < 1.0) br.push_back(r);
  br.push_back(1.0);
  sort_unique(br);
  auto g = [&](double s) -> Value {
    return Value::Constant(1, cn * cube(1.0 - s * s) * std::pow(s, n - 1) * sphere_fraction_in_ball(n, d, eps * s, b.radius));
  };
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-13;
  return integrate(g, std::span<const double>(br), 1, o).value(0);
}

}  // namespace

double mollify_indicator_at(const SetSpec& set, double eps, const Point& x) {
  require_positive(eps, "mollifier radius");
  const int n = set.dim();
  if (const auto* h = std::get_if<shape::HalfSpace>(&set.node().shape))
    return mollified_halfspace_profile(n, (x - h->origin).dot(h->normal), eps);
  if (const auto* b = std::get_if<shape::Ball>(&set.node().shape)) return mollified_ball_value(*b, eps, x);
  if (std::holds_alternative<shape::WholeSpace>(set.node().shape)) return 1.0;
  if (std::holds_alternative<shape::EmptySet>(set.node().shape)) return 0.0;
  if (boundary_distance(set, x) >= eps) return indicator(set, x) >= 0.5 ? 1.0 : 0.0;

  const double cn = mollifier_constant(n);
  auto radial = [&](const Point& dir) -> Value {
    Value v = Value::Zero(2);
    for (const auto& iv : ray_segments(set, x, dir)) {
      if (iv.lo >= eps) break;
      v(0) += mollifier_radial_primitive(n, iv.hi / eps) - mollifier_radial_primitive(n, iv.lo / eps);
    }
    v(0) *= cn;
    return v;
  };
  QuadOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-10;
  std::vector<double> angles = critical_angles(set, x);
  return sphere_integrate(n, radial, 1, angles, 2.0, o).value(0);
}

FieldSpec mollified_indicator(const SetSpec& set, double eps) {
  require_positive(eps, "mollifier radius");
  const int n = set.dim();
  FieldSpec f;
  f.dim = n;
  f.evaluate = [set, eps](const Point& y) { return Value::Constant(1, mollify_indicator_at(set, eps, y)); };
  // |grad (rho_eps * chi)| <= ||grad rho_eps||_1 = |S^{n-1}| c_n int_0^1 6 s^n (1-s^2)^2 ds / eps
  const double slope = sphere_surface(n) * mollifier_constant(n) * 6.0 *
                       (1.0 / (n + 1) - 2.0 / (n + 3) + 1.0 / (n + 5));
  f.lipschitz = slope / eps;
  f.sup_norm = 1.0;
  f.family = "mollified";
  if (auto bb = bounding_ball(set)) {
    f.support_center = bb->center;
    f.support_radius = bb->radius + eps;
  } else {
    f.support_center = Point::Zero(n);
  }
  if (const auto* h = std::get_if<shape::HalfSpace>(&set.node().shape)) {
    const shape::HalfSpace hs = *h;
    f.custom_ray = [hs, eps](const Point& x, const Point& dir) {
      RayProfile p;
      const double s0 = (x - hs.origin).dot(hs.normal);
      const double c = dir.dot(hs.normal);
      if (c == 0.0) {
        p.tail_start = 0.0;
        p.tail_value = mollified_halfspace_profile(static_cast<int>(x.size()), s0, eps);
        return p;
      }
      for (double target : {-eps, eps}) {
        const double t = (target - s0) / c;
        if (t > 0.0) p.breaks.push_back(t);
      }
      sort_unique(p.breaks);
      p.tail_start = p.breaks.empty() ? 0.0 : p.breaks.back();
      p.tail_value = c > 0.0 ? 1.0 : 0.0;
      return p;
    };
  }
  return f;
}

RayProfile set_ray_profile(const SetSpec& set, const Point& x, const Point& dir) {
  const Segments s = ray_segments(set, x, dir);
  RayProfile p;
  for (const auto& iv : s) {
    if (iv.lo > 0.0) p.breaks.push_back(iv.lo);
    if (std::isfinite(iv.hi)) p.breaks.push_back(iv.hi);
  }
  p.tail_start = p.breaks.empty() ? 0.0 : p.breaks.back();
  p.tail_value = (!s.empty() && !std::isfinite(s.back().hi)) ? 1.0 : 0.0;
  return p;
}

RayProfile merge_profiles(const RayProfile& a, const RayProfile& b) {
  RayProfile p;
  p.breaks = a.breaks;
  p.breaks.insert(p.breaks.end(), b.breaks.begin(), b.breaks.end());
  sort_unique(p.breaks);
  p.tail_start = std::max(a.tail_start, b.tail_start);
  p.tail_value = a.tail_value * b.tail_value;
  return p;
}

Operand::Operand(const SetSpec& set) : dim_(set.dim()), factors_{set} {}

Operand::Operand(const FieldSpec& field) : dim_(field.dim), factors_{field} {
  if (!field.is_scalar()) throw Error("operand factors must be scalar fields or sets");
}

Operand operator*(const Operand& a, const Operand& b) {
  if (a.dim_ != b.dim_) throw Error("operand product: dimension mismatch");
  Operand out = a;
  out.factors_.insert(out.factors_.end(), b.factors_.begin(), b.factors_.end());
  return out;
}

double Operand::value(const Point& y) const {
  double v = 1.0;
  for (const auto& f : factors_) {
    if (const auto* s = std::get_if<SetSpec>(&f)) {
      const Location loc = membership(*s, y);
      if (loc == Location::outside) return 0.0;
      if (loc == Location::on_boundary) v *= 0.5;
    } else {
      v *= std::get<FieldSpec>(f).scalar(y);
    }
  }
  return v;
}

bool Operand::is_indicator() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return std::holds_alternative<SetSpec>(f); });
}

SetSpec Operand::as_set() const {
  if (!is_indicator()) throw Error("operand is not an indicator");
  SetSpec s = std::get<SetSpec>(factors_.front());
  for (std::size_t k = 1; k < factors_.size(); ++k) s = intersection(s, std::get<SetSpec>(factors_[k]));
  return s;
}

RayProfile Operand::ray_profile(const Point& x, const Point& dir) const {
  RayProfile p;
  bool first = true;
  for (const auto& f : factors_) {
    RayProfile q = std::holds_alternative<SetSpec>(f) ? set_ray_profile(std::get<SetSpec>(f), x, dir)
                                                      : field_ray_profile(std::get<FieldSpec>(f), x, dir);
    p = first ? q : merge_profiles(p, q);
    first = false;
  }
  return p;
}

double Operand::set_boundary_distance(const Point& x) const {
  double d = kInf;
  for (const auto& f : factors_)
    if (const auto* s = std::get_if<SetSpec>(&f)) d = std::min(d, boundary_distance(*s, x));
  return d;
}

bool Operand::missing_lipschitz() const {
  return std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) {
    const auto* g = std::get_if<FieldSpec>(&f);
    return g && !g->has_lipschitz_bound();
  });
}

double Operand::sup_norm() const {
  double s = 1.0;
  for (const auto& f : factors_)
    if (const auto* g = std::get_if<FieldSpec>(&f)) s *= g->sup_norm;
  return s;
}

std::vector<SetSpec> Operand::boundary_sets() const {
  std::vector<SetSpec> out;
  for (const auto& f : factors_) {
    if (const auto* s = std::get_if<SetSpec>(&f)) {
      out.push_back(*s);
    } else {
      const auto& g = std::get<FieldSpec>(f);
      if (std::isfinite(g.support_radius) && g.support_radius > 0.0 && dim_ == 2)
        out.push_back(ball(g.support_center, g.support_radius));
    }
  }
  return out;
}

std::vector<double> Operand::critical_angles(const Point& x) const {
  return fracvc::critical_angles(boundary_sets(), x);
}

}  // namespace fracvc
