#ifndef FRACVC_FIELDS_HPP
#define FRACVC_FIELDS_HPP

#include <fracvc/geometry.hpp>
#include <fracvc/types.hpp>

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace fracvc {

/// Piecewise description of r -> h(x + r*dir) along a ray: h is smooth between
/// consecutive breaks and constant (equal to tail_value) for r >= tail_start.
struct RayProfile {
  std::vector<double> breaks;
  double tail_start = kInf;
  double tail_value = 0.0;
};

/// A scalar or vector test field with compact support (or a documented far
/// behaviour) and a known Lipschitz bound.
struct FieldSpec {
  int dim = 0;
  /// 1 for scalar fields, dim for vector fields.
  int components = 1;
  std::function<Value(const Point&)> evaluate;
  /// Bound on |f(x) - f(y)| / |x - y| (Euclidean norm over components).
  double lipschitz = -1.0;
  /// Bound on |f| (Euclidean norm over components).
  double sup_norm = 0.0;
  /// f vanishes outside B(support_center, support_radius); +inf when not compact.
  Point support_center;
  double support_radius = kInf;
  std::string family;
  /// Optional extra breakpoints (kinks) along a ray.
  std::function<std::vector<double>(const Point&, const Point&)> kinks;
  /// For fields without compact support: piecewise information along a ray.
  std::function<RayProfile(const Point&, const Point&)> custom_ray;

  bool is_scalar() const { return components == 1; }
  double scalar(const Point& x) const { return evaluate(x)(0); }
  bool has_lipschitz_bound() const { return lipschitz >= 0.0; }
};

/// Ray profile of a field: breaks at support entry/exit and kinks; tail value is f's
/// far value component `component` (0 outside a compact support).
RayProfile field_ray_profile(const FieldSpec& f, const Point& x, const Point& dir);

FieldSpec constant_field(int n, double value);
/// amplitude * (1 - |y-c|^2/w^2)^3 on B_w(c): C^2, compactly supported.
FieldSpec radial_bump(const Point& center, double width, double amplitude = 1.0);
/// n = 1: amplitude * max(0, 1 - |t-c|/w).
FieldSpec tent(double center, double width, double amplitude = 1.0);
/// amplitude * ((y_axis - c_axis)/w) * (1 - |y-c|^2/w^2)^3.
FieldSpec modulated_bump(const Point& center, double width, int axis, double amplitude = 1.0);
/// Vector field with the given scalar components (all in the same dimension).
FieldSpec vector_field(const std::vector<FieldSpec>& components);
/// scalar * e_axis.
FieldSpec along_axis(const FieldSpec& scalar, int axis);
/// rho_eps * chi_E for the radial mollifier of this library.
FieldSpec mollified_indicator(const SetSpec& set, double eps);

/// A product of scalar factors, each a set indicator or a scalar field. This is
/// the argument type of the fractional operators: chi_E, f, chi_E * f, chi_E chi_F, ...
class Operand {
 public:
  using Factor = std::variant<SetSpec, FieldSpec>;

  Operand(const SetSpec& set);     // NOLINT: implicit on purpose
  Operand(const FieldSpec& field);  // NOLINT

  int dim() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  double value(const Point& y) const;
  /// All factors are indicators: the operand is chi of the intersection.
  bool is_indicator() const;
  SetSpec as_set() const;
  RayProfile ray_profile(const Point& x, const Point& dir) const;
  /// Smallest boundary distance among the set factors (inf when there are none).
  double set_boundary_distance(const Point& x) const;
  /// Some factor is not Lipschitz-bounded and not a set.
  bool missing_lipschitz() const;
  double sup_norm() const;
  /// Sets whose boundaries bound the pieces of the operand: set factors and field supports.
  std::vector<SetSpec> boundary_sets() const;
  std::vector<double> critical_angles(const Point& x) const;

  friend Operand operator*(const Operand& a, const Operand& b);

 private:
  int dim_;
  std::vector<Factor> factors_;
};

/// Profile of a set indicator along a ray (breaks = crossings).
RayProfile set_ray_profile(const SetSpec& set, const Point& x, const Point& dir);

/// Merge two profiles of a product: union of breaks, later tail start.
RayProfile merge_profiles(const RayProfile& a, const RayProfile& b);

// Radial mollifier eta(s) = c_n (1 - s^2)^3 on [0,1], rho_eps(z) = eps^{-n} eta(|z|/eps).

/// c_n, fixed so that rho has unit mass.
double mollifier_constant(int n);
/// Integral of (1 - u^2)^3 u^{n-1} over [0, s], s in [0,1].
double mollifier_radial_primitive(int n, double s);
/// rho_eps(z).
double mollifier_density(const Point& z, double eps);
/// (rho_eps * chi_E)(x) by direct integration over B_eps(x).
double mollify_indicator_at(const SetSpec& set, double eps, const Point& x);

}  // namespace fracvc

#endif  // FRACVC_FIELDS_HPP
