#include <fracvc/analysis.hpp>

#include <fracvc/oracles.hpp>
#include <fracvc/sphere.hpp>

#include <algorithm>
#include <cmath>

namespace fracvc {

namespace {

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.tol = cfg.tol * inner_tol_factor;
  c.method = Method::ray_sweep;
  return c;
}

VolumeOptions volume_options(const Point& center, std::vector<SetSpec> guides, double blowup,
                             const QuadratureConfig& cfg) {
  VolumeOptions o;
  o.center = center;
  o.guides = std::move(guides);
  o.blowup = blowup;
  o.tol = cfg.tol;
  o.max_intervals_angular = cfg.max_intervals;
  return o;
}

bool boundaryless(const SetSpec& set) {
  return std::holds_alternative<shape::WholeSpace>(set.node().shape) ||
         std::holds_alternative<shape::EmptySet>(set.node().shape);
}

MeasureEstimate head(const MeasureEstimate& m, int from, int count) {
  MeasureEstimate out = m;
  out.value = m.value.segment(from, count);
  return out;
}

Point center_of(const SetSpec& set) {
  if (auto bb = bounding_ball(set)) return bb->center;
  return Point::Zero(set.dim());
}

double scale_of(const SetSpec& set) {
  if (auto bb = bounding_ball(set)) return std::max(bb->radius, 1e-3);
  return 1.0;
}

// Density of D^alpha chi_E as a volume integrand: vector, then its norm, then the error.
VolumeIntegrand gradient_density(const SetSpec& set, const AlphaContext& ctx, const QuadratureConfig& inner,
                                 bool with_norm, double sign = 1.0) {
  const int n = ctx.n();
  return [=](const Point& y) {
    const MeasureEstimate m = singular_integral_set(set, y, ctx, inner, BoundaryPolicy::lenient);
    const int dim = n + (with_norm ? 1 : 0);
    Value v(dim + 1);
    v.head(n) = sign * ctx.mu() * m.value;
    if (with_norm) v(n) = ctx.mu() * m.value.norm();
    v(dim) = ctx.mu() * m.abs_error_estimate;
    return v;
  };
}

}  // namespace

Variation variation_on_ball(const SetSpec& set, const Point& center, double radius, const AlphaContext& ctx,
                            const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (set.dim() != n || center.size() != n) throw Error("variation_on_ball: dimension mismatch");
  if (boundaryless(set)) {
    Variation v;
    v.vector.value = Value::Zero(n);
    v.total.value = Value::Zero(1);
    v.vector.evaluations = v.total.evaluations = 1;
    return v;
  }
  const QuadratureConfig inner = inner_config(cfg);
  VolumeOptions o = volume_options(center, {set}, ctx.alpha(), cfg);
  o.scale = radius;
  const MeasureEstimate m = volume_integral(gradient_density(set, ctx, inner, true), n + 1, ball(center, radius), o);
  return Variation{head(m, 0, n), head(m, n, 1)};
}

NormalReport frac_normal(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                         const AlphaContext& ctx, const QuadratureConfig& cfg, double threshold) {
  if (radii.empty()) throw Error("frac_normal: empty radius ladder");
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] < radii[k - 1])))
      throw Error("frac_normal: radii must be positive and strictly decreasing");
  NormalReport rep;
  rep.point = x;
  rep.radii = radii;
  rep.threshold = threshold;
  const int n = ctx.n();
  for (double r : radii) {
    const Variation v = variation_on_ball(blow_up(set, x, r), Point::Zero(n), 1.0, ctx, cfg);
    const double tot = v.total.scalar();
    Point ratio = Point::Zero(n);
    double bar = kInf;
    if (tot > 0.0) {
      ratio = v.vector.value / tot;
      bar = (v.vector.abs_error_estimate + ratio.norm() * v.total.abs_error_estimate) / tot;
    }
    rep.ratios.push_back(ratio);
    rep.magnitudes.push_back(ratio.norm());
    rep.error_bars.push_back(bar);
    rep.flagged.push_back(bar > 0.1 * ratio.norm());
    rep.evaluations += v.vector.evaluations;
  }
  if (radii.size() >= 2) {
    const std::size_t k = radii.size() - 1;
    rep.plateau = std::abs(rep.magnitudes[k] - rep.magnitudes[k - 1]) < threshold;
    rep.converged = (rep.ratios[k] - rep.ratios[k - 1]).norm() < threshold && rep.magnitudes[k] > 0.99;
  }
  if (rep.converged) rep.limit_estimate = rep.ratios.back();
  return rep;
}

NormalReport corner_probe(const SetSpec& set, const Point& vertex, const std::vector<double>& radii,
                          const AlphaContext& ctx, const QuadratureConfig& cfg, double threshold) {
  if (set.dim() != 2) throw Error("corner_probe: polygons live in the plane");
  return frac_normal(set, vertex, radii, ctx, cfg, threshold);
}

BlowupReport blowup_experiment(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                               double ball_radius, const AlphaContext& ctx, const QuadratureConfig& cfg) {
  if (radii.empty()) throw Error("blowup_experiment: empty radius ladder");
  if (!(ball_radius > 0.0)) throw Error("blowup_experiment: ball radius must be positive");
  BlowupReport rep;
  rep.point = x;
  rep.ball_radius = ball_radius;
  rep.radii = radii;
  rep.target_total = halfspace_variation_on_ball(ctx, ball_radius);
  const int n = ctx.n();
  for (double r : radii) {
    if (!(r > 0.0)) throw Error("blowup_experiment: radii must be positive");
    const Variation v = variation_on_ball(blow_up(set, x, r), Point::Zero(n), ball_radius, ctx, cfg);
    const Point vec = v.vector.value;
    const double tot = v.total.scalar();
    const Point normal = vec.norm() > 0.0 ? Point(vec / vec.norm()) : Point::Zero(n);
    rep.vector_values.push_back(vec);
    rep.total_values.push_back(tot);
    rep.error_bars.push_back(v.total.abs_error_estimate + v.vector.abs_error_estimate);
    rep.normals.push_back(normal);
    rep.deviations.push_back(std::abs(tot - rep.target_total) / rep.target_total);
    rep.vector_deviations.push_back((vec - rep.target_total * normal).norm() / rep.target_total);
    rep.evaluations += v.vector.evaluations;
  }
  rep.strictly_decreasing = true;
  for (std::size_t k = 1; k < rep.deviations.size(); ++k)
    rep.strictly_decreasing = rep.strictly_decreasing && rep.deviations[k] < rep.deviations[k - 1];
  const std::size_t m = rep.deviations.size();
  rep.converged = m >= 3 && rep.deviations[m - 1] <= rep.deviations[m - 2] && rep.deviations[m - 2] <= rep.deviations[m - 3];
  return rep;
}

IbpReport verify_ibp(const FieldSpec& f, const FieldSpec& phi, const AlphaContext& ctx, const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (!f.is_scalar() || phi.components != n) throw Error("verify_ibp: expects a scalar f and a vector phi");
  if (!std::isfinite(f.support_radius) || !std::isfinite(phi.support_radius))
    throw Error("verify_ibp: both fields need compact support");
  const QuadratureConfig inner = inner_config(cfg);
  IbpReport rep;
  MeasureEstimate t1, t2;
  if (f.support_radius > 0.0) {
    auto g1 = [&](const Point& y) {
      Value v = Value::Zero(3);
      const double fy = f.scalar(y);
      const MeasureEstimate d = frac_divergence(phi, y, ctx, inner);
      v(0) = fy * d.scalar();
      v(1) = std::abs(d.scalar());
      v(2) = std::abs(fy) * d.abs_error_estimate;
      return v;
    };
    VolumeOptions o = volume_options(f.support_center, {}, 0.0, cfg);
    o.scale = f.support_radius;
    t1 = volume_integral(g1, 2, ball(f.support_center, f.support_radius), o);
  } else {
    t1.value = Value::Zero(2);
  }
  if (phi.support_radius > 0.0) {
    auto g2 = [&](const Point& y) {
      Value v = Value::Zero(3);
      const Value py = phi.evaluate(y);
      const MeasureEstimate d = frac_gradient(f, y, ctx, inner);
      v(0) = py.dot(d.value);
      v(1) = d.value.norm();
      v(2) = py.norm() * d.abs_error_estimate;
      return v;
    };
    VolumeOptions o = volume_options(phi.support_center, {}, 0.0, cfg);
    o.scale = phi.support_radius;
    t2 = volume_integral(g2, 2, ball(phi.support_center, phi.support_radius), o);
  } else {
    t2.value = Value::Zero(2);
  }
  rep.f_div_phi = t1.value(0);
  rep.phi_grad_f = t2.value(0);
  rep.scale = f.sup_norm * t1.value(1) + phi.sup_norm * t2.value(1);
  rep.residual.value = Value::Constant(1, t1.value(0) + t2.value(0));
  rep.residual.abs_error_estimate = t1.abs_error_estimate + t2.abs_error_estimate;
  rep.residual.evaluations = t1.evaluations + t2.evaluations;
  rep.residual.converged = t1.converged && t2.converged;
  return rep;
}

PointResidual verify_leibniz_pointwise(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                       const QuadratureConfig& cfg) {
  const MeasureEstimate prod = frac_gradient(f * g, x, ctx, cfg);
  const MeasureEstimate gf = frac_gradient(f, x, ctx, cfg);
  const MeasureEstimate gg = frac_gradient(g, x, ctx, cfg);
  const MeasureEstimate nl = frac_nl_gradient(f, g, x, ctx, cfg);
  const double fx = f.value(x), gx = g.value(x);
  PointResidual r;
  r.residual = prod.value - fx * gg.value - gx * gf.value - nl.value;
  r.bars = prod.abs_error_estimate + std::abs(fx) * gg.abs_error_estimate + std::abs(gx) * gf.abs_error_estimate +
           nl.abs_error_estimate;
  r.evaluations = prod.evaluations + gf.evaluations + gg.evaluations + nl.evaluations;
  return r;
}

PointResidual verify_nl_self(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                             const QuadratureConfig& cfg) {
  const MeasureEstimate nl = frac_nl_gradient(set, set, x, ctx, cfg);
  const MeasureEstimate gr = frac_gradient_set(set, x, ctx, cfg);
  const double c = 1.0 - 2.0 * indicator(set, x);
  PointResidual r;
  r.residual = nl.value - c * gr.value;
  r.bars = nl.abs_error_estimate + std::abs(c) * gr.abs_error_estimate;
  r.evaluations = nl.evaluations + gr.evaluations;
  return r;
}

GaussGreenReport verify_gauss_green(const SetSpec& e, const SetSpec& f, const AlphaContext& ctx,
                                    const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (!is_bounded(f)) throw Error("verify_gauss_green: F must be bounded");
  const QuadratureConfig inner = inner_config(cfg);
  const Point c = center_of(f);
  GaussGreenReport rep;
  if (boundaryless(e)) {
    rep.lhs.value = Value::Zero(n);
    rep.lhs.evaluations = 1;
  } else {
    VolumeOptions o = volume_options(c, {e}, ctx.alpha(), cfg);
    o.scale = scale_of(f);
    rep.lhs = volume_integral(gradient_density(e, ctx, inner, false), n, f, o);
  }
  VolumeOptions o = volume_options(c, {f}, ctx.alpha(), cfg);
  o.scale = scale_of(f);
  o.decay = ctx.alpha();
  rep.rhs = volume_integral(gradient_density(f, ctx, inner, false, -1.0), n, e, o);
  return rep;
}

ZeroReport verify_zero_average_nl(const SetSpec& e, const SetSpec& f, const AlphaContext& ctx,
                                  const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (!is_bounded(f)) throw Error("verify_zero_average_nl: F must be bounded");
  const QuadratureConfig inner = inner_config(cfg);
  ZeroReport rep;
  QuadratureConfig pc = cfg;
  pc.tol = std::max(cfg.tol, 1e-4);
  rep.perimeter_scale =
      ctx.mu() * frac_perimeter(f, std::nullopt, ctx, pc,
                                n <= 2 ? PerimeterMethod::deterministic : PerimeterMethod::monte_carlo)
                     .scalar();
  if (boundaryless(e)) {
    rep.value.value = Value::Zero(n);
    rep.value.evaluations = 1;
    return rep;
  }
  auto density = [&](const Point& y) {
    const MeasureEstimate m = singular_integral_nl(e, f, y, ctx, inner, BoundaryPolicy::lenient);
    Value v(n + 1);
    v.head(n) = ctx.mu() * m.value;
    v(n) = ctx.mu() * m.abs_error_estimate;
    return v;
  };
  VolumeOptions o = volume_options(center_of(f), {e, f}, ctx.alpha(), cfg);
  o.scale = scale_of(f);
  o.decay = ctx.alpha();
  rep.value = volume_integral(density, n, whole_space(n), o);
  return rep;
}

ZeroReport verify_total_zero(const SetSpec& set, const AlphaContext& ctx, const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (!is_bounded(set)) throw Error("verify_total_zero: the set must be bounded");
  ZeroReport rep;
  if (boundaryless(set)) {
    rep.value.value = Value::Zero(n);
    rep.value.evaluations = 1;
    return rep;
  }
  VolumeOptions o = volume_options(center_of(set), {set}, ctx.alpha(), cfg);
  o.scale = scale_of(set);
  o.decay = ctx.alpha();
  rep.value = volume_integral(gradient_density(set, ctx, inner_config(cfg), false), n, whole_space(n), o);
  return rep;
}

double mollify_value(const MollifyTarget& u, double eps, const Point& x, const QuadratureConfig& cfg) {
  if (!(eps > 0.0)) throw Error("mollify_value: eps must be positive");
  if (const auto* s = std::get_if<SetSpec>(&u)) {
    if (s->dim() != x.size()) throw Error("mollify_value: dimension mismatch");
    return mollify_indicator_at(*s, eps, x);
  }
  const FieldSpec& f = std::get<FieldSpec>(u);
  if (f.dim != x.size() || !f.is_scalar()) throw Error("mollify_value: expects a scalar field of matching dimension");
  auto g = [&](const Point& y) {
    Value v = Value::Zero(2);
    v(0) = mollifier_density(Point(y - x), eps) * f.scalar(y);
    return v;
  };
  VolumeOptions o;
  o.center = x;
  o.scale = eps;
  o.tol = std::min(cfg.tol, 1e-10);
  return volume_integral(g, 1, ball(x, eps), o).scalar();
}

double ball_average(const MollifyTarget& u, const Point& x, double radius, const QuadratureConfig& cfg) {
  if (!(radius > 0.0)) throw Error("ball_average: radius must be positive");
  const int n = static_cast<int>(x.size());
  const double volume = unit_ball_volume(n) * std::pow(radius, n);
  if (const auto* s = std::get_if<SetSpec>(&u)) {
    if (s->dim() != n) throw Error("ball_average: dimension mismatch");
    auto radial = [&](const Point& dir) {
      Value v = Value::Zero(2);
      for (const auto& iv : ray_segments(*s, x, dir)) {
        if (iv.lo >= radius) break;
        v(0) += (std::pow(std::min(iv.hi, radius), n) - std::pow(iv.lo, n)) / n;
      }
      return v;
    };
    QuadOptions o;
    o.abs_tol = 1e-14;
    o.rel_tol = std::min(cfg.tol, 1e-8);
    o.max_intervals = cfg.max_intervals;
    return sphere_integrate(n, radial, 1, critical_angles(*s, x), 2.0, o).value(0) / volume;
  }
  const FieldSpec& f = std::get<FieldSpec>(u);
  auto g = [&](const Point& y) {
    Value v = Value::Zero(2);
    v(0) = f.scalar(y);
    return v;
  };
  VolumeOptions o;
  o.center = x;
  o.scale = radius;
  o.tol = std::min(cfg.tol, 1e-8);
  return volume_integral(g, 1, ball(x, radius), o).scalar() / volume;
}

PreciseReport precise_representative(const MollifyTarget& u, const Point& x, const std::vector<double>& radii,
                                     const QuadratureConfig& cfg, double tolerance) {
  if (radii.empty()) throw Error("precise_representative: empty radius ladder");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] < radii[k - 1])) throw Error("precise_representative: radii must be strictly decreasing");
  PreciseReport rep;
  rep.point = x;
  rep.radii = radii;
  rep.tolerance = tolerance;
  for (double r : radii) rep.averages.push_back(ball_average(u, x, r, cfg));
  const std::size_t k = rep.averages.size() - 1;
  if (k == 0 || std::abs(rep.averages[k] - rep.averages[k - 1]) <= tolerance) rep.value = rep.averages[k];
  rep.mollified = mollify_value(u, radii.back(), x, cfg);
  rep.mollifier_agrees = rep.value && std::abs(rep.mollified - *rep.value) <= tolerance;
  return rep;
}

SmoothingReport verify_smoothing(const SetSpec& set, double eps, const Point& x, const AlphaContext& ctx,
                                 const QuadratureConfig& cfg) {
  validate(cfg);
  const int n = ctx.n();
  if (set.dim() != n || x.size() != n) throw Error("verify_smoothing: dimension mismatch");
  SmoothingReport rep;
  if (boundaryless(set)) {
    rep.lhs.value = rep.rhs.value = Value::Zero(n);
    rep.lhs.evaluations = rep.rhs.evaluations = 1;
    rep.residual = Point::Zero(n);
    return rep;
  }
  rep.lhs = frac_gradient(mollified_indicator(set, eps), x, ctx, cfg);
  const QuadratureConfig inner = inner_config(cfg);
  auto g = [&](const Point& y) {
    const double w = mollifier_density(Point(y - x), eps);
    Value v = Value::Zero(n + 1);
    if (w == 0.0) return v;
    const MeasureEstimate m = singular_integral_set(set, y, ctx, inner, BoundaryPolicy::lenient);
    v.head(n) = w * ctx.mu() * m.value;
    v(n) = w * ctx.mu() * m.abs_error_estimate;
    return v;
  };
  VolumeOptions o = volume_options(x, {set}, ctx.alpha(), cfg);
  o.scale = eps;
  rep.rhs = volume_integral(g, n, ball(x, eps), o);
  rep.residual = rep.lhs.value - rep.rhs.value;
  rep.bars = rep.lhs.abs_error_estimate + rep.rhs.abs_error_estimate;
  return rep;
}

}  // namespace fracvc
