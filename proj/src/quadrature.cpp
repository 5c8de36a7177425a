#include <fracvc/quadrature.hpp>

#include <fracvc/gauss_kronrod.hpp>
#include <fracvc/random.hpp>
#include <fracvc/sphere.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracvc {

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.tail_radius > 0.0)) throw Error("quadrature: tail_radius must be positive");
  if (!(cfg.base_cell > 0.0)) throw Error("quadrature: base_cell must be positive");
  if (cfg.max_depth < 1) throw Error("quadrature: max_depth must be at least 1");
  if (!(cfg.tol > 0.0)) throw Error("quadrature: tol must be positive");
  if (cfg.mc_samples < 2) throw Error("quadrature: mc_samples must be at least 2");
  if (cfg.max_intervals < 8) throw Error("quadrature: max_intervals must be at least 8");
}

namespace {

struct Radial {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool singular = false;
};

// int_t^inf r^{-1-alpha} dr
double tail_mass(double t, double alpha) { return std::isfinite(t) ? std::pow(t, -alpha) / alpha : 0.0; }

std::vector<double> edges_of(const RayProfile& p) {
  std::vector<double> e;
  for (double b : p.breaks)
    if (b > 0.0 && b < p.tail_start) e.push_back(b);
  if (std::isfinite(p.tail_start) && p.tail_start > 0.0) e.push_back(p.tail_start);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

// h is constant between consecutive edges: exact.
template <class H>
Radial radial_constant(H&& h, const RayProfile& p, double alpha) {
  Radial out;
  const std::vector<double> e = edges_of(p);
  double a = 0.0;
  for (double b : e) {
    const double v = h(0.5 * (a + b));
    ++out.evaluations;
    if (v != 0.0) {
      if (a == 0.0) {
        out.singular = true;
        return out;
      }
      out.value += v * (tail_mass(a, alpha) - tail_mass(b, alpha));
    }
    a = b;
  }
  if (p.tail_value != 0.0) {
    if (!(p.tail_start > 0.0)) {
      out.singular = true;
      return out;
    }
    out.value += p.tail_value * tail_mass(p.tail_start, alpha);
  }
  return out;
}

// h is smooth between edges and h(r) = O(r) at the origin.
template <class H>
Radial radial_smooth(H&& h, const RayProfile& p, double alpha, double scale, const QuadOptions& opt) {
  Radial out;
  std::vector<double> e = edges_of(p);
  if (e.empty()) {
    if (p.tail_start == 0.0) {
      out.singular = p.tail_value != 0.0;
      return out;
    }
    e.push_back(scale);
  }
  std::vector<MappedPiece> pieces;
  pieces.push_back({MappedPiece::Kind::cluster_left, 0.0, e.front(), 1.0 / (1.0 - alpha), 1.0});
  for (std::size_t k = 0; k + 1 < e.size(); ++k) pieces.push_back({MappedPiece::Kind::plain, e[k], e[k + 1]});
  if (!std::isfinite(p.tail_start)) append_infinite(pieces, e.back(), alpha);
  auto g = [&](double r) -> Value { return Value::Constant(1, h(r) * std::pow(r, -1.0 - alpha)); };
  const QuadResult q = integrate_pieces(g, pieces, 1, opt);
  out.value = q.value(0);
  out.error = q.error;
  out.evaluations = q.evaluations;
  if (std::isfinite(p.tail_start) && p.tail_value != 0.0) out.value += p.tail_value * tail_mass(p.tail_start, alpha);
  return out;
}

MeasureEstimate zero_estimate(int dim, long evaluations = 1) {
  MeasureEstimate m;
  m.value = Value::Zero(dim);
  m.evaluations = evaluations;
  return m;
}

void check_point(const Point& x, const AlphaContext& ctx) {
  if (x.size() != ctx.n()) throw Error("evaluation point has the wrong dimension");
  if (!x.allFinite()) throw Error("evaluation point is not finite");
}

[[noreturn]] void on_boundary_error() { throw Error("evaluation point on boundary"); }

// Runs the angular sweep; rf(dir) returns the radial integral along dir.
template <class RF>
MeasureEstimate sweep(int n, RF&& rf, bool vector_output, const std::vector<double>& angles,
                      const QuadratureConfig& cfg, BoundaryPolicy policy) {
  const int dim = vector_output ? n : 1;
  bool singular = false;
  long evals = 0;
  auto integrand = [&](const Point& dir) -> Value {
    Value v = Value::Zero(dim + 1);
    if (singular) return v;
    const Radial r = rf(dir);
    evals += r.evaluations;
    if (r.singular) {
      singular = true;
      return v;
    }
    if (vector_output) {
      v.head(dim) = r.value * dir;
    } else {
      v(0) = r.value;
    }
    v(dim) = r.error;
    return v;
  };
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = cfg.tol;
  o.max_intervals = cfg.max_intervals;
  const SphereResult s = sphere_integrate(n, integrand, dim, angles, 2.0, o);
  if (singular) {
    if (policy == BoundaryPolicy::strict) on_boundary_error();
    return zero_estimate(dim, std::max(1L, evals));
  }
  MeasureEstimate m;
  m.value = s.value;
  m.abs_error_estimate = s.error;
  m.evaluations = std::max(1L, evals);
  m.converged = s.converged;
  return m;
}

QuadOptions radial_options(const QuadratureConfig& cfg) {
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 0.1 * cfg.tol;
  o.max_intervals = std::max(50, cfg.max_intervals / 10);
  return o;
}

double operand_scale(const Operand& f) {
  double s = kInf;
  for (const auto& fac : f.factors())
    if (const auto* g = std::get_if<FieldSpec>(&fac))
      if (std::isfinite(g->support_radius) && g->support_radius > 0.0) s = std::min(s, g->support_radius);
  return std::isfinite(s) ? s : 1.0;
}

double field_scale(const FieldSpec& f) {
  return std::isfinite(f.support_radius) && f.support_radius > 0.0 ? f.support_radius : 1.0;
}

// True when x lies on the boundary of a set factor of f.
bool touches_boundary(const Operand& f, const Point& x) {
  for (const auto& fac : f.factors())
    if (const auto* s = std::get_if<SetSpec>(&fac)) {
      if (membership(*s, x) == Location::on_boundary || boundary_distance(*s, x) == 0.0) return true;
    }
  return false;
}

void check_dims(const Operand& f, const AlphaContext& ctx) {
  if (f.dim() != ctx.n()) throw Error("operand dimension does not match the context");
  if (f.missing_lipschitz()) throw Error("missing Lipschitz bound");
}

void check_field(const FieldSpec& f, const AlphaContext& ctx) {
  if (f.dim != ctx.n()) throw Error("field dimension does not match the context");
  if (!f.has_lipschitz_bound()) throw Error("missing Lipschitz bound");
  if (!f.evaluate) throw Error("field has no evaluator");
}

std::vector<double> merged_angles(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<SetSpec> field_sets(const FieldSpec& f) {
  if (f.dim != 2 || !std::isfinite(f.support_radius) || !(f.support_radius > 0.0)) return {};
  return {ball(f.support_center, f.support_radius)};
}

std::vector<double> joint_angles(std::vector<SetSpec> a, const std::vector<SetSpec>& b, const Point& x) {
  a.insert(a.end(), b.begin(), b.end());
  return critical_angles(a, x);
}

}  // namespace

MeasureEstimate singular_integral_operand(const Operand& f, const Point& x, const AlphaContext& ctx,
                                          const QuadratureConfig& cfg, BoundaryPolicy policy) {
  validate(cfg);
  check_point(x, ctx);
  check_dims(f, ctx);
  const int n = ctx.n();
  const double alpha = ctx.alpha();
  if (touches_boundary(f, x)) {
    if (policy == BoundaryPolicy::strict) on_boundary_error();
    return zero_estimate(n);
  }
  const double base = f.value(x);
  const std::vector<double> angles = f.critical_angles(x);

  if (f.is_indicator() && f.factors().size() == 1) {
    // exact ray segments of a single set
    const SetSpec& set = std::get<SetSpec>(f.factors().front());
    auto rf = [&](const Point& dir) {
      Radial r;
      r.evaluations = 1;
      Segments s = ray_segments(set, x, dir);
      if (base != 0.0) s = complement_segments(s, 0.0, kInf);
      const double sign = base != 0.0 ? -1.0 : 1.0;
      for (const auto& iv : s) {
        if (iv.lo == 0.0) {
          r.singular = true;
          return r;
        }
        r.value += sign * (tail_mass(iv.lo, alpha) - tail_mass(iv.hi, alpha));
      }
      return r;
    };
    return sweep(n, rf, true, angles, cfg, policy);
  }

  const QuadOptions ro = radial_options(cfg);
  const double scale = operand_scale(f);
  const bool constant = f.is_indicator();
  auto rf = [&](const Point& dir) {
    RayProfile p = f.ray_profile(x, dir);
    p.tail_value -= base;
    auto h = [&](double r) { return f.value(Point(x + r * dir)) - base; };
    return constant ? radial_constant(h, p, alpha) : radial_smooth(h, p, alpha, scale, ro);
  };
  return sweep(n, rf, true, angles, cfg, policy);
}

MeasureEstimate singular_integral_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                      const QuadratureConfig& cfg, BoundaryPolicy policy) {
  if (cfg.method == Method::dyadic_cells) return singular_integral_set_cells(set, x, ctx, cfg);
  return singular_integral_operand(Operand(set), x, ctx, cfg, policy);
}

MeasureEstimate singular_integral_field(const FieldSpec& f, const Point& x, const AlphaContext& ctx,
                                        const QuadratureConfig& cfg) {
  if (!f.is_scalar()) throw Error("singular_integral_field expects a scalar field");
  check_field(f, ctx);
  return singular_integral_operand(Operand(f), x, ctx, cfg);
}

MeasureEstimate singular_integral_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                             const QuadratureConfig& cfg) {
  validate(cfg);
  check_point(x, ctx);
  check_field(phi, ctx);
  if (phi.components != ctx.n()) throw Error("divergence expects a vector field with n components");
  const double alpha = ctx.alpha();
  const Value base = phi.evaluate(x);
  const QuadOptions ro = radial_options(cfg);
  const double scale = field_scale(phi);
  auto rf = [&](const Point& dir) {
    RayProfile p = field_ray_profile(phi, x, dir);
    p.tail_value = -base.dot(dir);
    auto h = [&](double r) { return (phi.evaluate(Point(x + r * dir)) - base).dot(dir); };
    return radial_smooth(h, p, alpha, scale, ro);
  };
  return sweep(ctx.n(), rf, false, critical_angles(field_sets(phi), x), cfg, BoundaryPolicy::strict);
}

MeasureEstimate singular_integral_nl(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                     const QuadratureConfig& cfg, BoundaryPolicy policy) {
  validate(cfg);
  check_point(x, ctx);
  check_dims(f, ctx);
  check_dims(g, ctx);
  const int n = ctx.n();
  const double alpha = ctx.alpha();
  if (touches_boundary(f, x) || touches_boundary(g, x)) {
    if (policy == BoundaryPolicy::strict) on_boundary_error();
    return zero_estimate(n);
  }
  const double fx = f.value(x), gx = g.value(x);
  const bool constant = f.is_indicator() && g.is_indicator();
  const QuadOptions ro = radial_options(cfg);
  const double scale = std::min(operand_scale(f), operand_scale(g));
  auto rf = [&](const Point& dir) {
    RayProfile pf = f.ray_profile(x, dir), pg = g.ray_profile(x, dir);
    RayProfile p = merge_profiles(pf, pg);
    p.tail_value = (pf.tail_value - fx) * (pg.tail_value - gx);
    auto h = [&](double r) {
      const Point y = x + r * dir;
      const double df = f.value(y) - fx;
      return df == 0.0 ? 0.0 : df * (g.value(y) - gx);
    };
    return constant ? radial_constant(h, p, alpha) : radial_smooth(h, p, alpha, scale, ro);
  };
  return sweep(n, rf, true, joint_angles(f.boundary_sets(), g.boundary_sets(), x), cfg, policy);
}

MeasureEstimate singular_integral_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x,
                                                const AlphaContext& ctx, const QuadratureConfig& cfg) {
  validate(cfg);
  check_point(x, ctx);
  check_dims(f, ctx);
  check_field(phi, ctx);
  if (phi.components != ctx.n()) throw Error("divergence expects a vector field with n components");
  if (touches_boundary(f, x)) on_boundary_error();
  const double alpha = ctx.alpha();
  const double fx = f.value(x);
  const Value px = phi.evaluate(x);
  const QuadOptions ro = radial_options(cfg);
  const double scale = std::min(operand_scale(f), field_scale(phi));
  auto rf = [&](const Point& dir) {
    RayProfile pf = f.ray_profile(x, dir), pp = field_ray_profile(phi, x, dir);
    RayProfile p = merge_profiles(pf, pp);
    p.tail_value = (pf.tail_value - fx) * (-px.dot(dir));
    auto h = [&](double r) {
      const Point y = x + r * dir;
      const double df = f.value(y) - fx;
      return df == 0.0 ? 0.0 : df * (phi.evaluate(y) - px).dot(dir);
    };
    return radial_smooth(h, p, alpha, scale, ro);
  };
  return sweep(ctx.n(), rf, false, joint_angles(f.boundary_sets(), field_sets(phi), x), cfg,
               BoundaryPolicy::strict);
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

struct Stratum {
  Value sum;
  Value sum2;
  long count = 0;
};

// h(dir, r) is the scalar radial integrand (already contracted with dir for
// divergence-type integrals). If zero_radius > 0 the integrand vanishes for
// r < zero_radius and only the Pareto stratum is sampled; otherwise the split
// radius is `scale`.
template <class H>
MeasureEstimate mc_engine(int n, double alpha, H&& h, bool vector_output, double zero_radius, double scale,
                          const QuadratureConfig& cfg) {
  validate(cfg);
  const int dim = vector_output ? n : 1;
  if (!std::isfinite(zero_radius)) return zero_estimate(dim);
  Rng rng(cfg.seed);
  const bool skip_inner = zero_radius > 0.0;
  const double rho0 = skip_inner ? zero_radius : scale;
  const long total = cfg.mc_samples;
  const long n_inner = skip_inner ? 0 : total / 2;
  const long n_outer = total - n_inner;
  Stratum inner{Value::Zero(dim), Value::Zero(dim)}, outer{Value::Zero(dim), Value::Zero(dim)};
  auto contribution = [&](const Point& dir, double r, double weight) -> Value {
    const double a = h(dir, r), b = h(Point(-dir), r);
    Value v(dim);
    if (vector_output) {
      v = 0.5 * weight * (a - b) * dir;
    } else {
      v(0) = 0.5 * weight * (a + b);
    }
    return v;
  };
  auto add = [](Stratum& s, const Value& v) {
    s.sum += v;
    s.sum2 += v.cwiseProduct(v);
    ++s.count;
  };
  // Both strata are drawn in a fixed interleaved order so the stream is reproducible.
  for (long k = 0; k < n_outer; ++k) {
    const Point dir = random_direction(n, rng);
    const double r = rho0 * std::pow(uniform01_open(rng), -1.0 / alpha);
    add(outer, contribution(dir, r, std::pow(rho0, -alpha) / alpha));
    if (k < n_inner) {
      const Point d2 = random_direction(n, rng);
      const double r2 = rho0 * std::pow(uniform01_open(rng), 1.0 / (1.0 - alpha));
      add(inner, contribution(d2, r2, std::pow(rho0, 1.0 - alpha) / ((1.0 - alpha) * r2)));
    }
  }
  const double surface = sphere_surface(n);
  MeasureEstimate m;
  m.value = Value::Zero(dim);
  Value var = Value::Zero(dim);
  for (const Stratum* s : {&inner, &outer}) {
    if (s->count == 0) continue;
    const double c = static_cast<double>(s->count);
    const Value mean = s->sum / c;
    m.value += surface * mean;
    if (s->count > 1) var += (s->sum2 / c - mean.cwiseProduct(mean)).cwiseMax(0.0) * (surface * surface / (c - 1.0));
  }
  m.abs_error_estimate = std::sqrt(var.sum());
  m.evaluations = 2 * (n_outer + n_inner);
  return m;
}

}  // namespace

MeasureEstimate mc_singular_integral_operand(const Operand& f, const Point& x, const AlphaContext& ctx,
                                             const QuadratureConfig& cfg) {
  check_point(x, ctx);
  check_dims(f, ctx);
  if (touches_boundary(f, x)) on_boundary_error();
  const double fx = f.value(x);
  auto h = [&](const Point& dir, double r) { return f.value(Point(x + r * dir)) - fx; };
  const double zero = f.is_indicator() ? f.set_boundary_distance(x) : 0.0;
  return mc_engine(ctx.n(), ctx.alpha(), h, true, zero, operand_scale(f), cfg);
}

MeasureEstimate mc_singular_integral_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                         const QuadratureConfig& cfg) {
  return mc_singular_integral_operand(Operand(set), x, ctx, cfg);
}

MeasureEstimate mc_singular_integral_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                                const QuadratureConfig& cfg) {
  check_point(x, ctx);
  check_field(phi, ctx);
  if (phi.components != ctx.n()) throw Error("divergence expects a vector field with n components");
  const Value px = phi.evaluate(x);
  auto h = [&](const Point& dir, double r) { return (phi.evaluate(Point(x + r * dir)) - px).dot(dir); };
  return mc_engine(ctx.n(), ctx.alpha(), h, false, 0.0, field_scale(phi), cfg);
}

MeasureEstimate mc_singular_integral_nl(const Operand& f, const Operand& g, const Point& x,
                                        const AlphaContext& ctx, const QuadratureConfig& cfg) {
  check_point(x, ctx);
  check_dims(f, ctx);
  check_dims(g, ctx);
  if (touches_boundary(f, x) || touches_boundary(g, x)) on_boundary_error();
  const double fx = f.value(x), gx = g.value(x);
  auto h = [&](const Point& dir, double r) {
    const Point y = x + r * dir;
    const double df = f.value(y) - fx;
    return df == 0.0 ? 0.0 : df * (g.value(y) - gx);
  };
  double zero = 0.0;
  if (f.is_indicator()) zero = std::max(zero, f.set_boundary_distance(x));
  if (g.is_indicator()) zero = std::max(zero, g.set_boundary_distance(x));
  return mc_engine(ctx.n(), ctx.alpha(), h, true, zero, std::min(operand_scale(f), operand_scale(g)), cfg);
}

MeasureEstimate mc_singular_integral_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x,
                                                   const AlphaContext& ctx, const QuadratureConfig& cfg) {
  check_point(x, ctx);
  check_dims(f, ctx);
  check_field(phi, ctx);
  if (phi.components != ctx.n()) throw Error("divergence expects a vector field with n components");
  if (touches_boundary(f, x)) on_boundary_error();
  const double fx = f.value(x);
  const Value px = phi.evaluate(x);
  auto h = [&](const Point& dir, double r) {
    const Point y = x + r * dir;
    const double df = f.value(y) - fx;
    return df == 0.0 ? 0.0 : df * (phi.evaluate(y) - px).dot(dir);
  };
  const double zero = f.is_indicator() ? f.set_boundary_distance(x) : 0.0;
  return mc_engine(ctx.n(), ctx.alpha(), h, false, zero, std::min(operand_scale(f), field_scale(phi)), cfg);
}

// ---------------------------------------------------------------------------
// Volume integrals in polar coordinates around opt.center

MeasureEstimate volume_integral(const VolumeIntegrand& g, int components, const SetSpec& region,
                                const VolumeOptions& opt) {
  const int n = region.dim();
  if (opt.center.size() != n) throw Error("volume integral: center has the wrong dimension");
  if (components < 1) throw Error("volume integral: needs at least one component");
  if (!(opt.tol > 0.0)) throw Error("volume integral: tol must be positive");
  if (!(opt.blowup >= 0.0 && opt.blowup < 1.0)) throw Error("volume integral: blow-up exponent must lie in [0,1)");
  for (const auto& s : opt.guides)
    if (s.dim() != n) throw Error("volume integral: guide set has the wrong dimension");
  const bool bounded = is_bounded(region);
  if (!bounded && !(opt.decay > 0.0)) throw Error("volume integral: unbounded region needs a positive decay");
  const double q = 1.0 / (1.0 - opt.blowup);
  const Point c = opt.center;
  long evals = 0;
  bool radial_ok = true;

  QuadOptions ro;
  ro.abs_tol = 1e-300;
  ro.rel_tol = 0.1 * opt.tol;
  ro.max_intervals = opt.max_intervals_radial;
  ro.controlled_components = components;

  auto along = [&](const Point& dir) -> Value {
    Value out = Value::Zero(components + 1);
    const Segments segs = ray_segments(region, c, dir);
    if (segs.empty()) return out;
    std::vector<double> cuts;
    for (const auto& s : opt.guides)
      for (const auto& iv : ray_segments(s, c, dir)) {
        if (iv.lo > 0.0) cuts.push_back(iv.lo);
        if (std::isfinite(iv.hi)) cuts.push_back(iv.hi);
      }
    std::sort(cuts.begin(), cuts.end());
    std::vector<MappedPiece> pieces;
    for (const auto& iv : segs) {
      std::vector<double> pts{iv.lo};
      for (double t : cuts)
        if (t > iv.lo && t < iv.hi) pts.push_back(t);
      double end = iv.hi;
      if (!std::isfinite(end)) {
        const double far = std::max(pts.back(), opt.scale);
        end = pts.back() > 0.0 ? 2.0 * far : far;
      }
      pts.push_back(end);
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) append_clustered(pieces, pts[k], pts[k + 1], q);
      if (!std::isfinite(iv.hi)) append_infinite(pieces, end, opt.decay);
    }
    auto h = [&](double r) -> Value {
      Value v = g(Point(c + r * dir));
      ++evals;
      const double w = n == 1 ? 1.0 : std::pow(r, n - 1);
      v.head(components) *= w;
      v(components) = std::abs(v(components)) * w;
      return v;
    };
    const QuadResult res = integrate_pieces(h, pieces, components + 1, ro);
    radial_ok = radial_ok && res.converged;
    out = res.value;
    out(components) = std::abs(out(components)) + res.error;
    return out;
  };

  std::vector<double> angles = critical_angles(region, c);
  for (const auto& s : opt.guides) angles = merged_angles(angles, critical_angles(s, c));
  QuadOptions ao;
  ao.abs_tol = 1e-300;
  ao.rel_tol = opt.tol;
  ao.max_intervals = opt.max_intervals_angular;
  const SphereResult s = sphere_integrate(n, along, components, angles, std::max(2.0, q), ao);
  MeasureEstimate m;
  m.value = s.value;
  m.abs_error_estimate = s.error;
  // Within rounding distance of a guide boundary the blow-up saturates; the
  // unresolved layer holds a share of order eps^{1 - blowup} of the integral.
  if (opt.blowup > 0.0 && !opt.guides.empty())
    m.abs_error_estimate += m.value.norm() * std::pow(std::numeric_limits<double>::epsilon(), 1.0 - opt.blowup);
  m.evaluations = std::max(1L, evals);
  m.converged = s.converged && radial_ok;
  return m;
}

}  // namespace fracvc
