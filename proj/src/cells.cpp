#include <fracvc/quadrature.hpp>

#include <cmath>

namespace fracvc {

namespace {

struct CellSum {
  Value value;
  double error = 0.0;
  long evaluations = 0;
  bool unresolved = false;
};

CellSum combine(CellSum a, const CellSum& b) {
  a.value += b.value;
  a.error += b.error;
  a.evaluations += b.evaluations;
  a.unresolved = a.unresolved || b.unresolved;
  return a;
}

class CellEngine {
 public:
  CellEngine(const SetSpec& set, const Point& x, const AlphaContext& ctx, const QuadratureConfig& cfg)
      : set_(set), x_(x), ctx_(ctx), cfg_(cfg), n_(ctx.n()) {
    chi_x_ = indicator(set, x);
    dist_x_ = boundary_distance(set, x);
  }

  CellSum run() {
    const double R = cfg_.tail_radius;
    const long per_axis = std::max(1L, static_cast<long>(std::ceil(2.0 * R / cfg_.base_cell)));
    const double h = 2.0 * R / static_cast<double>(per_axis);
    long total = 1;
    for (int k = 0; k < n_; ++k) total *= per_axis;
    // root cells reduced pairwise over their linear index
    return reduce_roots(0, total, per_axis, h);
  }

 private:
  CellSum reduce_roots(long lo, long hi, long per_axis, double h) {
    if (hi - lo == 1) {
      Point c(n_);
      long idx = lo;
      for (int k = 0; k < n_; ++k) {
        c(k) = x_(k) - cfg_.tail_radius + (static_cast<double>(idx % per_axis) + 0.5) * h;
        idx /= per_axis;
      }
      return cell(c, h, 0);
    }
    const long mid = lo + (hi - lo) / 2;
    return combine(reduce_roots(lo, mid, per_axis, h), reduce_roots(mid, hi, per_axis, h));
  }

  CellSum zero() const { return CellSum{Value::Zero(n_)}; }

  CellSum split(const Point& c, double size, int depth) {
    const int children = 1 << n_;
    std::vector<CellSum> parts;
    parts.reserve(static_cast<std::size_t>(children));
    for (int k = 0; k < children; ++k) {
      Point cc = c;
      for (int a = 0; a < n_; ++a) cc(a) += ((k >> a) & 1 ? 0.25 : -0.25) * size;
      parts.push_back(cell(cc, 0.5 * size, depth + 1));
    }
    while (parts.size() > 1) {
      std::vector<CellSum> next;
      for (std::size_t k = 0; k + 1 < parts.size(); k += 2) next.push_back(combine(parts[k], parts[k + 1]));
      parts = std::move(next);
    }
    return parts.front();
  }

  CellSum cell(const Point& c, double size, int depth) {
    const double half_diag = 0.5 * size * std::sqrt(static_cast<double>(n_));
    const double vol = std::pow(size, n_);
    const double dc = (c - x_).norm();
    // inside the ball around x where chi_E is constant
    if (dc + half_diag <= dist_x_) return zero();
    const double bd = boundary_distance(set_, c);
    CellSum out = zero();
    out.evaluations = 1;
    if (bd > half_diag) {
      const double chi_c = indicator(set_, c);
      if (chi_c == chi_x_) return out;
      // smooth kernel on the cell: refine until the cell is small relative to its distance from x
      const double gap = dc - half_diag;
      if ((gap <= 0.0 || half_diag > 0.25 * gap) && depth < cfg_.max_depth + kExtraKernelDepth)
        return split(c, size, depth);
      const Point k = riesz_kernel(Point(c - x_), ctx_);
      out.value = (chi_c - chi_x_) * vol * k;
      // midpoint rule error for a kernel with second derivatives ~ (n+alpha+1)(n+alpha+2)|y-x|^{-n-alpha-2}
      const double p = n_ + ctx_.alpha();
      const double far = std::max(gap, dist_x_);
      out.error = vol * size * size / 24.0 * n_ * (p + 1.0) * (p + 2.0) * std::pow(far, -p - 2.0);
      return out;
    }
    if (depth < cfg_.max_depth) return split(c, size, depth);
    // straddling leaf at the depth limit: midpoint value, bounded by the kernel maximum on the cell
    const double gap = std::max(dc - half_diag, dist_x_);
    const double kmax = std::pow(gap, -(n_ + ctx_.alpha()));
    const double chi_c = indicator(set_, c);
    if (dc > 0.0 && chi_c != chi_x_) out.value = (chi_c - chi_x_) * vol * riesz_kernel(Point(c - x_), ctx_);
    out.error = 2.0 * vol * kmax;
    out.unresolved = true;
    return out;
  }

  static constexpr int kExtraKernelDepth = 40;

  const SetSpec& set_;
  Point x_;
  const AlphaContext& ctx_;
  const QuadratureConfig& cfg_;
  int n_;
  double chi_x_ = 0.0;
  double dist_x_ = 0.0;
};

}  // namespace

MeasureEstimate singular_integral_set_cells(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                            const QuadratureConfig& cfg) {
  validate(cfg);
  if (x.size() != ctx.n() || set.dim() != ctx.n()) throw Error("cell engine: dimension mismatch");
  if (membership(set, x) == Location::on_boundary || boundary_distance(set, x) == 0.0)
    throw Error("evaluation point on boundary");
  MeasureEstimate m;
  if (!std::isfinite(boundary_distance(set, x))) {
    m.value = Value::Zero(ctx.n());
    m.evaluations = 1;
    return m;
  }
  CellEngine engine(set, x, ctx, cfg);
  const CellSum s = engine.run();
  m.value = s.value;
  m.tail_error = sphere_surface(ctx.n()) * std::pow(cfg.tail_radius, -ctx.alpha()) / ctx.alpha();
  m.abs_error_estimate = s.error + m.tail_error;
  m.evaluations = std::max(1L, s.evaluations);
  m.converged = m.abs_error_estimate <= cfg.tol * std::max(m.value.norm(), 1e-300);
  return m;
}

}  // namespace fracvc
