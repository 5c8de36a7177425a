#ifndef FRACVC_GAUSS_KRONROD_HPP
#define FRACVC_GAUSS_KRONROD_HPP

#include <fracvc/types.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace fracvc {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  int max_intervals = 4000;
  /// Only the leading components drive the error control; trailing ones are
  /// integrated along (used to carry error densities of inner integrals).
  int controlled_components = -1;
};

struct QuadResult {
  Value value;
  /// Sum over intervals of |K15 - G7| in the controlled components.
  double error = 0.0;
  /// Integral of |f| over the controlled components (for relative control).
  double magnitude = 0.0;
  long evaluations = 0;
  int intervals = 0;
  bool converged = true;
};

namespace gk_detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Value value;
  double error;
  double magnitude;
};

inline double norm_of(const Value& v, int k) { return v.head(k).norm(); }

template <class F>
Panel apply_rule(F& f, double a, double b, int controlled, long& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Value fc = f(c);
  Value kron = wgk[7] * fc;
  Value gauss = wg[3] * fc;
  double mag = wgk[7] * norm_of(fc, controlled);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    Value f1 = f(c - dx);
    Value f2 = f(c + dx);
    kron += wgk[j] * (f1 + f2);
    mag += wgk[j] * (norm_of(f1, controlled) + norm_of(f2, controlled));
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  evals += 15;
  Panel p{a, b, kron * h, 0.0, std::abs(h) * mag};
  p.error = std::abs(h) * norm_of(Value(kron - gauss), controlled);
  return p;
}

struct PanelOrder {
  const std::vector<Panel>* panels;
  bool operator()(int i, int j) const {
    const double ei = (*panels)[i].error, ej = (*panels)[j].error;
    return ei < ej || (ei == ej && i > j);
  }
};

}  // namespace gk_detail

/// Globally adaptive G7K15 quadrature of a vector-valued f over the partition
/// given by `breaks` (sorted, at least two entries). `dim` is the size of f's output.
template <class F>
QuadResult integrate(F&& f, std::span<const double> breaks, int dim, const QuadOptions& opt = {}) {
  using gk_detail::Panel;
  QuadResult res;
  res.value = Value::Zero(dim);
  if (breaks.size() < 2) return res;
  const int controlled = opt.controlled_components < 0 ? dim : std::min(dim, opt.controlled_components);

  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(opt.max_intervals) + breaks.size());
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (!(breaks[k + 1] > breaks[k])) continue;
    panels.push_back(gk_detail::apply_rule(f, breaks[k], breaks[k + 1], controlled, res.evaluations));
  }
  auto totals = [&](double& err, double& mag) {
    err = 0.0;
    mag = 0.0;
    for (const auto& p : panels) {
      err += p.error;
      mag += p.magnitude;
    }
  };
  double err = 0.0, mag = 0.0;
  totals(err, mag);

  std::priority_queue<int, std::vector<int>, gk_detail::PanelOrder> heap(gk_detail::PanelOrder{&panels});
  for (int i = 0; i < static_cast<int>(panels.size()); ++i) heap.push(i);

  bool stalled = false;
  while (err > std::max(opt.abs_tol, opt.rel_tol * mag)) {
    if (static_cast<int>(panels.size()) >= opt.max_intervals || heap.empty()) {
      stalled = true;
      break;
    }
    const int worst = heap.top();
    heap.pop();
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      // cannot be split further in floating point; keep its error as is
      stalled = true;
      continue;
    }
    Panel left = gk_detail::apply_rule(f, p.a, mid, controlled, res.evaluations);
    Panel right = gk_detail::apply_rule(f, mid, p.b, controlled, res.evaluations);
    err += left.error + right.error - p.error;
    mag += left.magnitude + right.magnitude - p.magnitude;
    panels[worst] = left;
    panels.push_back(right);
    heap.push(worst);
    heap.push(static_cast<int>(panels.size()) - 1);
  }

  // Final reduction in positional order so the result does not depend on the
  // refinement history beyond the panel set itself.
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) res.value += p.value;
  totals(res.error, res.magnitude);
  res.intervals = static_cast<int>(panels.size());
  res.converged = !stalled || res.error <= std::max(opt.abs_tol, opt.rel_tol * res.magnitude);
  return res;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, int dim, const QuadOptions& opt = {}) {
  const std::array<double, 2> br{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(br), dim, opt);
}

/// One piece of a 1-D integration domain together with the change of variables
/// used on it. Pieces are laid side by side on [0, count) so a single adaptive
/// run distributes effort across all of them.
struct MappedPiece {
  enum class Kind { plain, cluster_left, cluster_right, to_infinity };
  Kind kind = Kind::plain;
  double a = 0.0;
  double b = 0.0;
  /// Clustering power for the cluster kinds (t - a ~ s^power).
  double power = 1.0;
  /// Decay exponent for to_infinity: the integrand is expected to fall off like t^{-1-decay}.
  double decay = 1.0;
};

/// Splits [a,b] into two halves clustered toward both endpoints.
void append_clustered(std::vector<MappedPiece>& pieces, double a, double b, double power);
/// Appends [a, +inf) mapped onto a finite parameter range (requires a > 0).
void append_infinite(std::vector<MappedPiece>& pieces, double a, double decay);

/// Parameter t and Jacobian dt/ds for local coordinate s in (0,1) of a piece.
inline void map_piece(const MappedPiece& p, double s, double& t, double& jac) {
  switch (p.kind) {
    case MappedPiece::Kind::plain:
      t = p.a + (p.b - p.a) * s;
      jac = p.b - p.a;
      return;
    case MappedPiece::Kind::cluster_left: {
      const double sp = std::pow(s, p.power - 1.0);
      t = p.a + (p.b - p.a) * sp * s;
      jac = p.power * (p.b - p.a) * sp;
      return;
    }
    case MappedPiece::Kind::cluster_right: {
      const double u = 1.0 - s;
      const double sp = std::pow(u, p.power - 1.0);
      t = p.b - (p.b - p.a) * sp * u;
      jac = p.power * (p.b - p.a) * sp;
      return;
    }
    case MappedPiece::Kind::to_infinity: {
      const double e = -1.0 / p.decay;
      const double w = std::pow(s, e);
      t = p.a * w;
      jac = p.a / p.decay * w / s;
      return;
    }
  }
}

/// Integrates g(t) over the union of the pieces. g returns a Value of size dim.
template <class G>
QuadResult integrate_pieces(G&& g, const std::vector<MappedPiece>& pieces, int dim, const QuadOptions& opt = {}) {
  std::vector<double> breaks(pieces.size() + 1);
  for (std::size_t k = 0; k <= pieces.size(); ++k) breaks[k] = static_cast<double>(k);
  auto composite = [&](double u) -> Value {
    const auto k = std::min(static_cast<std::size_t>(u), pieces.size() - 1);
    double t = 0.0, jac = 0.0;
    map_piece(pieces[k], u - static_cast<double>(k), t, jac);
    if (!std::isfinite(t) || !std::isfinite(jac) || jac == 0.0) return Value::Zero(dim);
    return g(t) * jac;
  };
  return integrate(composite, std::span<const double>(breaks), dim, opt);
}

}  // namespace fracvc

#endif  // FRACVC_GAUSS_KRONROD_HPP
