#include <fracvc/oracles.hpp>

#include <fracvc/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace fracvc {

Point halfspace_gradient(const Point& x0, const Point& nu, const Point& x, const AlphaContext& ctx) {
  if (x0.size() != ctx.n() || nu.size() != ctx.n() || x.size() != ctx.n())
    throw Error("halfspace_gradient: dimension mismatch");
  const double s = (x - x0).dot(nu) / nu.norm();
  if (s == 0.0) throw Error("halfspace_gradient: point on the hyperplane");
  return interval_constant(ctx.alpha()) * std::pow(std::abs(s), -ctx.alpha()) * nu / nu.norm();
}

double interval_constant(double alpha) { return make_context(1, alpha).mu() / alpha; }

double interval_union_gradient(const std::vector<Interval>& intervals, double t, double alpha) {
  double sum = 0.0;
  for (const auto& iv : intervals) {
    if (t == iv.lo || t == iv.hi) throw Error("interval_union_gradient: t is an endpoint");
    if (std::isfinite(iv.lo)) sum += std::pow(std::abs(t - iv.lo), -alpha);
    if (std::isfinite(iv.hi)) sum -= std::pow(std::abs(t - iv.hi), -alpha);
  }
  return interval_constant(alpha) * sum;
}

double ball_profile_exact(int n, double alpha, double t) {
  if (t < 0.0) throw Error("ball profile: t must be nonnegative");
  if (t == 1.0) throw Error("ball profile: t = 1 lies on the sphere");
  const double p = n + alpha - 1.0;
  if (n == 1) return std::pow(std::abs(t - 1.0), -p) - std::pow(t + 1.0, -p);
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  o.max_intervals = 20000;
  const double gap = std::abs(1.0 - t);
  if (n == 2) {
    // 2 int_0^pi cos(phi) (t^2 - 2 t cos(phi) + 1)^{-(1+alpha)/2}, peaked at phi = 0
    auto f = [&](double phi) -> Value {
      const double q = (1.0 - t) * (1.0 - t) + 4.0 * t * std::sin(0.5 * phi) * std::sin(0.5 * phi);
      return Value::Constant(1, 2.0 * std::cos(phi) * std::pow(q, -0.5 * p));
    };
    std::vector<double> br{0.0};
    for (double b : {gap, 4.0 * gap, 16.0 * gap})
      if (b < kPi) br.push_back(b);
    br.push_back(kPi);
    return integrate(f, std::span<const double>(br), 1, o).value(0);
  }
  if (n == 3) {
    // 2 pi int_{-1}^{1} u ((1-t)^2 + 2 t (1-u))^{-(2+alpha)/2} du, peaked at u = 1
    auto f = [&](double v) -> Value {
      // v = 1 - u in [0, 2]
      const double q = (1.0 - t) * (1.0 - t) + 2.0 * t * v;
      return Value::Constant(1, 2.0 * kPi * (1.0 - v) * std::pow(q, -0.5 * p));
    };
    std::vector<double> br{0.0};
    for (double b : {gap * gap, gap, 4.0 * gap})
      if (b < 2.0 && b > br.back()) br.push_back(b);
    br.push_back(2.0);
    return integrate(f, std::span<const double>(br), 1, o).value(0);
  }
  throw Error("ball profile: n out of range");
}

BallProfile::BallProfile(int n, double alpha, double t_min, double t_max, int nodes_per_decade, double window)
    : n_(n), alpha_(alpha), window_(window) {
  if (!(t_min > 0.0 && t_max > t_min && nodes_per_decade > 1 && window > 0.0))
    throw Error("ball profile: invalid table parameters");
  const double decades = std::log10(t_max / t_min);
  const int count = static_cast<int>(std::ceil(decades * nodes_per_decade)) + 1;
  for (int k = 0; k < count; ++k) {
    const double t = t_min * std::pow(10.0, decades * k / (count - 1));
    if (std::abs(t - 1.0) <= window) continue;
    if (t > 1.0 && split_ == 0) split_ = t_.size();
    t_.push_back(t);
    g_.push_back(ball_profile_exact(n, alpha, t));
  }
  // monotone (Fritsch-Carlson) slopes of log g against log t on each side of the window
  slope_.assign(t_.size(), 0.0);
  auto side = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return;
    std::vector<double> d(hi - lo - 1);
    for (std::size_t k = lo; k + 1 < hi; ++k)
      d[k - lo] = (std::log(g_[k + 1]) - std::log(g_[k])) / (std::log(t_[k + 1]) - std::log(t_[k]));
    slope_[lo] = d.front();
    slope_[hi - 1] = d.back();
    for (std::size_t k = lo + 1; k + 1 < hi; ++k) {
      const double a = d[k - lo - 1], b = d[k - lo];
      slope_[k] = (a * b <= 0.0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
    }
  };
  side(0, split_);
  side(split_, t_.size());
}

double BallProfile::interpolate(std::size_t lo, std::size_t hi, double t) const {
  const double x0 = std::log(t_[lo]), x1 = std::log(t_[hi]);
  const double y0 = std::log(g_[lo]), y1 = std::log(g_[hi]);
  const double h = x1 - x0, s = (std::log(t) - x0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return std::exp(h00 * y0 + h10 * h * slope_[lo] + h01 * y1 + h11 * h * slope_[hi]);
}

double BallProfile::operator()(double t) const {
  if (t_.empty() || t < t_.front() || t > t_.back() || std::abs(t - 1.0) <= window_)
    return ball_profile_exact(n_, alpha_, t);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return g_.back();
  const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  if (hi == 0) return g_.front();
  const std::size_t lo = hi - 1;
  if (lo + 1 == split_) return ball_profile_exact(n_, alpha_, t);  // straddles the window
  return interpolate(lo, hi, t);
}

const BallProfile& ball_profile(int n, double alpha) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<BallProfile>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, alpha}];
  if (!slot) slot = std::make_unique<BallProfile>(n, alpha);
  return *slot;
}

Point ball_gradient(const Point& x0, double r, const Point& x, const AlphaContext& ctx) {
  const int n = ctx.n();
  if (x0.size() != n || x.size() != n) throw Error("ball_gradient: dimension mismatch");
  if (!(r > 0.0)) throw Error("ball_gradient: radius must be positive");
  const Point w = (x - x0) / r;
  const double t = w.norm();
  if (t == 0.0) return Point::Zero(n);
  if (t == 1.0) throw Error("ball_gradient: point on the sphere");
  const double a = ctx.alpha();
  const double g = ball_profile_exact(n, a, t);
  return -(ctx.mu() / (n + a - 1.0)) * g * std::pow(r, -a) * (w / t);
}

IdentityPair gamma_beta_identity(double u, double s) {
  if (!(u > 0.0)) throw Error("gamma_beta_identity: u must be positive");
  if (!(s > 0.0)) throw Error("gamma_beta_identity: s must be positive");
  IdentityPair out;
  out.rhs = gamma_beta_ratio(s);
  const double e = -(s + 1.0) / 2.0;
  const double T = 8.0 * u;
  auto f = [&](double t) -> Value { return Value::Constant(1, std::pow(t * t + u * u, e)); };
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-14;
  const std::array<double, 4> br{0.0, u, 2.0 * u, T};
  const QuadResult q = integrate(f, std::span<const double>(br), 1, o);
  // tail: (t^2+u^2)^e = sum_k binom(e,k) u^{2k} t^{2e-2k}, integrated over (T, inf)
  double tail = 0.0, term = 0.0, coeff = 1.0;
  for (int k = 0; k < 40; ++k) {
    term = coeff * std::pow(u, 2 * k) * std::pow(T, 2 * e - 2 * k + 1) / (-(2 * e - 2 * k + 1));
    tail += term;
    coeff *= (e - k) / (k + 1.0);
  }
  const double scale = std::pow(u, s);
  out.lhs = 2.0 * scale * (q.value(0) + tail);
  out.lhs_error = 2.0 * scale * (q.error + std::abs(term));
  return out;
}

double halfspace_ball_integral(int n, double alpha, double radius) {
  if (n < 1 || n > 3) throw Error("halfspace_ball_integral: n out of range");
  const double lower = n == 1 ? 1.0 : unit_ball_volume(n - 1);
  const double a = 0.5 * (1.0 - alpha), b = 0.5 * (n + 1.0);
  const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return std::pow(radius, n - alpha) * lower * beta;
}

double halfspace_variation_on_ball(const AlphaContext& ctx, double radius) {
  return interval_constant(ctx.alpha()) * halfspace_ball_integral(ctx.n(), ctx.alpha(), radius);
}

GoldenTable GoldenTable::parse(const std::string& text) {
  GoldenTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    GoldenRecord r;
    std::string point;
    if (!(fields >> r.name)) continue;
    if (!(fields >> r.n >> r.alpha >> point >> r.expected >> r.provenance))
      throw Error("golden table: malformed record on line " + std::to_string(line_no));
    if (point != "-") {
      std::istringstream coords(point);
      std::string c;
      while (std::getline(coords, c, ',')) r.point.push_back(std::stod(c));
    }
    table.records_.push_back(std::move(r));
  }
  return table;
}

GoldenTable GoldenTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("golden table: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<GoldenRecord> GoldenTable::lookup(const std::string& name, int n, double alpha) const {
  for (const auto& r : records_)
    if (r.name == name && r.n == n && std::abs(r.alpha - alpha) <= 1e-12) return r;
  return std::nullopt;
}

const GoldenRecord& GoldenTable::find(const std::string& name, int n, double alpha) const {
  for (const auto& r : records_)
    if (r.name == name && r.n == n && std::abs(r.alpha - alpha) <= 1e-12) return r;
  throw Error("golden table: no record " + name + " for n=" + std::to_string(n) +
              " alpha=" + std::to_string(alpha));
}

}  // namespace fracvc
