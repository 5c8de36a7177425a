#ifndef FRACVC_ORACLES_HPP
#define FRACVC_ORACLES_HPP

#include <fracvc/geometry.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/types.hpp>

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fracvc {

/// Closed form for chi of {(y - x0) . nu > 0}: (mu_{1,alpha}/alpha) nu |(x - x0) . nu|^{-alpha}.
Point halfspace_gradient(const Point& x0, const Point& nu, const Point& x, const AlphaContext& ctx);

/// c_alpha = mu_{1,alpha} / alpha.
double interval_constant(double alpha);

/// c_alpha sum_k (|t - a_k|^{-alpha} - |t - b_k|^{-alpha}); infinite endpoints drop out.
double interval_union_gradient(const std::vector<Interval>& intervals, double t, double alpha);

/// g_{n,alpha}(t) = int over the unit sphere of y_1 |t e_1 - y|^{-(n+alpha-1)}, by direct quadrature.
double ball_profile_exact(int n, double alpha, double t);

/// Tabulated g_{n,alpha} on a log-spaced grid with monotone interpolation in
/// log-log coordinates. Points inside the excluded window around t = 1, or
/// outside the table, fall back to direct quadrature.
class BallProfile {
 public:
  BallProfile(int n, double alpha, double t_min = 1e-3, double t_max = 1e3, int nodes_per_decade = 40,
              double window = 0.02);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double operator()(double t) const;
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& values() const { return g_; }

 private:
  double interpolate(std::size_t lo, std::size_t hi, double t) const;

  int n_;
  double alpha_;
  double window_;
  std::vector<double> t_, g_, slope_;
  std::size_t split_ = 0;  // first node above the window
};

/// Shared profile per (n, alpha), built once on first use.
const BallProfile& ball_profile(int n, double alpha);

/// nabla^alpha chi_{B_r(x0)}(x); zero at the center.
Point ball_gradient(const Point& x0, double r, const Point& x, const AlphaContext& ctx);

struct IdentityPair {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Quadrature error plus the first omitted term of the tail series.
  double lhs_error = 0.0;
};

/// u^s int_R (t^2 + u^2)^{-(s+1)/2} dt against Gamma(s/2) sqrt(pi) / Gamma((s+1)/2).
IdentityPair gamma_beta_identity(double u, double s);

/// int_{B_R} |y . nu|^{-alpha} dy = R^{n-alpha} |B^{n-1}| B((1-alpha)/2, (n+1)/2).
double halfspace_ball_integral(int n, double alpha, double radius);

/// |D^alpha chi_H|(B_R(x)) for x on the hyperplane: the blow-up target.
double halfspace_variation_on_ball(const AlphaContext& ctx, double radius);

struct GoldenRecord {
  std::string name;
  int n = 0;
  double alpha = 0.0;
  std::vector<double> point;
  double expected = 0.0;
  std::string provenance;
};

/// Whitespace separated records "name n alpha point expected provenance";
/// point is "-" or a comma list; '#' starts a comment.
class GoldenTable {
 public:
  static GoldenTable load(const std::string& path);
  static GoldenTable parse(const std::string& text);

  const std::vector<GoldenRecord>& records() const { return records_; }
  /// Exact match on name and n, alpha within 1e-12; throws when absent.
  const GoldenRecord& find(const std::string& name, int n, double alpha) const;
  std::optional<GoldenRecord> lookup(const std::string& name, int n, double alpha) const;

 private:
  std::vector<GoldenRecord> records_;
};

}  // namespace fracvc

#endif  // FRACVC_ORACLES_HPP
