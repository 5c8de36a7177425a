#ifndef FRACVC_ANALYSIS_HPP
#define FRACVC_ANALYSIS_HPP

#include <fracvc/fields.hpp>
#include <fracvc/fracops.hpp>
#include <fracvc/geometry.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/quadrature.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace fracvc {

/// Outer volume integrals run at cfg.tol; the pointwise densities inside them at
/// inner_tol_factor * cfg.tol.
inline constexpr double inner_tol_factor = 0.1;

struct Variation {
  /// D^alpha chi_E(B_R(center)).
  MeasureEstimate vector;
  /// |D^alpha chi_E|(B_R(center)).
  MeasureEstimate total;
};

Variation variation_on_ball(const SetSpec& set, const Point& center, double radius, const AlphaContext& ctx,
                            const QuadratureConfig& cfg);

struct NormalReport {
  Point point;
  std::vector<double> radii;
  std::vector<Point> ratios;
  std::vector<double> magnitudes;
  std::vector<double> error_bars;
  /// Radii whose error bar exceeds 10% of the ratio magnitude.
  std::vector<bool> flagged;
  std::optional<Point> limit_estimate;
  bool converged = false;
  /// Last two magnitudes within the threshold of each other.
  bool plateau = false;
  double threshold = 0.02;
  long evaluations = 0;
};

/// Ratios D^alpha chi_E(B_r(x)) / |D^alpha chi_E|(B_r(x)) along a decreasing ladder.
/// Each ratio is computed on the rescaled set (E - x)/r over B_1, which has the same ratio.
NormalReport frac_normal(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                         const AlphaContext& ctx, const QuadratureConfig& cfg, double threshold = 0.02);

/// frac_normal at a polygon vertex; the interesting output is the magnitude plateau.
NormalReport corner_probe(const SetSpec& set, const Point& vertex, const std::vector<double>& radii,
                          const AlphaContext& ctx, const QuadratureConfig& cfg, double threshold = 0.02);

struct BlowupReport {
  Point point;
  double ball_radius = 1.0;
  std::vector<double> radii;
  std::vector<Point> vector_values;
  std::vector<double> total_values;
  std::vector<double> error_bars;
  std::vector<Point> normals;
  /// |D^alpha chi_H|(B_R) for the half-space through the origin.
  double target_total = 0.0;
  /// |total_k - target| / target.
  std::vector<double> deviations;
  /// |vector_k - target_total * normal_k| / target.
  std::vector<double> vector_deviations;
  bool strictly_decreasing = false;
  bool converged = false;
  long evaluations = 0;
};

BlowupReport blowup_experiment(const SetSpec& set, const Point& x, const std::vector<double>& radii,
                               double ball_radius, const AlphaContext& ctx, const QuadratureConfig& cfg);

struct IbpReport {
  /// int f div^alpha phi + int phi . nabla^alpha f.
  MeasureEstimate residual;
  double f_div_phi = 0.0;
  double phi_grad_f = 0.0;
  /// ||f||_inf int |div^alpha phi| + ||phi||_inf int |nabla^alpha f|, both over the supports.
  double scale = 0.0;
};

IbpReport verify_ibp(const FieldSpec& f, const FieldSpec& phi, const AlphaContext& ctx, const QuadratureConfig& cfg);

struct PointResidual {
  Point residual;
  /// Sum of the error bars of all terms.
  double bars = 0.0;
  long evaluations = 0;
};

/// nabla^alpha(fg) - f nabla^alpha g - g nabla^alpha f - nabla^alpha_NL(f, g) at x.
PointResidual verify_leibniz_pointwise(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                       const QuadratureConfig& cfg);
/// nabla^alpha_NL(chi_E, chi_E) - (1 - 2 chi_E(x)) nabla^alpha chi_E at x.
PointResidual verify_nl_self(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                             const QuadratureConfig& cfg);

struct GaussGreenReport {
  /// int_F nabla^alpha chi_E.
  MeasureEstimate lhs;
  /// -int_E nabla^alpha chi_F.
  MeasureEstimate rhs;
};

GaussGreenReport verify_gauss_green(const SetSpec& e, const SetSpec& f, const AlphaContext& ctx,
                                    const QuadratureConfig& cfg);

struct ZeroReport {
  MeasureEstimate value;
  /// mu_{n,alpha} P_alpha(F) for the non-local case, 0 otherwise.
  double perimeter_scale = 0.0;
};

/// int over R^n of nabla^alpha_NL(chi_E, chi_F); F bounded.
ZeroReport verify_zero_average_nl(const SetSpec& e, const SetSpec& f, const AlphaContext& ctx,
                                  const QuadratureConfig& cfg);
/// int over R^n of nabla^alpha chi_E; E bounded.
ZeroReport verify_total_zero(const SetSpec& set, const AlphaContext& ctx, const QuadratureConfig& cfg);

using MollifyTarget = std::variant<SetSpec, FieldSpec>;

/// (rho_eps * u)(x).
double mollify_value(const MollifyTarget& u, double eps, const Point& x, const QuadratureConfig& cfg);

struct PreciseReport {
  Point point;
  std::vector<double> radii;
  std::vector<double> averages;
  /// Extrapolated u*(x) when the last two averages agree within the tolerance.
  std::optional<double> value;
  /// (rho_r * u)(x) at the smallest radius r.
  double mollified = 0.0;
  bool mollifier_agrees = false;
  double tolerance = 0.02;
};

PreciseReport precise_representative(const MollifyTarget& u, const Point& x, const std::vector<double>& radii,
                                     const QuadratureConfig& cfg, double tolerance = 0.02);

/// Average of u over B_r(x).
double ball_average(const MollifyTarget& u, const Point& x, double radius, const QuadratureConfig& cfg);

struct SmoothingReport {
  Point residual;
  MeasureEstimate lhs;
  MeasureEstimate rhs;
  double bars = 0.0;
};

/// nabla^alpha(rho_eps * chi_E)(x) - (rho_eps * nabla^alpha chi_E)(x).
SmoothingReport verify_smoothing(const SetSpec& set, double eps, const Point& x, const AlphaContext& ctx,
                                 const QuadratureConfig& cfg);

}  // namespace fracvc

#endif  // FRACVC_ANALYSIS_HPP
