#ifndef FRACVC_QUADRATURE_HPP
#define FRACVC_QUADRATURE_HPP

#include <fracvc/fields.hpp>
#include <fracvc/geometry.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/types.hpp>

#include <cstdint>
#include <functional>
#include <vector>

namespace fracvc {

/// Engine used for pointwise singular integrals.
enum class Method {
  /// Polar sweep: exact radial integrals along rays, adaptive Gauss-Kronrod over directions.
  ray_sweep,
  /// Dyadic cells with midpoint leaves, straddle refinement and an analytic tail bound.
  dyadic_cells,
};

struct QuadratureConfig {
  double tail_radius = 1.0e3;
  double base_cell = 0.5;
  int max_depth = 12;
  double tol = 1.0e-6;
  long mc_samples = 200000;
  std::uint64_t seed = 20240601;
  Method method = Method::ray_sweep;
  /// Cap on adaptive panels per one-dimensional integral.
  int max_intervals = 4000;
};

void validate(const QuadratureConfig& cfg);

struct MeasureEstimate {
  /// Scalar results use a one-component value.
  Value value;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
  /// Part of abs_error_estimate owed to truncation at the tail radius (cell engine).
  double tail_error = 0.0;

  double scalar() const { return value(0); }
};

/// What to do when the evaluation point lies on a set boundary.
enum class BoundaryPolicy {
  /// Throw "evaluation point on boundary".
  strict,
  /// Return a zero estimate; used inside volume integrals where such points are null.
  lenient,
};

// All integrals below omit the factor mu_{n,alpha}.

/// int (chi_E(y) - chi_E(x)) (y - x) / |y - x|^{n+alpha+1} dy.
MeasureEstimate singular_integral_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                      const QuadratureConfig& cfg, BoundaryPolicy policy = BoundaryPolicy::strict);
/// Same integral for a scalar Lipschitz field.
MeasureEstimate singular_integral_field(const FieldSpec& f, const Point& x, const AlphaContext& ctx,
                                        const QuadratureConfig& cfg);
/// Same integral for a product of fields and indicators.
MeasureEstimate singular_integral_operand(const Operand& f, const Point& x, const AlphaContext& ctx,
                                          const QuadratureConfig& cfg,
                                          BoundaryPolicy policy = BoundaryPolicy::strict);
/// int (phi(y) - phi(x)) . (y - x) / |y - x|^{n+alpha+1} dy.
MeasureEstimate singular_integral_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                             const QuadratureConfig& cfg);
/// int (f(y) - f(x)) (g(y) - g(x)) (y - x) / |y - x|^{n+alpha+1} dy.
MeasureEstimate singular_integral_nl(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                     const QuadratureConfig& cfg, BoundaryPolicy policy = BoundaryPolicy::strict);
/// int (f(y) - f(x)) (phi(y) - phi(x)) . (y - x) / |y - x|^{n+alpha+1} dy.
MeasureEstimate singular_integral_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x,
                                                const AlphaContext& ctx, const QuadratureConfig& cfg);

/// The set integral by dyadic cells (independent of cfg.method).
MeasureEstimate singular_integral_set_cells(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                            const QuadratureConfig& cfg);

// Monte Carlo oracles: uniform directions with antithetic pairs, radial importance
// sampling matched to r^{-1-alpha}. abs_error_estimate is one standard error.

MeasureEstimate mc_singular_integral_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                         const QuadratureConfig& cfg);
MeasureEstimate mc_singular_integral_operand(const Operand& f, const Point& x, const AlphaContext& ctx,
                                             const QuadratureConfig& cfg);
MeasureEstimate mc_singular_integral_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                                const QuadratureConfig& cfg);
MeasureEstimate mc_singular_integral_nl(const Operand& f, const Operand& g, const Point& x,
                                        const AlphaContext& ctx, const QuadratureConfig& cfg);
MeasureEstimate mc_singular_integral_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x,
                                                   const AlphaContext& ctx, const QuadratureConfig& cfg);

/// Integrand of a volume integral: returns `components` values followed by a
/// nonnegative bound on the pointwise error of those values.
using VolumeIntegrand = std::function<Value(const Point&)>;

struct VolumeOptions {
  /// Origin of the polar coordinates; place it where the integrand is worst.
  Point center;
  /// Sets whose boundaries carry a dist^{-blowup} singularity of the integrand.
  std::vector<SetSpec> guides;
  double blowup = 0.0;
  /// For unbounded regions: the integrand decays like |y|^{-(n + decay)}.
  double decay = 1.0;
  /// Length scale used to start the far field when nothing else fixes one.
  double scale = 1.0;
  double tol = 1.0e-5;
  int max_intervals_radial = 400;
  int max_intervals_angular = 3000;
};

/// Integral of g over a region (any SetSpec, possibly unbounded).
MeasureEstimate volume_integral(const VolumeIntegrand& g, int components, const SetSpec& region,
                                const VolumeOptions& opt);

}  // namespace fracvc

#endif  // FRACVC_QUADRATURE_HPP
